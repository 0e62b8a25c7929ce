#pragma once

#include <optional>
#include <map>
#include <string>
#include <vector>

#include "ruler/engine.hpp"
#include "ruler/rules.hpp"

namespace ruler {

enum class DatasetFormat {
  alpaca,  // one JSON array; records {instruction, input, output}
  jsonl,   // one JSON object per line; records {instruction, input?, response}
};

std::string_view to_string(DatasetFormat fmt);
std::optional<DatasetFormat> format_from_string(std::string_view name);

// Order-preserving; ids are record positions starting at 0. Alpaca "output"
// becomes the response; a non-empty "input" stays in the input field.
std::vector<SftSample> read_dataset(const std::string& path,
                                    DatasetFormat fmt);

// Emits {instruction: instruction_aug, input, output|response: response_aug}.
// Writes a temp file and renames, so failures leave no partial output. When
// with_provenance is set, a sidecar `<path>.prov.jsonl` (one versioned JSON
// object per record, "v": 1) captures everything needed to rebuild the
// AugmentedSamples: ids, gate outcome, seed path, and each applied instance
// with bound params, template index, placement, and rendered instruction.
void write_dataset(const std::vector<AugmentedSample>& augs,
                   const std::string& path, DatasetFormat fmt,
                   bool with_provenance);

// Reads a dataset written by write_dataset together with its sidecar.
// Throws IoError when the sidecar is missing, ParseError when the two files
// disagree in length.
std::vector<AugmentedSample> read_augmented(const std::string& path,
                                            DatasetFormat fmt);

struct StatsReport {
  std::size_t total_samples = 0;
  std::size_t gated_samples = 0;
  double gate_fraction = 0.0;
  std::size_t total_applications = 0;
  // Keyed by rule / family name; every catalog entry present, zeros kept.
  std::map<std::string, std::size_t> per_rule;
  std::map<std::string, std::size_t> per_family;
  // applied-count -> number of samples; sums to total_samples.
  std::map<std::size_t, std::size_t> rule_count_histogram;
  // Instruction bytes added by rule text (rendered instructions plus
  // separators), exact from provenance.
  double mean_instruction_delta = 0.0;
  // Response growth needs the source dataset; absent when not supplied.
  std::optional<double> mean_response_delta;
};

// `sources`, when given, is the original dataset indexed by source_id.
StatsReport stats(const std::vector<AugmentedSample>& augs,
                  const std::vector<SftSample>* sources = nullptr);

std::string stats_to_json(const StatsReport& report);

}  // namespace ruler
