#pragma once

#include <map>
#include <string>
#include <vector>

#include "ruler/engine.hpp"
#include "ruler/rules.hpp"
#include "ruler/textseg.hpp"

namespace ruler {

struct ConstraintResult {
  RuleId rule = RuleId::KeywordAppearance;
  bool satisfied = false;
  std::string observed;  // e.g. "7 sentences vs exactly 9"
  std::vector<Span> span_evidence;
};

struct VerificationReport {
  std::size_t sample_ref = 0;
  std::vector<ConstraintResult> results;  // one per applied instance
  bool pass = true;                       // conjunction of results
};

struct RulePassCount {
  std::size_t passed = 0;
  std::size_t total = 0;
};

struct DatasetSummary {
  std::size_t total_samples = 0;
  std::size_t passed_samples = 0;
  // passed_samples / total_samples; 0 for an empty dataset.
  double overall_pass_rate = 0.0;
  // Denominators count rule instances, not samples.
  std::map<RuleId, RulePassCount> per_rule;
  std::vector<std::size_t> failing_samples;  // positions in input order
};

// Decides constraint satisfaction from (instance, instruction_aug,
// response_aug) alone, using the same segmentation the binder used. Total:
// anything malformed reads as unsatisfied, never an error.
class Verifier {
 public:
  explicit Verifier(const TextAnalyzer& analyzer) : analyzer_(analyzer) {}

  ConstraintResult verify_constraint(const RuleInstance& instance,
                                     std::string_view instruction_aug,
                                     std::string_view response_aug) const;

  VerificationReport verify_sample(const AugmentedSample& aug) const;

  DatasetSummary verify_dataset(const std::vector<AugmentedSample>& augs) const;

 private:
  const TextAnalyzer& analyzer_;
};

}  // namespace ruler
