#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ruler/rng.hpp"
#include "ruler/rules.hpp"

namespace ruler {

struct AugmentConfig {
  double aug_rate = 0.9;
  int max_rules = 3;
  TemplateMode template_mode = TemplateMode::diverse;
  int epochs = 3;
  std::uint64_t seed = 0;
  // Empty set means every rule is eligible.
  std::set<RuleId> enabled_rules;

  bool rule_enabled(RuleId id) const {
    return enabled_rules.empty() || enabled_rules.count(id) > 0;
  }
};

struct SeedPath {
  std::uint64_t seed = 0;
  std::size_t epoch = 0;
  std::size_t index = 0;
  bool operator==(const SeedPath&) const = default;
};

struct AugmentedSample {
  std::size_t source_id = 0;
  std::size_t epoch = 0;
  std::string instruction_aug;
  std::string response_aug;
  // Carried through untouched; rules never bind to it, but the emitted
  // records keep the field.
  std::string input;
  // Canonical composition order; replaying transform_response over these
  // reproduces response_aug from the source response.
  std::vector<RuleInstance> applied;
  SeedPath seed_path;
  // Aug-rate gate outcome. Distinct from applied.empty(): a gated-in sample
  // still draws k = 0 sometimes.
  bool gated = false;
};

// Stream is a pure function of the triple; see Rng::derive.
Rng derive_rng(std::uint64_t seed, std::size_t epoch, std::size_t sample_index);

// Sorts instances into the order transforms must run: targeted case, whole
// case, punctuation, wrapping (paragraph, bullet, sentence, keyword), then
// prefixes and repetition. Selection order breaks ties.
std::vector<RuleInstance> canonical_order(std::vector<RuleInstance> instances);

class Engine {
 public:
  Engine(const Catalog& catalog, AugmentConfig cfg);

  const AugmentConfig& config() const { return cfg_; }
  const Catalog& catalog() const { return catalog_; }

  // Draw sequence: k, then per accepted instance its bind draws and (in
  // diverse mode) a template draw. Conflicting candidates are discarded and
  // their rule leaves the pool; the keyword rules that accept repeats stay.
  std::vector<RuleInstance> select_rules(const SftSample& sample,
                                         const TextProfile& prof,
                                         Rng& rng) const;

  AugmentedSample augment_sample(const SftSample& sample, SeedPath path,
                                 Rng& rng) const;

  std::vector<AugmentedSample> augment_dataset(
      const std::vector<SftSample>& samples) const;

  // Runs the transform chain over already-ordered instances. The strict
  // variant throws CompositionConflict; the dropping variant skips the
  // offending instance and records survivors in `applied`.
  std::string compose_strict(const std::vector<RuleInstance>& ordered,
                             std::string_view response) const;
  std::string compose_dropping(const std::vector<RuleInstance>& ordered,
                               std::string_view response,
                               std::vector<RuleInstance>& applied) const;

 private:
  const Catalog& catalog_;
  AugmentConfig cfg_;
};

}  // namespace ruler
