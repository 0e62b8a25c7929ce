#include "ruler/engine.hpp"

#include <algorithm>
#include <iostream>

#include "ruler/conflicts.hpp"
#include "ruler/errors.hpp"

namespace ruler {

namespace {

// Transform phase rank; lower runs earlier. Non-mutating rules sort last,
// where their identity transforms cannot disturb anything.
int phase_rank(RuleId id) {
  switch (id) {
    case RuleId::LetterCase: return 0;
    case RuleId::KeywordCase: return 1;
    case RuleId::SentenceCase: return 2;
    case RuleId::ParagraphCase: return 3;
    case RuleId::UpCase: return 4;
    case RuleId::LowCase: return 5;
    case RuleId::PunctAllRemoval: return 6;
    case RuleId::PunctAllReplacement: return 7;
    case RuleId::PunctTargetRemoval: return 8;
    case RuleId::PunctTargetReplacement: return 9;
    case RuleId::ParagraphWrapping: return 10;
    case RuleId::BulletWrapping: return 11;
    case RuleId::SentenceWrapping: return 12;
    case RuleId::KeywordWrapping: return 13;
    case RuleId::InstructionRepetition: return 14;
    case RuleId::InstructionWrapping: return 15;
    case RuleId::ResponseRepetition: return 16;
    case RuleId::ResponseWrapping: return 17;
    default: return 100;
  }
}

AugmentedSample identity_augmentation(const SftSample& sample, SeedPath path,
                                      bool gated) {
  AugmentedSample out;
  out.source_id = sample.id;
  out.epoch = path.epoch;
  out.instruction_aug = sample.instruction;
  out.response_aug = sample.response;
  out.input = sample.input;
  out.seed_path = path;
  out.gated = gated;
  return out;
}

}  // namespace

Rng derive_rng(std::uint64_t seed, std::size_t epoch,
               std::size_t sample_index) {
  return Rng::derive(seed, epoch, sample_index);
}

std::vector<RuleInstance> canonical_order(std::vector<RuleInstance> instances) {
  std::stable_sort(instances.begin(), instances.end(),
                   [](const RuleInstance& a, const RuleInstance& b) {
                     return phase_rank(a.rule) < phase_rank(b.rule);
                   });
  return instances;
}

Engine::Engine(const Catalog& catalog, AugmentConfig cfg)
    : catalog_(catalog), cfg_(std::move(cfg)) {}

std::vector<RuleInstance> Engine::select_rules(const SftSample& sample,
                                               const TextProfile& prof,
                                               Rng& rng) const {
  std::vector<RuleInstance> selected;
  long k = static_cast<long>(
      rng.uniform_int(0, static_cast<std::int64_t>(cfg_.max_rules)));
  if (k == 0) return selected;

  std::vector<RuleId> pool;
  for (RuleId id : all_rules()) {
    if (cfg_.rule_enabled(id) && catalog_.applicable(id, sample, prof))
      pool.push_back(id);
  }

  while (static_cast<long>(selected.size()) < k && !pool.empty()) {
    std::size_t pick = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
    RuleId id = pool[pick];
    RuleInstance inst = catalog_.bind(id, sample, prof, rng);
    bool clash = std::any_of(
        selected.begin(), selected.end(),
        [&](const RuleInstance& s) { return conflicts(inst, s); });
    if (clash) {
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      continue;
    }
    catalog_.render_instruction(inst, cfg_.template_mode, rng);
    selected.push_back(std::move(inst));
    bool may_repeat = id == RuleId::KeywordAppearance ||
                      id == RuleId::KeywordWrapping;
    if (!may_repeat)
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return selected;
}

std::string Engine::compose_strict(const std::vector<RuleInstance>& ordered,
                                   std::string_view response) const {
  std::string text(response);
  for (const RuleInstance& inst : ordered)
    text = catalog_.transform_response(inst, text);
  return text;
}

std::string Engine::compose_dropping(const std::vector<RuleInstance>& ordered,
                                     std::string_view response,
                                     std::vector<RuleInstance>& applied) const {
  std::string text(response);
  applied.clear();
  for (const RuleInstance& inst : ordered) {
    try {
      text = catalog_.transform_response(inst, text);
      applied.push_back(inst);
    } catch (const CompositionConflict&) {
      // dropped
    }
  }
  return text;
}

AugmentedSample Engine::augment_sample(const SftSample& sample, SeedPath path,
                                       Rng& rng) const {
  if (sample.response.empty()) {
    std::cerr << "warning: sample " << sample.id
              << " has an empty response; passed through unaugmented\n";
    return identity_augmentation(sample, path, false);
  }
  bool gated = rng.bernoulli(cfg_.aug_rate);
  if (!gated) return identity_augmentation(sample, path, false);

  TextProfile prof = catalog_.analyzer().profile(sample.response);
  std::vector<RuleInstance> ordered =
      canonical_order(select_rules(sample, prof, rng));

  std::vector<RuleInstance> applied;
  std::string response_aug;
  try {
    response_aug = compose_strict(ordered, sample.response);
    applied = ordered;
  } catch (const CompositionConflict&) {
    // One fresh selection; if that also trips, drop the offenders.
    ordered = canonical_order(select_rules(sample, prof, rng));
    response_aug = compose_dropping(ordered, sample.response, applied);
  }

  AugmentedSample out = identity_augmentation(sample, path, true);
  if (applied.empty()) return out;

  std::string prefix, suffix;
  for (const RuleInstance& inst : applied) {
    std::string& side =
        inst.placement == Placement::prepend ? prefix : suffix;
    if (!side.empty()) side += "\n";
    side += inst.rendered_instruction;
  }
  out.instruction_aug = sample.instruction;
  if (!prefix.empty()) out.instruction_aug = prefix + "\n" + out.instruction_aug;
  if (!suffix.empty()) out.instruction_aug += "\n" + suffix;
  out.response_aug = std::move(response_aug);
  out.applied = std::move(applied);
  return out;
}

std::vector<AugmentedSample> Engine::augment_dataset(
    const std::vector<SftSample>& samples) const {
  if (samples.empty())
    throw EmptyDataset("augment_dataset called with no samples");
  std::vector<AugmentedSample> out;
  out.reserve(samples.size() * static_cast<std::size_t>(cfg_.epochs));
  for (int e = 0; e < cfg_.epochs; ++e) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      SeedPath path{cfg_.seed, static_cast<std::size_t>(e), i};
      Rng rng = derive_rng(path.seed, path.epoch, path.index);
      out.push_back(augment_sample(samples[i], path, rng));
    }
  }
  return out;
}

}  // namespace ruler
