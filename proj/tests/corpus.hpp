#pragma once

#include <string>
#include <vector>

#include "ruler/rules.hpp"

namespace testsup {

// Three-paragraph, nine-sentence narrative used across segmentation,
// binding, and golden-replay tests.
extern const std::string kKnightStory;

// One-paragraph, six-sentence first-person response; contains the keyword
// "way" exactly once.
extern const std::string kTeamResponse;

// Deterministic synthetic SFT corpus: 1-3 paragraphs of 1-5 sentences,
// roughly half the samples carry a bullet block, with decimals,
// abbreviations, apostrophes, and hyphens sprinkled in. Every content word
// is covered by the shipped POS lexicon so part-of-speech counts are
// non-trivial.
std::vector<ruler::SftSample> make_corpus(std::size_t n, std::uint64_t seed);

}  // namespace testsup
