#pragma once

#include "ruler/rules.hpp"

namespace ruler {

// True when applying both instances to one sample could leave either
// constraint unverifiable under the canonical composition order. Symmetric.
// Coarse groups (case-exclusive, punctuation, instruction-prefix,
// response-repeat) always clash; the remaining entries are pairwise
// interactions of specific rules, a few of them parameter-dependent
// (e.g. a removal target appearing inside a wrap marker).
bool conflicts(const RuleInstance& a, const RuleInstance& b);

}  // namespace ruler
