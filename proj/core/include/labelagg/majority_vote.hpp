#pragma once

#include <cstdint>
#include <string_view>

#include "labelagg/types.hpp"

namespace labelagg {

/// What to do when several labels share the top vote count.
enum class TiePolicy {
  weighted_random,  // uniform among the tied top labels
  lowest_index,     // smallest tied label index
  drop,             // flag the item as dropped; it is excluded from scoring
};

std::string_view to_string(TiePolicy policy) noexcept;
/// Accepts the CLI spellings (weighted-random, lowest-index, drop) and the
/// underscore forms.
TiePolicy parse_tie_policy(std::string_view text);

/// Plurality vote. Posterior rows are the vote fractions; `seed` drives the
/// weighted_random choice only.
TruthEstimate majority_vote(const AnnotationMatrix& matrix, TiePolicy policy,
                            std::uint64_t seed = 0);

}  // namespace labelagg
