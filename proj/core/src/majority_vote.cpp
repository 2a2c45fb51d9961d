#include "labelagg/majority_vote.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "labelagg/random.hpp"

namespace labelagg {

std::string_view to_string(TiePolicy policy) noexcept {
  switch (policy) {
    case TiePolicy::weighted_random:
      return "weighted-random";
    case TiePolicy::lowest_index:
      return "lowest-index";
    case TiePolicy::drop:
      return "drop";
  }
  return "unknown";
}

TiePolicy parse_tie_policy(std::string_view text) {
  if (text == "weighted-random" || text == "weighted_random") return TiePolicy::weighted_random;
  if (text == "lowest-index" || text == "lowest_index") return TiePolicy::lowest_index;
  if (text == "drop") return TiePolicy::drop;
  throw ParseError("unknown tie policy '" + std::string(text) +
                   "' (expected weighted-random|lowest-index|drop)");
}

TruthEstimate majority_vote(const AnnotationMatrix& matrix, TiePolicy policy,
                            std::uint64_t seed) {
  const std::size_t num_items = matrix.num_items();
  const auto g = static_cast<std::size_t>(matrix.num_labels());
  const double w = static_cast<double>(matrix.num_workers());

  TruthEstimate out;
  out.posterior = RealTable(num_items, g);
  out.hard_labels.resize(num_items);
  out.tie_flags.assign(num_items, false);
  out.dropped.assign(num_items, false);

  Rng rng(seed);
  std::vector<int> votes(g);
  std::vector<Label> tied;
  for (std::size_t s = 0; s < num_items; ++s) {
    std::fill(votes.begin(), votes.end(), 0);
    for (Label a : matrix.item(s)) ++votes[static_cast<std::size_t>(a)];

    const int top = *std::max_element(votes.begin(), votes.end());
    tied.clear();
    for (std::size_t j = 0; j < g; ++j) {
      out.posterior(s, j) = votes[j] / w;
      if (votes[j] == top) tied.push_back(static_cast<Label>(j));
    }

    out.hard_labels[s] = tied.front();
    if (tied.size() == 1) continue;
    out.tie_flags[s] = true;
    switch (policy) {
      case TiePolicy::weighted_random:
        out.hard_labels[s] = tied[rng.below(tied.size())];
        break;
      case TiePolicy::lowest_index:
        break;
      case TiePolicy::drop:
        out.dropped[s] = true;
        break;
    }
  }
  return out;
}

}  // namespace labelagg
