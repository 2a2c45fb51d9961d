#include "labelagg/types.hpp"

#include <algorithm>
#include <string>

namespace labelagg {

Taxonomy::Taxonomy(int num_labels) : num_labels_(num_labels) {
  if (num_labels < 2) {
    throw ValidationError("taxonomy needs at least 2 labels, got " +
                          std::to_string(num_labels));
  }
}

AnnotationMatrix::AnnotationMatrix(Taxonomy taxonomy, std::size_t num_items,
                                   std::size_t num_workers, std::vector<Label> answers)
    : taxonomy_(taxonomy),
      num_items_(num_items),
      num_workers_(num_workers),
      answers_(std::move(answers)) {
  if (num_items_ == 0 || num_workers_ == 0) {
    throw ShapeError("annotation matrix needs at least one item and one worker");
  }
  if (answers_.size() != num_items_ * num_workers_) {
    throw ShapeError("annotation matrix expects " + std::to_string(num_items_ * num_workers_) +
                     " answers, got " + std::to_string(answers_.size()));
  }
  for (std::size_t s = 0; s < num_items_; ++s) {
    for (std::size_t w = 0; w < num_workers_; ++w) {
      const Label label = answers_[s * num_workers_ + w];
      if (!taxonomy_.contains(label)) {
        throw ValidationError("invalid label " + std::to_string(label) + " at (item " +
                              std::to_string(s) + ", worker " + std::to_string(w) +
                              "); taxonomy has " + std::to_string(taxonomy_.num_labels()) +
                              " labels");
      }
    }
  }
}

AnnotationMatrix AnnotationMatrix::from_rows(Taxonomy taxonomy,
                                             const std::vector<std::vector<Label>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw ShapeError("annotation table is empty");
  }
  const std::size_t width = rows.front().size();
  std::vector<Label> flat;
  flat.reserve(rows.size() * width);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    if (rows[s].size() != width) {
      throw ShapeError("ragged annotation table: row " + std::to_string(s) + " has " +
                       std::to_string(rows[s].size()) + " answers, expected " +
                       std::to_string(width));
    }
    flat.insert(flat.end(), rows[s].begin(), rows[s].end());
  }
  return AnnotationMatrix(taxonomy, rows.size(), width, std::move(flat));
}

AnnotationMatrix AnnotationMatrix::from_columns(Taxonomy taxonomy,
                                                const std::vector<std::vector<Label>>& columns) {
  if (columns.empty() || columns.front().empty()) {
    throw ShapeError("annotation table is empty");
  }
  const std::size_t num_items = columns.front().size();
  const std::size_t num_workers = columns.size();
  std::vector<Label> flat(num_items * num_workers);
  for (std::size_t w = 0; w < num_workers; ++w) {
    if (columns[w].size() != num_items) {
      throw ShapeError("worker " + std::to_string(w) + " answered " +
                       std::to_string(columns[w].size()) + " items, expected " +
                       std::to_string(num_items));
    }
    for (std::size_t s = 0; s < num_items; ++s) flat[s * num_workers + w] = columns[w][s];
  }
  return AnnotationMatrix(taxonomy, num_items, num_workers, std::move(flat));
}

std::uint64_t AnnotationMatrix::hash() const noexcept {
  constexpr std::uint64_t kOffset = 14695981039346656037ULL;
  constexpr std::uint64_t kPrime = 1099511628211ULL;
  std::uint64_t h = kOffset;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= kPrime;
    }
  };
  mix(static_cast<std::uint64_t>(taxonomy_.num_labels()));
  mix(num_items_);
  mix(num_workers_);
  for (Label a : answers_) mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)));
  return h;
}

TruthAssignment::TruthAssignment(Taxonomy taxonomy, std::vector<Label> labels)
    : taxonomy_(taxonomy), labels_(std::move(labels)) {
  for (std::size_t s = 0; s < labels_.size(); ++s) {
    if (!taxonomy_.contains(labels_[s])) {
      throw ValidationError("invalid truth label " + std::to_string(labels_[s]) +
                            " at item " + std::to_string(s));
    }
  }
}

std::size_t TruthEstimate::tie_count() const {
  return static_cast<std::size_t>(std::count(tie_flags.begin(), tie_flags.end(), true));
}

std::size_t TruthEstimate::dropped_count() const {
  return static_cast<std::size_t>(std::count(dropped.begin(), dropped.end(), true));
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::size_t count_maxima(std::span<const double> values) {
  const double top = values[argmax_lowest(values)];
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double v) { return v == top; }));
}

TruthEstimate estimate_from_posterior(RealTable posterior) {
  TruthEstimate out;
  const std::size_t n = posterior.rows();
  out.hard_labels.resize(n);
  out.tie_flags.assign(n, false);
  out.dropped.assign(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    const auto row = posterior.row(s);
    out.hard_labels[s] = static_cast<Label>(argmax_lowest(row));
    out.tie_flags[s] = count_maxima(row) > 1;
  }
  out.posterior = std::move(posterior);
  return out;
}

}  // namespace labelagg
