#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace labelagg {

/// Dense label index in [0, num_labels).
using Label = std::int32_t;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ValidationError : public Error {
 public:
  using Error::Error;
};
class ShapeError : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};
class NumericError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The set of label choices offered to workers. Holds only its size;
/// label names live at the I/O boundary.
class Taxonomy {
 public:
  /// Throws ValidationError when num_labels < 2.
  explicit Taxonomy(int num_labels);

  int num_labels() const noexcept { return num_labels_; }
  bool contains(Label label) const noexcept {
    return label >= 0 && label < num_labels_;
  }

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;

 private:
  int num_labels_;
};

/// Row-major table of doubles (items x labels, labels x labels, ...).
class RealTable {
 public:
  RealTable() = default;
  RealTable(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const RealTable&, const RealTable&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// One answer per (item, worker). Immutable after construction.
class AnnotationMatrix {
 public:
  /// `answers` is row-major, num_items x num_workers. Throws ShapeError on a
  /// size mismatch or empty shape, ValidationError naming (item, worker) for
  /// an out-of-range label.
  AnnotationMatrix(Taxonomy taxonomy, std::size_t num_items, std::size_t num_workers,
                   std::vector<Label> answers);

  /// Builds from a table of rows (one row per item). Ragged rows -> ShapeError.
  static AnnotationMatrix from_rows(Taxonomy taxonomy,
                                    const std::vector<std::vector<Label>>& rows);

  /// Builds from per-worker answer columns, each of length num_items.
  static AnnotationMatrix from_columns(Taxonomy taxonomy,
                                       const std::vector<std::vector<Label>>& columns);

  const Taxonomy& taxonomy() const noexcept { return taxonomy_; }
  int num_labels() const noexcept { return taxonomy_.num_labels(); }
  std::size_t num_items() const noexcept { return num_items_; }
  std::size_t num_workers() const noexcept { return num_workers_; }

  Label operator()(std::size_t item, std::size_t worker) const {
    return answers_[item * num_workers_ + worker];
  }
  /// All workers' answers for one item.
  std::span<const Label> item(std::size_t s) const {
    return {answers_.data() + s * num_workers_, num_workers_};
  }
  std::span<const Label> answers() const noexcept { return answers_; }

  /// FNV-1a over the shape and every entry; identifies the matrix in results.
  std::uint64_t hash() const noexcept;

  friend bool operator==(const AnnotationMatrix&, const AnnotationMatrix&) = default;

 private:
  Taxonomy taxonomy_;
  std::size_t num_items_;
  std::size_t num_workers_;
  std::vector<Label> answers_;
};

/// Hard ground-truth labels, one per item.
class TruthAssignment {
 public:
  TruthAssignment(Taxonomy taxonomy, std::vector<Label> labels);

  const Taxonomy& taxonomy() const noexcept { return taxonomy_; }
  std::size_t size() const noexcept { return labels_.size(); }
  Label operator[](std::size_t s) const { return labels_[s]; }
  std::span<const Label> labels() const noexcept { return labels_; }

  friend bool operator==(const TruthAssignment&, const TruthAssignment&) = default;

 private:
  Taxonomy taxonomy_;
  std::vector<Label> labels_;
};

/// Output of every aggregator: a per-item distribution over labels plus the
/// chosen hard label.
struct TruthEstimate {
  RealTable posterior;             // items x labels, rows sum to 1
  std::vector<Label> hard_labels;  // attains the row maximum
  std::vector<bool> tie_flags;     // several labels shared the row maximum
  std::vector<bool> dropped;       // excluded from scoring

  std::size_t num_items() const noexcept { return hard_labels.size(); }
  std::size_t tie_count() const;
  std::size_t dropped_count() const;
};

/// Index of the largest entry; the smallest index wins among exact ties.
std::size_t argmax_lowest(std::span<const double> values);

/// Number of entries equal to the maximum (exact comparison).
std::size_t count_maxima(std::span<const double> values);

/// Fills hard_labels/tie_flags from the posterior with lowest-index
/// tie-breaking and clears the dropped mask.
TruthEstimate estimate_from_posterior(RealTable posterior);

}  // namespace labelagg
