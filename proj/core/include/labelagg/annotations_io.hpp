#pragma once

#include <filesystem>
#include <iosfwd>

#include "labelagg/types.hpp"

namespace labelagg {

// annotations.csv: header "item_id,worker_0,...,worker_{W-1}", then one row
// per item with integer label indices.
void write_annotations_csv(const AnnotationMatrix& matrix, std::ostream& out);
void write_annotations_csv(const AnnotationMatrix& matrix, const std::filesystem::path& path);

/// Throws ParseError (with line number) on malformed input, and the
/// AnnotationMatrix validation errors for out-of-range labels.
AnnotationMatrix read_annotations_csv(std::istream& in, const Taxonomy& taxonomy);
AnnotationMatrix read_annotations_csv(const std::filesystem::path& path, const Taxonomy& taxonomy);

// truth.csv: "item_id,label".
void write_truth_csv(const TruthAssignment& truth, std::ostream& out);
void write_truth_csv(const TruthAssignment& truth, const std::filesystem::path& path);
TruthAssignment read_truth_csv(std::istream& in, const Taxonomy& taxonomy);
TruthAssignment read_truth_csv(const std::filesystem::path& path, const Taxonomy& taxonomy);

// estimate.csv: "item_id,label,tie,dropped,p_0,...,p_{G-1}".
void write_estimate_csv(const TruthEstimate& estimate, std::ostream& out);
void write_estimate_csv(const TruthEstimate& estimate, const std::filesystem::path& path);

}  // namespace labelagg
