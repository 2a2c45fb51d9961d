#include "labelagg/annotations_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "labelagg/csv.hpp"

namespace labelagg {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

}  // namespace

void write_annotations_csv(const AnnotationMatrix& matrix, std::ostream& out) {
  out << "item_id";
  for (std::size_t w = 0; w < matrix.num_workers(); ++w) out << ",worker_" << w;
  out << '\n';
  for (std::size_t s = 0; s < matrix.num_items(); ++s) {
    out << s;
    for (Label a : matrix.item(s)) out << ',' << a;
    out << '\n';
  }
}

void write_annotations_csv(const AnnotationMatrix& matrix, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_annotations_csv(matrix, out);
}

AnnotationMatrix read_annotations_csv(std::istream& in, const Taxonomy& taxonomy) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("annotations CSV is empty");
  const auto header = csv::split(line);
  if (header.size() < 2 || header[0] != "item_id") {
    throw ParseError("line 1: annotations header must start with item_id and list workers");
  }
  for (std::size_t w = 1; w < header.size(); ++w) {
    if (header[w] != "worker_" + std::to_string(w - 1)) {
      throw ParseError("line 1: expected column worker_" + std::to_string(w - 1) + ", got '" +
                       std::string(header[w]) + "'");
    }
  }
  const std::size_t num_workers = header.size() - 1;
  std::vector<Label> answers;
  std::size_t num_items = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split(line);
    if (fields.size() != header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    for (std::size_t w = 1; w < fields.size(); ++w) {
      answers.push_back(static_cast<Label>(csv::parse_int(fields[w], line_no, header[w])));
    }
    ++num_items;
  }
  return AnnotationMatrix(taxonomy, num_items, num_workers, std::move(answers));
}

AnnotationMatrix read_annotations_csv(const std::filesystem::path& path,
                                      const Taxonomy& taxonomy) {
  auto in = open_in(path);
  return read_annotations_csv(in, taxonomy);
}

void write_truth_csv(const TruthAssignment& truth, std::ostream& out) {
  out << "item_id,label\n";
  for (std::size_t s = 0; s < truth.size(); ++s) out << s << ',' << truth[s] << '\n';
}

void write_truth_csv(const TruthAssignment& truth, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_truth_csv(truth, out);
}

TruthAssignment read_truth_csv(std::istream& in, const Taxonomy& taxonomy) {
  std::string line;
  if (!std::getline(in, line) || csv::split(line) != std::vector<std::string_view>{"item_id", "label"}) {
    throw ParseError("line 1: truth header must be item_id,label");
  }
  std::vector<Label> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split(line);
    if (fields.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 2 fields");
    }
    labels.push_back(static_cast<Label>(csv::parse_int(fields[1], line_no, "label")));
  }
  return TruthAssignment(taxonomy, std::move(labels));
}

TruthAssignment read_truth_csv(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  auto in = open_in(path);
  return read_truth_csv(in, taxonomy);
}

void write_estimate_csv(const TruthEstimate& estimate, std::ostream& out) {
  out << "item_id,label,tie,dropped";
  for (std::size_t j = 0; j < estimate.posterior.cols(); ++j) out << ",p_" << j;
  out << '\n';
  for (std::size_t s = 0; s < estimate.num_items(); ++s) {
    out << s << ',' << estimate.hard_labels[s] << ',' << (estimate.tie_flags[s] ? "true" : "false")
        << ',' << (estimate.dropped[s] ? "true" : "false");
    for (double p : estimate.posterior.row(s)) out << ',' << csv::format_double(p);
    out << '\n';
  }
}

void write_estimate_csv(const TruthEstimate& estimate, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_estimate_csv(estimate, out);
}

}  // namespace labelagg
