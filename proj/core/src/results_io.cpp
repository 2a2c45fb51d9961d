#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "labelagg/csv.hpp"
#include "labelagg/experiment.hpp"

namespace labelagg {
namespace {

const char* bool_text(bool v) { return v ? "true" : "false"; }

std::vector<std::string_view> header_fields(std::string_view header) { return csv::split(header); }

template <typename Row, typename ParseRow>
std::vector<Row> read_table(std::istream& in, std::string_view expected_header, ParseRow parse) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header) {
    throw ParseError("line 1: unexpected header '" + line + "'");
  }
  const auto names = header_fields(expected_header);
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split(line);
    if (fields.size() != names.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(names.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    try {
      rows.push_back(parse(fields, line_no, names));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

int to_int(std::string_view f, std::size_t line, std::string_view name) {
  return static_cast<int>(csv::parse_int(f, line, name));
}

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

void write_results_csv(const ResultTable& table, std::ostream& out) {
  out << kResultsHeader << '\n';
  for (const auto& r : table) {
    out << to_string(r.expertise_band) << ',' << r.num_labels << ',' << r.sample_target << ','
        << r.sample_actual << ',' << r.num_workers << ',' << r.rep << ',' << to_string(r.method)
        << ',' << csv::format_double(r.weighted_f1) << ',' << r.tie_count << ','
        << r.iterations << ',' << bool_text(r.converged) << ','
        << csv::format_double(r.runtime_ms) << ',' << r.cell_seed << ',' << r.matrix_hash
        << '\n';
  }
}

void write_results_csv(const ResultTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_results_csv(table, out);
}

ResultTable read_results_csv(std::istream& in) {
  return read_table<RepetitionRecord>(
      in, kResultsHeader, [](const auto& f, std::size_t line, const auto& n) {
        RepetitionRecord r;
        r.expertise_band = parse_band_kind(f[0]);
        r.num_labels = to_int(f[1], line, n[1]);
        r.sample_target = to_int(f[2], line, n[2]);
        r.sample_actual = to_int(f[3], line, n[3]);
        r.num_workers = to_int(f[4], line, n[4]);
        r.rep = to_int(f[5], line, n[5]);
        r.method = parse_method(f[6]);
        r.weighted_f1 = csv::parse_double(f[7], line, n[7]);
        r.tie_count = to_int(f[8], line, n[8]);
        r.iterations = to_int(f[9], line, n[9]);
        r.converged = csv::parse_bool(f[10], line, n[10]);
        r.runtime_ms = csv::parse_double(f[11], line, n[11]);
        r.cell_seed = csv::parse_uint64(f[12], line, n[12]);
        r.matrix_hash = csv::parse_uint64(f[13], line, n[13]);
        return r;
      });
}

ResultTable read_results_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_results_csv(in);
}

void write_significance_csv(const std::vector<SignificanceRecord>& table, std::ostream& out) {
  out << kSignificanceHeader << '\n';
  for (const auto& r : table) {
    out << r.num_labels << ',' << r.sample_size << ',' << r.num_workers << ','
        << to_string(r.method_a) << ',' << to_string(r.method_b) << ','
        << csv::format_double(r.mean_f1_a) << ',' << csv::format_double(r.mean_f1_b) << ','
        << csv::format_double(r.f_statistic) << ',' << csv::format_double(r.p_value) << ','
        << bool_text(r.significant_05) << ',' << bool_text(r.significant_005) << '\n';
  }
}

void write_significance_csv(const std::vector<SignificanceRecord>& table,
                            const std::filesystem::path& path) {
  auto out = open_out(path);
  write_significance_csv(table, out);
}

std::vector<SignificanceRecord> read_significance_csv(std::istream& in) {
  return read_table<SignificanceRecord>(
      in, kSignificanceHeader, [](const auto& f, std::size_t line, const auto& n) {
        SignificanceRecord r;
        r.num_labels = to_int(f[0], line, n[0]);
        r.sample_size = to_int(f[1], line, n[1]);
        r.num_workers = to_int(f[2], line, n[2]);
        r.method_a = parse_method(f[3]);
        r.method_b = parse_method(f[4]);
        r.mean_f1_a = csv::parse_double(f[5], line, n[5]);
        r.mean_f1_b = csv::parse_double(f[6], line, n[6]);
        r.f_statistic = csv::parse_double(f[7], line, n[7]);
        r.p_value = csv::parse_double(f[8], line, n[8]);
        r.significant_05 = csv::parse_bool(f[9], line, n[9]);
        r.significant_005 = csv::parse_bool(f[10], line, n[10]);
        return r;
      });
}

std::vector<SignificanceRecord> read_significance_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_significance_csv(in);
}

}  // namespace labelagg
