#include "labelagg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "labelagg/metrics.hpp"
#include "labelagg/random.hpp"

namespace labelagg {
namespace {

constexpr int kDefaultLabelSets[] = {2, 3, 5, 7, 10, 15, 20};
constexpr int kDefaultSampleSizes[] = {50, 125, 250, 500, 1000, 2000};
constexpr int kDefaultWorkerSets[] = {3, 5, 8, 10, 13, 15, 18, 20, 30, 40};
constexpr int kBinaryFullSample = 569;

// Sub-stream tags under a repetition seed.
constexpr std::uint64_t kExpertiseStream = 1;
constexpr std::uint64_t kAnswerStream = 2;
constexpr std::uint64_t kTieStream = 3;

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  return out.str();
}

struct MethodOutcome {
  TruthEstimate estimate;
  int iterations = 0;
  bool converged = true;
};

MethodOutcome run_method(Method method, const AnnotationMatrix& matrix,
                         const ExperimentConfig& config, std::uint64_t seed) {
  switch (method) {
    case Method::mv:
      return {majority_vote(matrix, config.tie_policy, derive_seed({seed, kTieStream})), 0, true};
    case Method::em: {
      EmState state = run_em(matrix, config.em);
      return {std::move(state.estimate), state.iterations, state.converged};
    }
    case Method::ct: {
      CtMetrics metrics = ct_fixed_point(matrix, config.ct);
      return {crowdtruth_estimate(metrics, config.ct), metrics.iterations, metrics.converged};
    }
  }
  throw ConfigError("unknown method");
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::mv:
      return "mv";
    case Method::em:
      return "em";
    case Method::ct:
      return "ct";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "mv") return Method::mv;
  if (text == "em") return Method::em;
  if (text == "ct") return Method::ct;
  throw ParseError("unknown method '" + std::string(text) + "' (expected mv|em|ct)");
}

std::vector<Method> parse_method_list(std::string_view text) {
  std::vector<Method> out;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const auto token = text.substr(0, comma);
    if (!token.empty()) out.push_back(parse_method(token));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

ExperimentConfig ExperimentConfig::defaults(BandKind band) {
  ExperimentConfig c;
  c.expertise_band_kind = band;
  c.label_sets.assign(std::begin(kDefaultLabelSets), std::end(kDefaultLabelSets));
  c.worker_sets.assign(std::begin(kDefaultWorkerSets), std::end(kDefaultWorkerSets));
  if (band == BandKind::high) {
    c.sample_sizes = {500};
    c.binary_sample_size = kBinaryFullSample;
  } else {
    c.sample_sizes.assign(std::begin(kDefaultSampleSizes), std::end(kDefaultSampleSizes));
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (label_sets.empty()) throw ConfigError("label_sets is empty");
  if (sample_sizes.empty()) throw ConfigError("sample_sizes is empty");
  if (worker_sets.empty()) throw ConfigError("worker_sets is empty");
  if (methods.empty()) throw ConfigError("methods is empty");
  if (repetitions < 2) throw ConfigError("repetitions must be >= 2 for significance testing");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (em.max_iterations < 1 || !(em.tolerance > 0.0)) throw ConfigError("invalid EM config");
  if (ct.max_iterations < 1 || !(ct.tolerance > 0.0)) throw ConfigError("invalid CT config");
  if (binary_sample_size && *binary_sample_size < 1) {
    throw ConfigError("binary_sample_size must be >= 1");
  }
  const bool uses_ct = std::find(methods.begin(), methods.end(), Method::ct) != methods.end();
  for (int g : label_sets) {
    if (g < 2) throw ConfigError("label set sizes must be >= 2");
    if (!distributions.contains(g) && !has_builtin_distribution(g)) {
      throw ConfigError("no label distribution for G=" + std::to_string(g) +
                        "; supply one under \"distributions\"");
    }
  }
  for (const auto& [g, dist] : distributions) {
    if (dist.num_labels() != g) {
      throw ConfigError("distribution keyed G=" + std::to_string(g) + " has " +
                        std::to_string(dist.num_labels()) + " proportions");
    }
  }
  for (int s : sample_sizes) {
    if (s < 1) throw ConfigError("sample sizes must be >= 1");
  }
  for (int w : worker_sets) {
    if (w < 1) throw ConfigError("worker set sizes must be >= 1");
    if (uses_ct && w < 2) throw ConfigError("the ct method needs at least 2 workers");
  }
}

std::vector<int> ExperimentConfig::sample_sizes_for(int num_labels) const {
  if (num_labels == 2 && binary_sample_size) return {*binary_sample_size};
  return sample_sizes;
}

LabelDistribution ExperimentConfig::distribution_for(int num_labels) const {
  if (const auto it = distributions.find(num_labels); it != distributions.end()) {
    return it->second;
  }
  return builtin_distribution(num_labels);
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("experiment config must be a JSON object");

  try {
    const BandKind band =
        parse_band_kind(doc.value("expertise_band_kind", std::string("low")));
    ExperimentConfig c = ExperimentConfig::defaults(band);
    if (doc.contains("label_sets")) c.label_sets = doc["label_sets"].get<std::vector<int>>();
    if (doc.contains("sample_sizes")) {
      c.sample_sizes = doc["sample_sizes"].get<std::vector<int>>();
    }
    if (doc.contains("worker_sets")) c.worker_sets = doc["worker_sets"].get<std::vector<int>>();
    c.repetitions = doc.value("repetitions", c.repetitions);
    c.master_seed = doc.value("master_seed", c.master_seed);
    if (doc.contains("methods")) {
      c.methods.clear();
      for (const auto& m : doc["methods"]) c.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (doc.contains("tie_policy")) {
      c.tie_policy = parse_tie_policy(doc["tie_policy"].get<std::string>());
    }
    if (doc.contains("em")) {
      const auto& em = doc["em"];
      c.em.tolerance = em.value("tolerance", c.em.tolerance);
      c.em.max_iterations = em.value("max_iterations", c.em.max_iterations);
    }
    if (doc.contains("ct")) {
      const auto& ct = doc["ct"];
      c.ct.tolerance = ct.value("tolerance", c.ct.tolerance);
      c.ct.max_iterations = ct.value("max_iterations", c.ct.max_iterations);
      if (ct.contains("threshold") && !ct["threshold"].is_null()) {
        c.ct.threshold = ct["threshold"].get<double>();
      }
    }
    if (doc.contains("binary_sample_size")) {
      const auto& v = doc["binary_sample_size"];
      c.binary_sample_size = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
    }
    if (doc.contains("distributions")) {
      for (const auto& d : doc["distributions"]) {
        LabelDistribution dist = parse_distribution_json(d.dump());
        c.distributions.insert_or_assign(dist.num_labels(), std::move(dist));
      }
    }
    c.threads = doc.value("threads", c.threads);
    c.record_runtime = doc.value("record_runtime", c.record_runtime);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string experiment_config_to_json(const ExperimentConfig& c) {
  nlohmann::json doc;
  doc["expertise_band_kind"] = std::string(to_string(c.expertise_band_kind));
  doc["label_sets"] = c.label_sets;
  doc["sample_sizes"] = c.sample_sizes;
  doc["worker_sets"] = c.worker_sets;
  doc["repetitions"] = c.repetitions;
  doc["master_seed"] = c.master_seed;
  doc["methods"] = nlohmann::json::array();
  for (Method m : c.methods) doc["methods"].push_back(std::string(to_string(m)));
  doc["tie_policy"] = std::string(to_string(c.tie_policy));
  doc["em"] = {{"tolerance", c.em.tolerance}, {"max_iterations", c.em.max_iterations}};
  doc["ct"] = {{"tolerance", c.ct.tolerance}, {"max_iterations", c.ct.max_iterations}};
  doc["ct"]["threshold"] = c.ct.threshold ? nlohmann::json(*c.ct.threshold) : nlohmann::json();
  doc["binary_sample_size"] =
      c.binary_sample_size ? nlohmann::json(*c.binary_sample_size) : nlohmann::json();
  doc["distributions"] = nlohmann::json::array();
  for (const auto& [g, dist] : c.distributions) {
    doc["distributions"].push_back(
        {{"num_labels", g},
         {"proportions",
          std::vector<double>(dist.proportions().begin(), dist.proportions().end())}});
  }
  doc["threads"] = c.threads;
  doc["record_runtime"] = c.record_runtime;
  return doc.dump(2);
}

void sort_results(ResultTable& table) {
  std::stable_sort(table.begin(), table.end(), [](const auto& a, const auto& b) {
    return std::tuple(a.expertise_band, a.num_labels, a.sample_target, a.num_workers, a.rep,
                      a.method) < std::tuple(b.expertise_band, b.num_labels, b.sample_target,
                                             b.num_workers, b.rep, b.method);
  });
}

std::uint64_t truth_seed(std::uint64_t master_seed, int num_labels, int sample_target) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(num_labels),
                      static_cast<std::uint64_t>(sample_target)});
}

std::uint64_t cell_seed(std::uint64_t master_seed, int num_labels, int sample_target,
                        int num_workers, int rep) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(num_labels),
                      static_cast<std::uint64_t>(sample_target),
                      static_cast<std::uint64_t>(num_workers), static_cast<std::uint64_t>(rep)});
}

RepetitionInput make_repetition_input(int num_labels, int sample_target, int num_workers,
                                      int rep, const ExperimentConfig& config) {
  const LabelDistribution dist = config.distribution_for(num_labels);
  TruthAssignment truth = sample_ground_truth(
      dist, sample_target, truth_seed(config.master_seed, num_labels, sample_target));
  const std::uint64_t seed =
      cell_seed(config.master_seed, num_labels, sample_target, num_workers, rep);
  const auto band = ExpertiseBand::for_kind(config.expertise_band_kind, num_labels);
  auto workers = sample_expertise(band, num_workers, derive_seed({seed, kExpertiseStream}));
  AnnotationMatrix matrix =
      simulate_annotations(truth, workers, derive_seed({seed, kAnswerStream}));
  return {std::move(truth), std::move(workers), std::move(matrix), seed};
}

ResultTable run_cell(int num_labels, int sample_target, int num_workers, BandKind band,
                     const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.expertise_band_kind = band;
  ResultTable out;
  out.reserve(static_cast<std::size_t>(cfg.repetitions) * cfg.methods.size());
  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    try {
      const RepetitionInput input =
          make_repetition_input(num_labels, sample_target, num_workers, rep, cfg);
      const std::uint64_t hash = input.matrix.hash();
      for (Method method : cfg.methods) {
        const auto start = std::chrono::steady_clock::now();
        MethodOutcome outcome = run_method(method, input.matrix, cfg, input.seed);
        const auto stop = std::chrono::steady_clock::now();

        RepetitionRecord r;
        r.expertise_band = band;
        r.num_labels = num_labels;
        r.sample_target = sample_target;
        r.sample_actual = static_cast<int>(input.truth.size());
        r.num_workers = num_workers;
        r.rep = rep;
        r.method = method;
        r.weighted_f1 = weighted_f1(outcome.estimate, input.truth).weighted_f1;
        r.tie_count = static_cast<int>(outcome.estimate.tie_count());
        r.iterations = outcome.iterations;
        r.converged = outcome.converged;
        if (cfg.record_runtime) {
          r.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        }
        r.cell_seed = input.seed;
        r.matrix_hash = hash;
        out.push_back(r);
      }
    } catch (const Error& e) {
      throw Error("cell (band=" + std::string(to_string(band)) + ", G=" +
                  std::to_string(num_labels) + ", S=" + std::to_string(sample_target) +
                  ", W=" + std::to_string(num_workers) + ", rep=" + std::to_string(rep) +
                  ") failed: " + e.what());
    }
  }
  return out;
}

ResultTable run_grid(const ExperimentConfig& config) {
  config.validate();
  struct Cell {
    int g, s, w;
  };
  std::vector<Cell> cells;
  for (int g : config.label_sets) {
    for (int s : config.sample_sizes_for(g)) {
      for (int w : config.worker_sets) cells.push_back({g, s, w});
    }
  }

  std::vector<ResultTable> partial(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        partial[i] = run_cell(cells[i].g, cells[i].s, cells[i].w, config.expertise_band_kind,
                              config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };

  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(cells.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ResultTable out;
  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  sort_results(out);
  return out;
}

SignificanceTable significance_table(const ResultTable& results) {
  using Key = std::tuple<BandKind, int, int, int>;
  // cell -> method -> (rep, f1)
  std::map<Key, std::map<Method, std::vector<std::pair<int, double>>>> cells;
  for (const auto& r : results) {
    cells[{r.expertise_band, r.num_labels, r.sample_target, r.num_workers}][r.method].emplace_back(
        r.rep, r.weighted_f1);
  }

  constexpr std::pair<Method, Method> kPairs[] = {
      {Method::em, Method::mv}, {Method::ct, Method::mv}, {Method::ct, Method::em}};

  SignificanceTable out;
  for (auto& [key, by_method] : cells) {
    const auto& [band, g, s, w] = key;
    for (auto& [method, scores] : by_method) std::sort(scores.begin(), scores.end());
    for (const auto& [a, b] : kPairs) {
      const auto ia = by_method.find(a);
      const auto ib = by_method.find(b);
      const bool usable = ia != by_method.end() && ib != by_method.end() &&
                          ia->second.size() >= 2 && ib->second.size() >= 2;
      if (!usable) {
        if (ia != by_method.end() || ib != by_method.end()) {
          out.warnings.push_back("cell (band=" + std::string(to_string(band)) +
                                 ", G=" + std::to_string(g) + ", S=" + std::to_string(s) +
                                 ", W=" + std::to_string(w) + "): skipping " +
                                 std::string(to_string(a)) + " vs " + std::string(to_string(b)) +
                                 " (fewer than 2 repetitions for one method)");
        }
        continue;
      }
      std::vector<std::vector<double>> groups(2);
      for (const auto& [rep, f1] : ia->second) groups[0].push_back(f1);
      for (const auto& [rep, f1] : ib->second) groups[1].push_back(f1);
      const AnovaResult anova = one_way_anova(groups);

      SignificanceRecord rec;
      rec.num_labels = g;
      rec.sample_size = s;
      rec.num_workers = w;
      rec.method_a = a;
      rec.method_b = b;
      double sum_a = 0.0, sum_b = 0.0;
      for (double v : groups[0]) sum_a += v;
      for (double v : groups[1]) sum_b += v;
      rec.mean_f1_a = sum_a / static_cast<double>(groups[0].size());
      rec.mean_f1_b = sum_b / static_cast<double>(groups[1].size());
      rec.f_statistic = anova.f_statistic;
      rec.p_value = anova.p_value;
      rec.significant_05 = anova.p_value < 0.05;
      rec.significant_005 = anova.p_value < 0.005;
      out.records.push_back(rec);
    }
  }
  return out;
}

}  // namespace labelagg
