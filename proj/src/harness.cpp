#include "prodperc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "prodperc/analysis.hpp"
#include "prodperc/errors.hpp"

namespace prodperc {

using nlohmann::json;

// ------------------------------------------------------------------ spec

PRule parse_p_rule(const std::string& name) {
  if (name == "absolute") return PRule::Absolute;
  if (name == "one_plus_eps_over_d") return PRule::Supercritical;
  if (name == "one_minus_eps_over_d") return PRule::Subcritical;
  if (name == "c_over_t") return PRule::COverT;
  if (name == "inv_4st") return PRule::InvFourST;
  throw InvalidArgument("unknown p_rule '" + name + "'");
}

const char* to_string(PRule rule) {
  switch (rule) {
    case PRule::Absolute:
      return "absolute";
    case PRule::Supercritical:
      return "one_plus_eps_over_d";
    case PRule::Subcritical:
      return "one_minus_eps_over_d";
    case PRule::COverT:
      return "c_over_t";
    case PRule::InvFourST:
      return "inv_4st";
  }
  return "?";
}

double ExperimentSpec::threshold(const std::string& key, double fallback) const {
  auto it = thresholds.find(key);
  return it == thresholds.end() ? fallback : it->second;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw InvalidArgument("config key '" + key + "': expected a number, got '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    auto out = std::stoull(value, &used, 0);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw InvalidArgument("config key '" + key + "': expected an unsigned integer, got '" + value + "'");
  }
}

void assign(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  if (key == "kind") {
    spec.kind = value;
  } else if (key == "product" || key == "product_spec") {
    spec.product_spec = value;
  } else if (key == "p_rule") {
    spec.p_rule = parse_p_rule(value);
  } else if (key == "p") {
    spec.p = parse_double(key, value);
  } else if (key == "epsilon") {
    spec.epsilon = parse_double(key, value);
  } else if (key == "c") {
    spec.c = parse_double(key, value);
  } else if (key == "trials") {
    spec.trials = parse_u64(key, value);
  } else if (key == "seed") {
    spec.seed = parse_u64(key, value);
  } else if (key == "output" || key == "output_path") {
    spec.output_path = value;
  } else if (key == "p_sweep") {
    std::istringstream in(value);
    std::string item;
    spec.p_sweep.clear();
    while (in >> item) spec.p_sweep.push_back(parse_double(key, item));
  } else if (key.rfind("threshold.", 0) == 0) {
    spec.thresholds[key.substr(10)] = parse_double(key, value);
  } else {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

void validate(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw InvalidArgument("experiment " + spec.name + ": trials must be >= 1");
  if (spec.product_spec.empty()) throw InvalidArgument("experiment " + spec.name + ": missing product");
}

}  // namespace

std::vector<ExperimentSpec> parse_config(std::istream& in) {
  std::vector<ExperimentSpec> specs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidArgument("config line " + std::to_string(lineno) + ": unterminated section");
      const std::string section = trim(line.substr(1, line.size() - 2));
      const std::string prefix = "experiment.";
      if (section.rfind(prefix, 0) != 0 || section.size() == prefix.size()) {
        throw InvalidArgument("config line " + std::to_string(lineno) + ": expected [experiment.NAME]");
      }
      specs.emplace_back();
      specs.back().name = section.substr(prefix.size());
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    if (specs.empty()) throw InvalidArgument("config line " + std::to_string(lineno) + ": key outside a section");
    assign(specs.back(), trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const auto& spec : specs) validate(spec);
  return specs;
}

std::vector<ExperimentSpec> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config");
  return parse_config(in);
}

// --------------------------------------------------------------- reports

MetricSummary summarize(const std::string& name, const std::vector<double>& values) {
  MetricSummary m;
  m.name = name;
  m.count = values.size();
  if (values.empty()) return m;
  m.min = *std::min_element(values.begin(), values.end());
  m.max = *std::max_element(values.begin(), values.end());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const MetricSummary& ExperimentReport::metric(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m;
  }
  throw InvalidArgument("report has no metric '" + name + "'");
}

const Check* ExperimentReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double resolve_p(const ExperimentSpec& spec, const ProductGraph& g, std::optional<int> star_leaves) {
  const double d = g.average_degree().to_double();
  const double t = g.dimension();
  double p = 0.0;
  switch (spec.p_rule) {
    case PRule::Absolute:
      p = spec.p;
      break;
    case PRule::Supercritical:
      p = (1.0 + spec.epsilon) / d;
      break;
    case PRule::Subcritical:
      p = (1.0 - spec.epsilon) / d;
      break;
    case PRule::COverT:
      p = spec.c / t;
      break;
    case PRule::InvFourST:
      if (!star_leaves) throw InvalidArgument("p_rule inv_4st needs a star or S(r,s) factor");
      p = 1.0 / (4.0 * *star_leaves * t);
      break;
  }
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("experiment " + spec.name + ": resolved p outside [0,1]");
  return p;
}

namespace {

// Runs fn(i) for i in [0, n) on a small worker pool; results land by index so
// the output never depends on scheduling.
template <class Fn>
auto run_trials(std::uint64_t n, Fn fn) -> std::vector<decltype(fn(std::uint64_t{}))> {
  std::vector<decltype(fn(std::uint64_t{}))> out(n);
  const auto workers = static_cast<std::uint64_t>(std::max(1u, std::min(std::thread::hardware_concurrency(), 8u)));
  if (workers <= 1 || n <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::uint64_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t i = next++; i < n; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct Setup {
  ProductGraph graph;
  std::optional<int> star_leaves;
  double p;
};

Setup prepare(const ExperimentSpec& spec) {
  auto parsed = parse_product_spec(spec.product_spec);
  ProductGraph g(std::move(parsed.factors));
  const double p = resolve_p(spec, g, parsed.star_leaves);
  return Setup{std::move(g), parsed.star_leaves, p};
}

ExperimentReport start_report(const ExperimentSpec& spec, const Setup& setup) {
  ExperimentReport report;
  report.spec = spec;
  report.vertex_count = setup.graph.vertex_count();
  report.average_degree = setup.graph.average_degree().to_double();
  report.p = setup.p;
  return report;
}

std::uint64_t default_k(const ExperimentSpec& spec, const ProductGraph& g) {
  const auto t = static_cast<double>(g.dimension());
  return static_cast<std::uint64_t>(spec.threshold("k", t * t));
}

TrialRecord census_trial(const ProductGraph& g, std::uint64_t seed, double p, std::uint64_t k) {
  const auto start = std::chrono::steady_clock::now();
  const auto c = census(g, EdgeSampler(seed, p));
  TrialRecord r;
  r.seed = seed;
  r.p = p;
  r.L1 = c.largest;
  r.L2 = c.second_largest;
  r.isolated = c.isolated;
  r.W_fraction = big_component_stats(c, k).fraction;
  r.runtime_ms = elapsed_ms(start);
  return r;
}

std::vector<double> column(const std::vector<TrialRecord>& records, double (*get)(const TrialRecord&)) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(get(r));
  return out;
}

void add_standard_metrics(ExperimentReport& report) {
  const double n = static_cast<double>(report.vertex_count);
  std::vector<double> l1;
  std::vector<double> l2;
  std::vector<double> iso;
  for (const auto& r : report.trials) {
    l1.push_back(static_cast<double>(r.L1) / n);
    l2.push_back(static_cast<double>(r.L2) / n);
    iso.push_back(static_cast<double>(r.isolated) / n);
  }
  report.metrics.push_back(summarize("L1_fraction", l1));
  report.metrics.push_back(summarize("L2_fraction", l2));
  report.metrics.push_back(summarize("isolated_fraction", iso));
  report.metrics.push_back(summarize("W_fraction", column(report.trials, [](const TrialRecord& r) { return r.W_fraction; })));
}

std::vector<TrialRecord> census_trials(const ExperimentSpec& spec, const Setup& setup) {
  const auto k = default_k(spec, setup.graph);
  return run_trials(spec.trials, [&](std::uint64_t i) { return census_trial(setup.graph, spec.seed + i, setup.p, k); });
}

void add_check(ExperimentReport& report, std::string name, double value, double bound, bool passed) {
  report.checks.push_back(Check{std::move(name), value, bound, passed});
}

}  // namespace

ExperimentReport run_census_experiment(const ExperimentSpec& spec) {
  auto setup = prepare(spec);
  auto report = start_report(spec, setup);
  report.trials = census_trials(spec, setup);
  add_standard_metrics(report);
  return report;
}

ExperimentReport run_supercritical(const ExperimentSpec& spec) {
  if (spec.p_rule != PRule::Supercritical && spec.p_rule != PRule::Absolute) {
    throw InvalidArgument("supercritical experiment needs p_rule one_plus_eps_over_d");
  }
  auto setup = prepare(spec);
  auto report = start_report(spec, setup);
  report.trials = census_trials(spec, setup);
  add_standard_metrics(report);

  if (spec.epsilon > 0.0) {
    const double y = solve_y(spec.epsilon).y;
    report.values["y"] = y;
    const double tol = spec.threshold("l1_tolerance", 0.05);
    const double mean_l1 = report.metric("L1_fraction").mean;
    add_check(report, "mean_L1_fraction_near_y", std::abs(mean_l1 - y), tol, std::abs(mean_l1 - y) <= tol);
  }
  const double max_l2 = spec.threshold("max_l2_fraction", 0.005);
  const double mean_l2 = report.metric("L2_fraction").mean;
  add_check(report, "mean_L2_fraction", mean_l2, max_l2, mean_l2 <= max_l2);

  if (!spec.p_sweep.empty()) {
    // Threshold coupling: for each seed, L1 along an increasing p grid never drops.
    std::vector<double> grid = spec.p_sweep;
    std::sort(grid.begin(), grid.end());
    auto monotone = run_trials(spec.trials, [&](std::uint64_t i) {
      std::uint64_t last = 0;
      bool ok = true;
      for (double p : grid) {
        const auto l1 = census(setup.graph, EdgeSampler(spec.seed + i, p)).largest;
        ok = ok && l1 >= last;
        last = l1;
      }
      return ok ? 1.0 : 0.0;
    });
    const double good = std::accumulate(monotone.begin(), monotone.end(), 0.0);
    add_check(report, "p_sweep_monotone_L1", good, static_cast<double>(spec.trials), good == static_cast<double>(spec.trials));
  }
  return report;
}

ExperimentReport run_subcritical(const ExperimentSpec& spec) {
  if (spec.p_rule != PRule::Subcritical && spec.p_rule != PRule::Absolute) {
    throw InvalidArgument("subcritical experiment needs p_rule one_minus_eps_over_d");
  }
  auto setup = prepare(spec);
  auto report = start_report(spec, setup);
  report.trials = census_trials(spec, setup);
  add_standard_metrics(report);

  const double t = setup.graph.dimension();
  const double c = setup.graph.max_factor_degree();
  const double bound = std::exp(-spec.epsilon * spec.epsilon * t / (9.0 * c * c));
  report.values["analytic_bound_fraction"] = bound;
  const double max_l1 = report.metric("L1_fraction").max;
  const double desk = spec.threshold("max_l1_fraction", 1e-3);
  add_check(report, "max_L1_fraction_desk", max_l1, desk, max_l1 <= desk);
  add_check(report, "max_L1_fraction_analytic_bound", max_l1, bound, max_l1 <= bound);
  return report;
}

ExperimentReport run_unbounded_degree(const ExperimentSpec& spec) {
  if (spec.p_rule != PRule::InvFourST) throw InvalidArgument("unbounded-degree experiment needs p_rule inv_4st");
  auto setup = prepare(spec);
  if (!setup.star_leaves) throw InvalidArgument("unbounded-degree experiment needs an S(r,s) factor");
  auto report = start_report(spec, setup);
  const double s = *setup.star_leaves;
  const double n = static_cast<double>(report.vertex_count);

  const double inv_d = 1.0 / report.average_degree;
  report.values["inverse_average_degree"] = inv_d;
  add_check(report, "p_above_inverse_degree", setup.p, inv_d, setup.p > inv_d);

  report.trials = census_trials(spec, setup);
  add_standard_metrics(report);

  const double l1_bound = spec.threshold("max_l1_fraction", 2.0 / s);
  const double iso_bound = spec.threshold("min_isolated_fraction", 0.8);
  report.values["analytic_isolated_fraction"] = (s / (s + 1.0)) * (1.0 - 1.0 / s);
  double worst_l1 = 0.0;
  double worst_iso = 1.0;
  for (const auto& r : report.trials) {
    worst_l1 = std::max(worst_l1, static_cast<double>(r.L1) / n);
    worst_iso = std::min(worst_iso, static_cast<double>(r.isolated) / n);
  }
  add_check(report, "every_trial_L1_fraction", worst_l1, l1_bound, worst_l1 <= l1_bound);
  add_check(report, "every_trial_isolated_fraction", worst_iso, iso_bound, worst_iso >= iso_bound);
  return report;
}

ExperimentReport run_many_stars(const ExperimentSpec& spec) {
  if (spec.p_rule != PRule::COverT) throw InvalidArgument("many-stars experiment needs p_rule c_over_t");
  auto setup = prepare(spec);
  const int s = star_power_leaves(setup.graph);
  const int t = static_cast<int>(setup.graph.factor_count());
  auto report = start_report(spec, setup);
  report.trials = census_trials(spec, setup);
  add_standard_metrics(report);

  const double log_n = std::log(static_cast<double>(report.vertex_count));
  const double mean_l1 = report.metric("L1_fraction").mean * static_cast<double>(report.vertex_count);
  const double exponent = std::log(mean_l1) / log_n;
  report.values["exponent"] = exponent;
  report.values["analytic_exponent"] = 1.0 - std::pow(static_cast<double>(s), -1.0 / 6.0);

  // Hypercube control: same t, same p, same seeds.
  const ProductGraph cube(std::vector<BaseGraph>(static_cast<std::size_t>(t), complete(2)));
  auto control = run_trials(spec.trials, [&](std::uint64_t i) {
    return static_cast<double>(census(cube, EdgeSampler(spec.seed + i, setup.p)).largest);
  });
  const double control_mean = std::accumulate(control.begin(), control.end(), 0.0) / static_cast<double>(control.size());
  const double control_exponent = std::log(control_mean) / std::log(static_cast<double>(cube.vertex_count()));
  report.values["control_mean_L1"] = control_mean;
  report.values["control_exponent"] = control_exponent;

  // Degree landscape from the exact layer counts.
  const auto layers = layer_census(t, s);
  const double degree_cut = setup.p > 0.0 ? (1.0 + 0.1) / setup.p : INFINITY;
  double high = 0.0;
  for (int z = 0; z <= t; ++z) {
    if (static_cast<double>(layers.degree[static_cast<std::size_t>(z)]) >= degree_cut) {
      high += static_cast<double>(layers.sizes[static_cast<std::size_t>(z)]);
    }
  }
  report.values["high_degree_fraction"] = high / static_cast<double>(report.vertex_count);

  // Layer-restricted exploration from sampled M_z vertices, z = round(t / sqrt(s)).
  const int z = std::clamp(static_cast<int>(std::lround(t / std::sqrt(static_cast<double>(s)))), 1, t);
  const auto samples = static_cast<std::uint64_t>(spec.threshold("layer_samples", 20));
  const auto cap = static_cast<std::uint64_t>(spec.threshold("layer_cap", static_cast<double>(t) * t));
  report.values["layer_z"] = z;
  if (samples > 0 && setup.p > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::vector<int> coords(static_cast<std::size_t>(t));
    std::vector<int> positions(static_cast<std::size_t>(t));
    std::iota(positions.begin(), positions.end(), 0);
    std::uniform_int_distribution<int> leaf(1, s);
    double upper_total = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
      std::shuffle(positions.begin(), positions.end(), rng);
      for (int j = 0; j < t; ++j) coords[static_cast<std::size_t>(positions[static_cast<std::size_t>(j)])] = j < z ? 0 : leaf(rng);
      const auto v = setup.graph.encode(coords);
      upper_total += static_cast<double>(layer_bfs(setup.graph, EdgeSampler(spec.seed + i, setup.p), v, z, cap).in_upper);
    }
    report.values["layer_mean_in_upper"] = upper_total / static_cast<double>(samples);
  }

  const double min_exponent = spec.threshold("min_exponent", 0.3);
  const double min_gap = spec.threshold("min_exponent_gap", 0.15);
  add_check(report, "exponent", exponent, min_exponent, exponent >= min_exponent);
  add_check(report, "exponent_gap_vs_hypercube", exponent - control_exponent, min_gap, exponent - control_exponent >= min_gap);
  return report;
}

ExperimentReport run_sprinkling(const ExperimentSpec& spec) {
  auto setup = prepare(spec);
  auto report = start_report(spec, setup);
  const ProductGraph& g = setup.graph;
  const double d = report.average_degree;
  const double p2 = spec.threshold("p2", 1.0 / (d * std::log(d)));
  const auto schedule = two_round_split(setup.p, p2);
  const auto k = default_k(spec, g);
  report.values["p1"] = schedule.p1;
  report.values["p2"] = schedule.p2;
  report.values["k"] = static_cast<double>(k);

  report.trials = run_trials(spec.trials, [&](std::uint64_t i) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = spec.seed + i;
    const EdgeSampler round1(seed, schedule.p1, 1);
    const EdgeSampler round2(seed, schedule.p2, 2);

    std::vector<std::uint32_t> labels1;
    const auto c1 = census(g, round1, &labels1);
    std::vector<std::uint64_t> size1;
    for (auto l : labels1) {
      if (l >= size1.size()) size1.resize(l + 1, 0);
      ++size1[l];
    }
    std::uint64_t x_size = 0;
    std::uint64_t best_before = 0;
    for (auto sz : size1) {
      if (sz >= k) {
        x_size += sz;
        best_before = std::max(best_before, sz);
      }
    }

    std::vector<std::uint32_t> labels2;
    const auto c2 = census(g, UnionSampler(round1, round2), &labels2);
    std::vector<std::uint64_t> x_in(c2.component_count(), 0);
    for (std::uint64_t v = 0; v < g.vertex_count(); ++v) {
      if (size1[labels1[v]] >= k) ++x_in[labels2[v]];
    }
    const std::uint64_t best_after = x_in.empty() ? 0 : *std::max_element(x_in.begin(), x_in.end());

    TrialRecord r;
    r.seed = seed;
    r.p = setup.p;
    r.L1 = c2.largest;
    r.L2 = c2.second_largest;
    r.isolated = c2.isolated;
    r.W_fraction = static_cast<double>(x_size) / static_cast<double>(g.vertex_count());
    r.extra["x_size"] = static_cast<double>(x_size);
    r.extra["round1_L1"] = static_cast<double>(c1.largest);
    // An empty X is covered vacuously.
    r.extra["coverage_before"] = x_size == 0 ? 1.0 : static_cast<double>(best_before) / static_cast<double>(x_size);
    r.extra["coverage_after"] = x_size == 0 ? 1.0 : static_cast<double>(best_after) / static_cast<double>(x_size);
    r.runtime_ms = elapsed_ms(start);
    return r;
  });
  add_standard_metrics(report);

  std::vector<double> before;
  std::vector<double> after;
  double good = 0.0;
  double monotone = 0.0;
  double empty_x = 0.0;
  const double min_cov = spec.threshold("min_coverage", 0.9);
  for (const auto& r : report.trials) {
    before.push_back(r.extra.at("coverage_before"));
    after.push_back(r.extra.at("coverage_after"));
    good += r.extra.at("coverage_after") >= min_cov;
    monotone += r.extra.at("coverage_after") >= r.extra.at("coverage_before");
    empty_x += r.extra.at("x_size") == 0;
  }
  report.metrics.push_back(summarize("coverage_before", before));
  report.metrics.push_back(summarize("coverage_after", after));
  const double trials = static_cast<double>(report.trials.size());
  const double min_good = spec.threshold("min_good_trials", std::ceil(0.8 * trials));
  report.values["empty_x_trials"] = empty_x;
  add_check(report, "trials_with_coverage", good, min_good, good >= min_good);
  add_check(report, "coverage_monotone", monotone, trials, monotone == trials);
  return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  if (spec.kind == "census") return run_census_experiment(spec);
  if (spec.kind == "supercritical") return run_supercritical(spec);
  if (spec.kind == "subcritical") return run_subcritical(spec);
  if (spec.kind == "unbounded_degree") return run_unbounded_degree(spec);
  if (spec.kind == "many_stars") return run_many_stars(spec);
  if (spec.kind == "sprinkling") return run_sprinkling(spec);
  throw InvalidArgument("unknown experiment kind '" + spec.kind + "'");
}

// --------------------------------------------------------------- emission

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

double rounded(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_double(value).c_str(), nullptr);
}

json spec_to_json(const ExperimentSpec& spec) {
  json thresholds = json::object();
  for (const auto& [k, v] : spec.thresholds) thresholds[k] = rounded(v);
  json sweep = json::array();
  for (double p : spec.p_sweep) sweep.push_back(rounded(p));
  return json{{"name", spec.name},
              {"kind", spec.kind},
              {"product_spec", spec.product_spec},
              {"p_rule", to_string(spec.p_rule)},
              {"p", rounded(spec.p)},
              {"epsilon", rounded(spec.epsilon)},
              {"c", rounded(spec.c)},
              {"trials", spec.trials},
              {"seed", spec.seed},
              {"thresholds", thresholds},
              {"p_sweep", sweep},
              {"output_path", spec.output_path}};
}

json record_to_json(const TrialRecord& r, bool include_runtime) {
  json j{{"seed", r.seed}, {"p", rounded(r.p)}, {"L1", r.L1}, {"L2", r.L2}, {"isolated", r.isolated},
         {"W_fraction", rounded(r.W_fraction)}};
  if (include_runtime) j["runtime_ms"] = rounded(r.runtime_ms);
  if (!r.extra.empty()) {
    json extra = json::object();
    for (const auto& [k, v] : r.extra) extra[k] = rounded(v);
    j["extra"] = extra;
  }
  return j;
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records, bool include_runtime) {
  out << "seed,p,L1,L2,isolated,W_fraction";
  if (include_runtime) out << ",runtime_ms";
  out << '\n';
  for (const auto& r : records) {
    out << r.seed << ',' << format_double(r.p) << ',' << r.L1 << ',' << r.L2 << ',' << r.isolated << ','
        << format_double(r.W_fraction);
    if (include_runtime) out << ',' << format_double(r.runtime_ms);
    out << '\n';
  }
}

std::string report_to_json(const ExperimentReport& report, bool include_runtime) {
  json records = json::array();
  for (const auto& r : report.trials) records.push_back(record_to_json(r, include_runtime));
  json metrics = json::array();
  for (const auto& m : report.metrics) {
    metrics.push_back(json{{"name", m.name},
                           {"count", m.count},
                           {"mean", rounded(m.mean)},
                           {"min", rounded(m.min)},
                           {"max", rounded(m.max)},
                           {"stddev", rounded(m.stddev)}});
  }
  json values = json::object();
  for (const auto& [k, v] : report.values) values[k] = std::isfinite(v) ? json(rounded(v)) : json(nullptr);
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back(json{{"name", c.name}, {"value", rounded(c.value)}, {"bound", rounded(c.bound)}, {"passed", c.passed}});
  }
  json doc{{"spec", spec_to_json(report.spec)},
           {"vertex_count", report.vertex_count},
           {"average_degree", rounded(report.average_degree)},
           {"p", rounded(report.p)},
           {"records", records},
           {"metrics", metrics},
           {"values", values},
           {"checks", checks},
           {"passed", report.passed()}};
  return doc.dump(2) + "\n";
}

std::vector<TrialRecord> records_from_json(const std::string& text) {
  const json doc = json::parse(text);
  std::vector<TrialRecord> out;
  for (const auto& j : doc.at("records")) {
    TrialRecord r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.p = j.at("p").get<double>();
    r.L1 = j.at("L1").get<std::uint64_t>();
    r.L2 = j.at("L2").get<std::uint64_t>();
    r.isolated = j.at("isolated").get<std::uint64_t>();
    r.W_fraction = j.at("W_fraction").get<double>();
    r.runtime_ms = j.value("runtime_ms", 0.0);
    if (j.contains("extra")) {
      for (const auto& [k, v] : j.at("extra").items()) r.extra[k] = v.get<double>();
    }
    out.push_back(std::move(r));
  }
  return out;
}

ExperimentSpec spec_from_json(const std::string& text) {
  const json j = json::parse(text).at("spec");
  ExperimentSpec spec;
  spec.name = j.at("name").get<std::string>();
  spec.kind = j.at("kind").get<std::string>();
  spec.product_spec = j.at("product_spec").get<std::string>();
  spec.p_rule = parse_p_rule(j.at("p_rule").get<std::string>());
  spec.p = j.at("p").get<double>();
  spec.epsilon = j.at("epsilon").get<double>();
  spec.c = j.at("c").get<double>();
  spec.trials = j.at("trials").get<std::uint64_t>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("thresholds").items()) spec.thresholds[k] = v.get<double>();
  spec.p_sweep = j.at("p_sweep").get<std::vector<double>>();
  spec.output_path = j.at("output_path").get<std::string>();
  return spec;
}

void emit(const ExperimentReport& report, EmitFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  if (format == EmitFormat::Csv) {
    write_records_csv(out, report.trials);
  } else {
    out << report_to_json(report);
  }
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

void write_census_csv_header(std::ostream& out) { out << "seed,p,L1,L2,isolated,n_components\n"; }

void write_census_csv_row(std::ostream& out, const CensusResult& c) {
  out << c.seed << ',' << format_double(c.p) << ',' << c.largest << ',' << c.second_largest << ',' << c.isolated << ','
      << c.component_count() << '\n';
}

}  // namespace prodperc
