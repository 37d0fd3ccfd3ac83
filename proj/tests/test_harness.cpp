#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "prodperc/analysis.hpp"
#include "prodperc/errors.hpp"
#include "prodperc/harness.hpp"

using namespace prodperc;

namespace {

std::vector<ExperimentSpec> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentSpec make_spec(std::string kind, std::string product, PRule rule) {
  ExperimentSpec spec;
  spec.name = "t";
  spec.kind = std::move(kind);
  spec.product_spec = std::move(product);
  spec.p_rule = rule;
  spec.trials = 3;
  spec.seed = 11;
  return spec;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
  auto specs = parse(R"(
# two experiments
[experiment.giant]
kind = supercritical
product = K2^12
p_rule = one_plus_eps_over_d
epsilon = 0.3   # trailing comment
trials = 4
seed = 0x10
threshold.k = 50
p_sweep = 0.1 0.2 0.3

[experiment.plain]
product = star(3)^4
p = 0.25
output = plain_out
)");
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].name == "giant");
  CHECK(specs[0].kind == "supercritical");
  CHECK(specs[0].product_spec == "K2^12");
  CHECK(specs[0].p_rule == PRule::Supercritical);
  CHECK(specs[0].epsilon == 0.3);
  CHECK(specs[0].trials == 4);
  CHECK(specs[0].seed == 16);
  CHECK(specs[0].threshold("k", 0) == 50);
  CHECK(specs[0].threshold("missing", 7) == 7);
  CHECK(specs[0].p_sweep == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(specs[1].kind == "census");
  CHECK(specs[1].p_rule == PRule::Absolute);
  CHECK(specs[1].output_path == "plain_out");

  for (auto name : {"absolute", "one_plus_eps_over_d", "one_minus_eps_over_d", "c_over_t", "inv_4st"}) {
    CHECK(std::string(to_string(parse_p_rule(name))) == name);
  }
  CHECK_THROWS_AS(parse_p_rule("half"), InvalidArgument);

  CHECK_THROWS_AS(parse("kind = census\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("[experiment.a]\nproduct = K2\ncolour = red\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("[experiment.a]\nproduct = K2\ntrials = many\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("[experiment.a]\nproduct = K2\ntrials = 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("[experiment.a]\ntrials = 2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("[other.a]\nproduct = K2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("[experiment.a\nproduct = K2\n"), InvalidArgument);
  CHECK_THROWS_AS(parse("[experiment.a]\nproduct K2\n"), InvalidArgument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), IoError);
}

TEST_CASE("resolve_p") {
  ProductGraph q(std::vector<BaseGraph>(10, complete(2)));
  auto spec = make_spec("census", "K2^10", PRule::Supercritical);
  spec.epsilon = 0.3;
  CHECK(resolve_p(spec, q, std::nullopt) == doctest::Approx(0.13));
  spec.p_rule = PRule::Subcritical;
  CHECK(resolve_p(spec, q, std::nullopt) == doctest::Approx(0.07));
  spec.p_rule = PRule::COverT;
  spec.c = 0.4;
  CHECK(resolve_p(spec, q, std::nullopt) == doctest::Approx(0.04));
  spec.p_rule = PRule::InvFourST;
  CHECK(resolve_p(spec, q, 5) == doctest::Approx(1.0 / 200));
  CHECK_THROWS_AS(resolve_p(spec, q, std::nullopt), InvalidArgument);
  spec.p_rule = PRule::Absolute;
  spec.p = 1.5;
  CHECK_THROWS_AS(resolve_p(spec, q, std::nullopt), InvalidArgument);
}

TEST_CASE("summarize") {
  auto m = summarize("x", {1.0, 2.0, 3.0, 4.0});
  CHECK(m.count == 4);
  CHECK(m.mean == 2.5);
  CHECK(m.min == 1.0);
  CHECK(m.max == 4.0);
  CHECK(m.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(summarize("e", {}).count == 0);
  CHECK(summarize("one", {2.0}).stddev == 0.0);
}

TEST_CASE("census experiment and trivial supercritical/subcritical runs") {
  auto spec = make_spec("census", "K2^8", PRule::Absolute);
  spec.p = 0.2;
  auto report = run_experiment(spec);
  REQUIRE(report.trials.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& r = report.trials[i];
    CHECK(r.seed == 11 + i);
    CHECK(r.L1 >= r.L2);
    CHECK(r.L1 <= 256);
    // equals a direct census with the same seed
    CHECK(r.L1 == census(ProductGraph(std::vector<BaseGraph>(8, complete(2))), EdgeSampler(r.seed, 0.2)).largest);
  }
  for (auto name : {"L1_fraction", "L2_fraction", "isolated_fraction", "W_fraction"}) CHECK(report.metric(name).count == 3);
  CHECK(report.passed());

  auto full = make_spec("supercritical", "K2^8", PRule::Absolute);
  full.p = 1.0;
  auto full_report = run_supercritical(full);
  CHECK(full_report.metric("L1_fraction").mean == 1.0);
  CHECK(full_report.metric("L1_fraction").min == 1.0);

  auto none = make_spec("subcritical", "K2^8", PRule::Absolute);
  none.p = 0.0;
  auto none_report = run_subcritical(none);
  for (const auto& r : none_report.trials) CHECK(r.L1 == 1);

  // subcritical coupling: larger epsilon means smaller p and no larger L1
  auto sub = make_spec("subcritical", "K2^12", PRule::Subcritical);
  sub.epsilon = 0.1;
  auto weak = run_subcritical(sub);
  sub.epsilon = 0.5;
  auto strong = run_subcritical(sub);
  for (std::size_t i = 0; i < 3; ++i) CHECK(strong.trials[i].L1 <= weak.trials[i].L1);
  CHECK(weak.check("max_L1_fraction_analytic_bound") != nullptr);
}

TEST_CASE("supercritical p sweep monotonicity") {
  auto spec = make_spec("supercritical", "K2^10", PRule::Supercritical);
  spec.epsilon = 0.3;
  spec.p_sweep = {0.05, 0.1, 0.15, 0.2};
  auto report = run_supercritical(spec);
  const auto* c = report.check("p_sweep_monotone_L1");
  REQUIRE(c != nullptr);
  CHECK(c->passed);
  CHECK(report.values.at("y") == doctest::Approx(solve_y(0.3).y));
}

TEST_CASE("unbounded degree runner, small instance") {
  auto spec = make_spec("unbounded_degree", "K2^3,S(2000,10)", PRule::InvFourST);
  spec.trials = 2;
  auto report = run_unbounded_degree(spec);
  CHECK(report.p == doctest::Approx(1.0 / (4 * 10 * 4)));
  REQUIRE(report.check("p_above_inverse_degree") != nullptr);
  CHECK(report.check("p_above_inverse_degree")->passed);
  CHECK(report.check("every_trial_L1_fraction") != nullptr);
  CHECK(report.check("every_trial_isolated_fraction") != nullptr);
}

TEST_CASE("many stars runner") {
  auto spec = make_spec("many_stars", "star(4)^4", PRule::COverT);
  spec.c = 0.0;
  auto zero = run_many_stars(spec);
  for (const auto& r : zero.trials) CHECK(r.L1 == 1);
  CHECK(zero.values.at("exponent") == 0.0);

  spec.c = 0.5;
  auto report = run_many_stars(spec);
  CHECK(report.values.count("control_exponent") == 1);
  CHECK(report.values.at("layer_z") == 2);  // round(4 / 2)
  CHECK(report.values.at("high_degree_fraction") >= 0.0);
  CHECK(report.values.at("high_degree_fraction") <= 1.0);
  CHECK_THROWS_AS(run_many_stars(make_spec("many_stars", "star(4)^4", PRule::Absolute)), InvalidArgument);
}

TEST_CASE("sprinkling runner") {
  auto spec = make_spec("sprinkling", "K2^12", PRule::Supercritical);
  spec.epsilon = 0.3;
  spec.thresholds["p2"] = 0.0;
  auto flat = run_sprinkling(spec);
  for (const auto& r : flat.trials) CHECK(r.extra.at("coverage_after") == r.extra.at("coverage_before"));

  spec.thresholds.erase("p2");
  auto report = run_sprinkling(spec);
  for (const auto& r : report.trials) {
    CHECK(r.extra.at("coverage_after") >= r.extra.at("coverage_before"));
    CHECK(r.extra.at("round1_L1") <= static_cast<double>(r.L1));
  }
  CHECK(report.check("coverage_monotone")->passed);
}

TEST_CASE("emission") {
  std::ostringstream empty;
  write_records_csv(empty, {});
  CHECK(empty.str() == "seed,p,L1,L2,isolated,W_fraction,runtime_ms\n");
  std::ostringstream no_runtime;
  write_records_csv(no_runtime, {}, false);
  CHECK(no_runtime.str() == "seed,p,L1,L2,isolated,W_fraction\n");

  ExperimentReport report;
  report.spec = make_spec("census", "K2^4", PRule::Absolute);
  report.spec.p = 0.25;
  report.spec.thresholds["k"] = 9;
  report.spec.p_sweep = {0.1, 0.2};
  TrialRecord a{1, 0.25, 10, 3, 2, 0.625, 1.5, {{"x_size", 4.0}}};
  TrialRecord b{2, 0.25, 16, 0, 0, 1.0, 2.25, {}};
  report.trials = {a, b};

  std::ostringstream csv;
  write_records_csv(csv, report.trials);
  CHECK(csv.str() == "seed,p,L1,L2,isolated,W_fraction,runtime_ms\n1,0.25,10,3,2,0.625,1.5\n2,0.25,16,0,0,1,2.25\n");

  const auto text = report_to_json(report);
  CHECK(records_from_json(text) == report.trials);
  const auto spec = spec_from_json(text);
  CHECK(spec.name == report.spec.name);
  CHECK(spec.thresholds == report.spec.thresholds);
  CHECK(spec.p_sweep == report.spec.p_sweep);
  CHECK(spec.p_rule == report.spec.p_rule);

  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  std::ostringstream census_out;
  write_census_csv_header(census_out);
  CHECK(census_out.str() == "seed,p,L1,L2,isolated,n_components\n");

  CHECK_THROWS_AS(emit(report, EmitFormat::Csv, "/nonexistent/dir/out.csv"), IoError);
  try {
    emit(report, EmitFormat::Json, "/nonexistent/dir/out.json");
  } catch (const IoError& e) {
    CHECK(e.path() == "/nonexistent/dir/out.json");
  }
}

TEST_CASE("experiments are byte-deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "prodperc_harness_test";
  std::filesystem::create_directories(dir);
  auto spec = make_spec("sprinkling", "K2^10", PRule::Supercritical);
  spec.epsilon = 0.4;
  auto strip = [](const ExperimentReport& r) {
    std::ostringstream out;
    write_records_csv(out, r.trials, false);
    return out.str();
  };
  const auto first = run_experiment(spec);
  const auto second = run_experiment(spec);
  CHECK(strip(first) == strip(second));
  CHECK(report_to_json(first, false) == report_to_json(second, false));
  emit(first, EmitFormat::Json, (dir / "a.json").string());
  CHECK(records_from_json(slurp(dir / "a.json")).size() == first.trials.size());
  std::filesystem::remove_all(dir);
}
