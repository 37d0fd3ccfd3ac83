// prodperc: command-line front end for the percolation laboratory.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "prodperc/analysis.hpp"
#include "prodperc/errors.hpp"
#include "prodperc/harness.hpp"
#include "prodperc/percolation.hpp"
#include "prodperc/product.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAssertion = 2;

int cmd_census(const std::string& graph, double p, std::uint64_t seed, std::uint64_t trials) {
  prodperc::ProductGraph g(prodperc::parse_product_spec(graph).factors);
  prodperc::write_census_csv_header(std::cout);
  for (std::uint64_t i = 0; i < trials; ++i) {
    prodperc::write_census_csv_row(std::cout, prodperc::census(g, prodperc::EdgeSampler(seed + i, p)));
  }
  return kExitOk;
}

int cmd_experiment(const std::string& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  bool all_passed = true;
  for (const auto& spec : prodperc::load_config(config)) {
    auto report = prodperc::run_experiment(spec);
    const std::string stem = spec.output_path.empty() ? spec.name : spec.output_path;
    prodperc::emit(report, prodperc::EmitFormat::Csv, (fs::path(out_dir) / (stem + ".csv")).string());
    prodperc::emit(report, prodperc::EmitFormat::Json, (fs::path(out_dir) / (stem + ".json")).string());
    std::cout << "[" << (report.passed() ? "PASS" : "FAIL") << "] " << spec.name << "  |G|=" << report.vertex_count
              << " p=" << prodperc::format_double(report.p) << '\n';
    for (const auto& c : report.checks) {
      std::cout << "    " << (c.passed ? "ok  " : "FAIL") << ' ' << c.name << " value=" << prodperc::format_double(c.value)
                << " bound=" << prodperc::format_double(c.bound) << '\n';
    }
    all_passed = all_passed && report.passed();
  }
  return all_passed ? kExitOk : kExitAssertion;
}

int cmd_ytable(double eps_min, double eps_max, int steps, double tol) {
  if (steps < 1) throw prodperc::InvalidArgument("--steps must be >= 1");
  std::cout << "epsilon,y,residual\n";
  for (int i = 0; i < steps; ++i) {
    const double eps = steps == 1 ? eps_min : eps_min + (eps_max - eps_min) * i / (steps - 1);
    const auto pt = prodperc::solve_y(eps, tol);
    std::cout << prodperc::format_double(pt.epsilon) << ',' << prodperc::format_double(pt.y) << ','
              << prodperc::format_double(pt.residual) << '\n';
  }
  return kExitOk;
}

int cmd_iso(const std::string& graph) {
  auto factors = prodperc::parse_product_spec(graph).factors;
  auto sandwich = prodperc::iso_sandwich_check(factors);
  std::cout << "i(G)=" << sandwich.product_value << " lower=" << sandwich.lower << " upper=" << sandwich.upper
            << " ok=" << (sandwich.ok ? "true" : "false") << '\n';
  return sandwich.ok ? kExitOk : kExitAssertion;
}

int cmd_layers(int t, int s) {
  const auto lc = prodperc::layer_census(t, s);
  std::cout << "z,size,degree\n";
  for (int z = 0; z <= t; ++z) {
    std::cout << z << ',' << lc.sizes[static_cast<std::size_t>(z)] << ',' << lc.degree[static_cast<std::size_t>(z)] << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bond percolation on Cartesian product graphs"};
  app.require_subcommand(1);

  std::string graph;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;
  auto* census = app.add_subcommand("census", "Component census of one percolated product graph");
  census->add_option("--graph", graph, "Product spec, e.g. K2^12 or star(8)^5")->required();
  census->add_option("--p", p, "Edge retention probability")->required()->check(CLI::Range(0.0, 1.0));
  census->add_option("--seed", seed, "Sampler seed");
  census->add_option("--trials", trials, "Number of consecutive seeds");

  std::string config;
  std::string out_dir = "results";
  auto* experiment = app.add_subcommand("experiment", "Run every experiment section of a config file");
  experiment->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);
  experiment->add_option("--out", out_dir, "Output directory");

  double eps_min = 0.01;
  double eps_max = 2.0;
  int steps = 200;
  double tol = 1e-12;
  auto* ytable = app.add_subcommand("ytable", "Tabulate the survival fixed point y(eps)");
  ytable->add_option("--eps-min", eps_min);
  ytable->add_option("--eps-max", eps_max);
  ytable->add_option("--steps", steps);
  ytable->add_option("--tol", tol);

  auto* iso = app.add_subcommand("iso", "Exact isoperimetric sandwich check for a small product");
  iso->add_option("--graph", graph, "Product spec with at most 24 vertices")->required();

  int layer_t = 4;
  int layer_s = 2;
  auto* layers = app.add_subcommand("layers", "Layer sizes of a star power star(s)^t");
  layers->add_option("--t", layer_t)->required();
  layers->add_option("--s", layer_s)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*census) return cmd_census(graph, p, seed, trials);
    if (*experiment) return cmd_experiment(config, out_dir);
    if (*ytable) return cmd_ytable(eps_min, eps_max, steps, tol);
    if (*iso) return cmd_iso(graph);
    if (*layers) return cmd_layers(layer_t, layer_s);
  } catch (const std::exception& e) {
    std::cerr << "prodperc: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
