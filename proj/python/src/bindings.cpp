#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "prodperc/analysis.hpp"
#include "prodperc/errors.hpp"
#include "prodperc/harness.hpp"
#include "prodperc/percolation.hpp"
#include "prodperc/product.hpp"

namespace py = pybind11;
using namespace prodperc;

namespace {

py::object fraction(const Rational& r) {
  return py::module_::import("fractions").attr("Fraction")(r.num(), r.den());
}

py::dict census_dict(const CensusResult& c) {
  py::dict d;
  d["seed"] = c.seed;
  d["p"] = c.p;
  d["L1"] = c.largest;
  d["L2"] = c.second_largest;
  d["isolated"] = c.isolated;
  d["n_components"] = c.component_count();
  d["vertex_count"] = c.vertex_count;
  d["queried_edges"] = c.queried_edges;
  d["component_sizes"] = c.component_sizes;
  return d;
}

ProductGraph graph_from_spec(const std::string& spec) { return ProductGraph(parse_product_spec(spec).factors); }

}  // namespace

PYBIND11_MODULE(_prodperc, m) {
  m.doc() = "Bond percolation on implicit Cartesian product graphs";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SizeLimitError>(m, "SizeLimitError", PyExc_MemoryError);
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", PyExc_NotImplementedError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<BaseGraph>(m, "BaseGraph")
      .def(py::init<int, std::vector<BaseGraph::Edge>, std::string>(), py::arg("n"), py::arg("edges"),
           py::arg("label") = "")
      .def_property_readonly("n", &BaseGraph::n)
      .def_property_readonly("label", &BaseGraph::label)
      .def("edges", &BaseGraph::edges)
      .def("degree", &BaseGraph::degree)
      .def("neighbors", &BaseGraph::neighbors)
      .def("__repr__", [](const BaseGraph& g) { return "<BaseGraph " + g.label() + ">"; });

  m.def("complete", &complete, py::arg("r"));
  m.def("star", &star, py::arg("s"));
  m.def("star_clique", &star_clique, py::arg("r"), py::arg("s"));
  m.def("cycle", &cycle, py::arg("n"));
  m.def("path", &path, py::arg("n"));
  m.def("isoperimetric", [](const BaseGraph& g) { return fraction(brute_force_isoperimetric(g)); });

  py::class_<ProductGraph>(m, "ProductGraph")
      .def(py::init<std::vector<BaseGraph>>(), py::arg("factors"))
      .def_static("parse", &graph_from_spec, py::arg("spec"))
      .def_property_readonly("vertex_count", &ProductGraph::vertex_count)
      .def_property_readonly("dimension", &ProductGraph::dimension)
      .def_property_readonly("label", &ProductGraph::label)
      .def("average_degree", [](const ProductGraph& g) { return fraction(g.average_degree()); })
      .def("edge_count", &ProductGraph::edge_count)
      .def("encode", [](const ProductGraph& g, const std::vector<int>& c) { return g.encode(c).code; })
      .def("decode", [](const ProductGraph& g, std::uint64_t v) { return g.decode(VertexId{v}); })
      .def("degree", [](const ProductGraph& g, std::uint64_t v) { return g.degree(VertexId{v}); })
      .def("neighbors",
           [](const ProductGraph& g, std::uint64_t v) {
             std::vector<std::uint64_t> out;
             g.for_each_neighbor(VertexId{v}, [&](VertexId w) { out.push_back(w.code); });
             return out;
           })
      .def("distance", [](const ProductGraph& g, std::uint64_t u, std::uint64_t v) {
        return g.distance(VertexId{u}, VertexId{v});
      });

  py::class_<EdgeSampler>(m, "EdgeSampler")
      .def(py::init<std::uint64_t, double, std::uint32_t>(), py::arg("seed"), py::arg("p"), py::arg("round_tag") = 0)
      .def_property_readonly("seed", &EdgeSampler::seed)
      .def_property_readonly("p", &EdgeSampler::p)
      .def("open", [](const EdgeSampler& s, std::uint64_t u, std::uint64_t v) { return s.open(VertexId{u}, VertexId{v}); });

  m.def(
      "census",
      [](const ProductGraph& g, std::uint64_t seed, double p) {
        CensusResult c;
        {
          py::gil_scoped_release release;
          c = census(g, EdgeSampler(seed, p));
        }
        return census_dict(c);
      },
      py::arg("graph"), py::arg("seed"), py::arg("p"));

  m.def(
      "component_size",
      [](const ProductGraph& g, std::uint64_t seed, double p, std::uint64_t v, std::uint64_t cap) {
        auto r = bfs_component(g, EdgeSampler(seed, p), VertexId{v}, cap, false);
        return py::make_tuple(r.size, r.truncated);
      },
      py::arg("graph"), py::arg("seed"), py::arg("p"), py::arg("vertex"), py::arg("cap") = kUnbounded);

  m.def(
      "solve_y",
      [](double eps, double tol) {
        auto pt = solve_y(eps, tol);
        return py::make_tuple(pt.y, pt.residual);
      },
      py::arg("epsilon"), py::arg("tol") = 1e-12);

  m.def(
      "gw_survival",
      [](std::uint64_t n, double p, std::uint64_t trials, std::uint64_t seed, std::uint64_t explode_at) {
        auto e = gw_survival_mc(n, p, explode_at, trials, seed);
        return py::make_tuple(e.estimate, e.standard_error);
      },
      py::arg("n"), py::arg("p"), py::arg("trials"), py::arg("seed") = 0, py::arg("explode_at") = kDefaultExplodeAt);

  m.def(
      "layer_sizes", [](int t, int s) { return layer_census(t, s).sizes; }, py::arg("t"), py::arg("s"));

  m.def(
      "iso_sandwich",
      [](const std::string& spec) {
        auto r = iso_sandwich_check(parse_product_spec(spec).factors);
        return py::make_tuple(fraction(r.product_value), fraction(r.lower), fraction(r.upper), r.ok);
      },
      py::arg("spec"));

  // Reports cross the boundary as JSON text; the package decodes them to dicts.
  m.def(
      "run_config_text",
      [](const std::string& text) {
        std::istringstream in(text);
        std::vector<std::string> out;
        for (const auto& spec : parse_config(in)) out.push_back(report_to_json(run_experiment(spec), false));
        return out;
      },
      py::arg("text"));
}
