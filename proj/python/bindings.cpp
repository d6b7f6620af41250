#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bandembed/bandlimited.hpp"
#include "bandembed/cli.hpp"
#include "bandembed/interpolation.hpp"
#include "bandembed/simplicial.hpp"
#include "bandembed/systems.hpp"
#include "bandembed/tiling.hpp"
#include "bandembed/weights.hpp"

namespace py = pybind11;
using namespace bandembed;

namespace {

GridParams grid(std::int64_t l, std::int64_t rho_num, std::int64_t rho_den, double tau) {
  GridParams p;
  p.l = l;
  p.rho = Rational(rho_num, rho_den);
  p.tau = tau;
  p.validate();
  return p;
}

NodeMultiset multiset(const GridParams& p, std::int64_t lo, std::int64_t hi,
                      const std::vector<std::pair<double, std::int64_t>>& nodes) {
  std::vector<Node> entries;
  for (const auto& [x, m] : nodes) entries.push_back({x, m});
  return NodeMultiset(p, IntRange{lo, hi}, std::move(entries));
}

std::vector<std::pair<double, std::int64_t>> nodes_of(const NodeMultiset& s) {
  std::vector<std::pair<double, std::int64_t>> out;
  for (const Node& n : s.entries()) out.emplace_back(n.position, n.multiplicity);
  return out;
}

MarkerSeq markers(const std::vector<std::pair<std::int64_t, double>>& entries, std::int64_t L, std::int64_t M) {
  MarkerSeq seq;
  seq.L = L;
  seq.M = M;
  for (const auto& [n, h] : entries) seq.entries.push_back({n, h});
  return seq;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Band-limited embedding toolkit (C++ core).";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "BandembedError");

  py::class_<GridParams>(m, "GridParams")
      .def(py::init(&grid), py::arg("l") = 1, py::arg("rho_num") = 1, py::arg("rho_den") = 1,
           py::arg("tau") = 0.5)
      .def_readonly("l", &GridParams::l)
      .def_readonly("tau", &GridParams::tau)
      .def_property_readonly("rho", [](const GridParams& p) { return p.rho.value(); });

  py::class_<NodeMultiset>(m, "NodeMultiset")
      .def(py::init(&multiset), py::arg("params"), py::arg("block_lo"), py::arg("block_hi"), py::arg("nodes"))
      .def_property_readonly("nodes", &nodes_of)
      .def("block_count", &NodeMultiset::block_count)
      .def("total_count", &NodeMultiset::total_count);

  m.def("saturate", &saturate, py::arg("multiset"));
  m.def(
      "weierstrass_product",
      [](const NodeMultiset& s, cplx z, std::int64_t block_radius) { return weierstrass_product(s, z, block_radius); },
      py::arg("saturated"), py::arg("z"), py::arg("block_radius"));
  m.def(
      "phi",
      [](const NodeMultiset& s, cplx z, double center, double carrier, std::optional<std::int64_t> radius) {
        return InterpolationKernel(s, center, carrier, radius)(z);
      },
      py::arg("multiset"), py::arg("z"), py::arg("center") = 0.0, py::arg("carrier") = 0.0,
      py::arg("block_radius") = py::none());
  m.def("window_kernel", &window_kernel, py::arg("params"), py::arg("t"));

  m.def(
      "compute_tiles",
      [](const std::vector<std::pair<std::int64_t, double>>& entries, std::int64_t L, std::int64_t M, double lo,
         double hi) {
        const Tiling t = compute_tiles(markers(entries, L, M), Interval{lo, hi});
        py::list out;
        for (const Tile& tile : t.tiles) {
          py::dict d;
          d["n"] = tile.n;
          d["alpha"] = tile.alpha;
          d["beta"] = tile.beta;
          d["empty"] = tile.empty;
          out.append(d);
        }
        return out;
      },
      py::arg("markers"), py::arg("L"), py::arg("M"), py::arg("lo"), py::arg("hi"),
      "Voronoi tiles of (position, height) markers clipped to [lo, hi].");

  py::class_<WeightParams>(m, "WeightParams")
      .def(py::init<>())
      .def_readwrite("C", &WeightParams::C)
      .def_readwrite("L0", &WeightParams::L0)
      .def_readwrite("L1", &WeightParams::L1)
      .def_readwrite("L", &WeightParams::L)
      .def_readwrite("R", &WeightParams::R)
      .def_readwrite("M", &WeightParams::M)
      .def("valid", &validate_params);

  m.def(
      "run_weights",
      [](const std::vector<std::pair<std::int64_t, double>>& entries, std::int64_t L, std::int64_t M, double lo,
         double hi, const WeightParams& p) {
        const WeightRun run = run_weights(markers(entries, L, M), Interval{lo, hi}, p);
        const WeightReport rep = verify_conditions(run, p);
        py::dict d;
        d["w"] = run.weights.w;
        d["residual_zero"] = rep.residual_zero;
        d["conservation"] = rep.conservation;
        d["tax_cap"] = rep.tax_cap;
        d["short_tiles"] = rep.c2_short_tiles;
        d["support"] = rep.c3_support;
        d["wild_service"] = rep.c4_wild_service;
        d["witnesses"] = rep.witnesses;
        return d;
      },
      py::arg("markers"), py::arg("L"), py::arg("M"), py::arg("lo"), py::arg("hi"), py::arg("params"));

  m.def(
      "is_embedding",
      [](int vertex_count, const std::vector<Simplex>& facets, const std::vector<Point>& images) {
        SimplicialMap f{Complex(vertex_count, facets), images};
        f.validate();
        const EmbeddingResult r = is_embedding(f);
        py::dict d;
        d["embedding"] = r.embedding;
        d["pairs_checked"] = r.pairs_checked;
        if (r.witness) d["witness"] = py::make_tuple(r.witness->sigma, r.witness->tau);
        return d;
      },
      py::arg("vertex_count"), py::arg("facets"), py::arg("images"));
  m.def("icosahedron_facets", [] { return icosahedron().facets(); });

  m.def(
      "sturmian_word",
      [](double slope, double intercept, std::int64_t lo, std::int64_t hi) {
        return sturmian_window(slope, intercept, IntRange{lo, hi}).word;
      },
      py::arg("slope"), py::arg("intercept"), py::arg("lo"), py::arg("hi"));
  m.def("is_balanced", &is_balanced, py::arg("word"));
  m.def(
      "discrete_tiles",
      [](const std::vector<std::int64_t>& mk, std::int64_t lo, std::int64_t hi) {
        return discrete_tiles(mk, IntRange{lo, hi});
      },
      py::arg("markers"), py::arg("lo"), py::arg("hi"));

  m.def(
      "sampling_stress",
      [](double c, std::int64_t n, int trials, std::uint64_t seed) {
        const StressReport r = sampling_injectivity_stress(c, n, trials, seed);
        py::dict d;
        d["trials"] = r.trials;
        d["violations"] = r.violations;
        d["min_ratio"] = r.min_ratio;
        d["hypothesis_holds"] = r.hypothesis_holds;
        return d;
      },
      py::arg("c"), py::arg("n"), py::arg("trials"), py::arg("seed"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a CLI command in-process; returns (exit code, stdout, stderr).");
}
