#include "bandembed/io.hpp"

#include <charconv>
#include <sstream>

namespace bandembed {

namespace {

Json complex_pair(cplx c) { return Json::array({c.real(), c.imag()}); }

cplx complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("json: complex values are [re, im] pairs");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json params_json(const GridParams& p) {
  return Json{{"l", p.l}, {"rho", Json::array({p.rho.num(), p.rho.den()})}, {"tau", p.tau}};
}

GridParams params_from(const Json& j) {
  GridParams p;
  p.l = j.at("l").get<std::int64_t>();
  const Json& rho = j.at("rho");
  if (rho.is_array()) {
    p.rho = Rational(rho.at(0).get<std::int64_t>(), rho.at(1).get<std::int64_t>());
  } else {
    p.rho = Rational(rho.get<std::int64_t>());
  }
  p.tau = j.at("tau").get<double>();
  p.validate();
  return p;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const NodeMultiset& m) {
  Json j = params_json(m.params());
  j["window"] = Json::array({m.window().lo, m.window().hi});
  Json entries = Json::array();
  for (const Node& e : m.entries()) entries.push_back(Json::array({e.position, e.multiplicity}));
  j["entries"] = entries;
  return j;
}

NodeMultiset multiset_from_json(const Json& j) {
  const GridParams p = params_from(j);
  const Json& w = j.at("window");
  std::vector<Node> nodes;
  for (const Json& e : j.at("entries")) nodes.push_back({e.at(0).get<double>(), e.at(1).get<std::int64_t>()});
  return NodeMultiset(p, {w.at(0).get<std::int64_t>(), w.at(1).get<std::int64_t>()}, nodes);
}

Json to_json(const BandSignal& s) {
  Json j;
  j["nodes"] = s.nodes;
  Json coeffs = Json::array();
  for (cplx c : s.coeffs) coeffs.push_back(complex_pair(c));
  j["coeffs"] = coeffs;
  struct Visitor {
    Json operator()(const ToneKernel&) const { return Json{{"type", "tone"}}; }
    Json operator()(const SincKernel& k) const { return Json{{"type", "sinc"}, {"width", k.width}}; }
    Json operator()(const BumpKernel& k) const { return Json{{"type", "bump"}, {"tau", k.tau}}; }
    Json operator()(const LambdaKernel& k) const {
      return Json{{"type", "interpolation"}, {"multiset", to_json(k.family->multiset())}};
    }
  };
  j["kernel"] = std::visit(Visitor{}, s.kernel);
  j["carrier"] = s.carrier;
  j["real_part"] = s.real_part;
  return j;
}

BandSignal signal_from_json(const Json& j) {
  BandSignal s;
  s.nodes = j.at("nodes").get<std::vector<double>>();
  for (const Json& c : j.at("coeffs")) s.coeffs.push_back(complex_from(c));
  const Json& k = j.at("kernel");
  const std::string type = k.at("type").get<std::string>();
  if (type == "tone") {
    s.kernel = ToneKernel{};
  } else if (type == "sinc") {
    s.kernel = SincKernel{k.at("width").get<double>()};
  } else if (type == "bump") {
    s.kernel = BumpKernel{k.at("tau").get<double>()};
  } else if (type == "interpolation") {
    s.kernel = LambdaKernel{std::make_shared<const LambdaFamily>(multiset_from_json(k.at("multiset")))};
  } else {
    throw Error("json: unknown kernel type " + type);
  }
  s.carrier = j.value("carrier", 0.0);
  s.real_part = j.value("real_part", false);
  s.validate();
  return s;
}

Json to_json(const SampleTrack& t) {
  Json values = Json::array();
  for (cplx v : t.values) values.push_back(complex_pair(v));
  return Json{{"step", t.step}, {"offset", t.offset}, {"values", values}};
}

SampleTrack track_from_json(const Json& j) {
  SampleTrack t;
  t.step = j.at("step").get<double>();
  t.offset = j.at("offset").get<std::int64_t>();
  for (const Json& v : j.at("values")) t.values.push_back(complex_from(v));
  if (!(t.step > 0.0)) throw Error("json: sample step must be positive");
  return t;
}

Json to_json(const MarkerSeq& m) {
  Json entries = Json::array();
  for (const Marker& e : m.entries) entries.push_back(Json::array({e.n, e.h}));
  return Json{{"L", m.L}, {"M", m.M}, {"entries", entries}};
}

MarkerSeq markers_from_json(const Json& j) {
  MarkerSeq m;
  m.L = j.at("L").get<std::int64_t>();
  m.M = j.at("M").get<std::int64_t>();
  for (const Json& e : j.at("entries")) m.entries.push_back({e.at(0).get<std::int64_t>(), e.at(1).get<double>()});
  m.validate();
  return m;
}

Json to_json(const Tiling& t) {
  Json tiles = Json::array();
  for (const Tile& tile : t.tiles) {
    Json jt{{"n", tile.n}};
    if (tile.empty) {
      jt["empty"] = true;
    } else {
      jt["interval"] = Json::array({tile.alpha, tile.beta});
      if (tile.degenerate()) jt["degenerate"] = true;
      if (tile.clipped_left) jt["clipped_left"] = true;
      if (tile.clipped_right) jt["clipped_right"] = true;
    }
    tiles.push_back(jt);
  }
  Json j{{"window", Json::array({t.window.lo, t.window.hi})}, {"L", t.L}, {"M", t.M}, {"tiles", tiles}};
  if (!t.diagnostic.empty()) j["diagnostic"] = t.diagnostic;
  return j;
}

Json to_json(const WeightParams& p) {
  return Json{{"C", p.C}, {"L0", p.L0}, {"L1", p.L1}, {"L", p.L}, {"R", p.R}, {"M", p.M}};
}

WeightParams weight_params_from_json(const Json& j) {
  WeightParams p;
  p.C = j.at("C").get<double>();
  p.L0 = j.at("L0").get<double>();
  p.L1 = j.at("L1").get<double>();
  p.L = j.at("L").get<std::int64_t>();
  p.R = j.at("R").get<std::int64_t>();
  p.M = j.at("M").get<std::int64_t>();
  return p;
}

Json to_json(const WeightReport& r) {
  return Json{{"residual_zero", r.residual_zero},
              {"conservation", r.conservation},
              {"tax_cap", r.tax_cap},
              {"sparsity", r.sparsity},
              {"condition_1_equivariance", r.c1_equivariance},
              {"condition_2_short_tiles", r.c2_short_tiles},
              {"condition_3_support", r.c3_support},
              {"condition_4_wild_service", r.c4_wild_service},
              {"wild_points", r.wild_points}};
}

Json to_json(const SimplicialMap& m) {
  return Json{{"vertices", m.complex.vertex_count()}, {"simplices", m.complex.facets()}, {"images", m.images}};
}

SimplicialMap map_from_json(const Json& j) {
  SimplicialMap m;
  const Json& v = j.at("vertices");
  const int count = v.is_array() ? static_cast<int>(v.size()) : v.get<int>();
  m.complex = Complex(count, j.at("simplices").get<std::vector<Simplex>>());
  m.images = j.at("images").get<std::vector<Point>>();
  m.validate();
  return m;
}

Json to_json(const DiscreteSignal& s) {
  return Json{{"window", Json::array({s.window.lo, s.window.hi})}, {"channels", s.channels}, {"values", s.values}};
}

std::string signal_csv(const BandSignal& s, double lo, double hi, double step) {
  std::ostringstream out;
  out << "t,re,im\n";
  const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::int64_t k = 0; k <= count; ++k) {
    const double t = lo + static_cast<double>(k) * step;
    const cplx v = eval(s, t);
    out << format_double(t) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
  }
  return out.str();
}

}  // namespace bandembed
