#include "bandembed/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "bandembed/io.hpp"

namespace bandembed {

namespace {

/// Raised for configuration problems; maps to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Vars {
  // interp
  std::int64_t l = 1;
  std::string rho = "1";
  double tau = 0.5;
  std::int64_t window_blocks = 64;
  int points = 1000;
  double radius = 10.0;
  double range = 8.0;
  double r = 5.0;
  double eps = 1e-3;
  int family = 100;
  // tiling
  std::int64_t L = 20;
  std::int64_t M = 40;
  std::int64_t window = 2000;
  double collar = 1.0;
  // weights
  std::string params_file;
  int instances = 100;
  std::int64_t weight_window = 1500;
  // simplicial
  std::string map_file;
  int target_dim = 5;
  std::string expect = "any";
  double magnitude = 0.1;
  int max_tries = 100;
  // codec
  double alpha = std::sqrt(2.0) - 1.0;
  std::int64_t half_window = 50;
  std::int64_t marker_L = 5;
  double band_lo = 0.5;
  double band_hi = 1.5;
  int pairs = 10000;
  std::int64_t N = 8;
  bool noisy = false;
  double block_delta = 0.5;
  // sampling
  bool stress = false;
  double c = 0.4;
  std::int64_t n_rate = 1;
  int trials = 1000;
};

struct Report {
  Json results = Json::object();
  Json assertions = Json::array();
  Json witnesses = Json::array();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void check(const std::string& name, bool pass, Json witness = nullptr) {
    assertions.push_back(Json{{"name", name}, {"pass", pass}});
    if (!pass && !witness.is_null()) witnesses.push_back(Json{{"assertion", name}, {"witness", witness}});
  }
  [[nodiscard]] bool all_pass() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Json& a) { return a.at("pass").get<bool>(); });
  }
};

struct Ctx {
  std::uint64_t seed = 1;
  std::map<std::string, double> tol;
};

Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw ConfigError("cannot parse rational '" + s + "'");
  }
}

GridParams grid_params(const Vars& v) {
  GridParams p{v.l, parse_rational(v.rho), v.tau};
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::string fmt(double x) { return format_double(x); }

// ---------------------------------------------------------------------------
// interp

void interp_oracle_sinc(const Vars& v, Ctx& ctx, Report& rep) {
  GridParams p{1, Rational(1), 0.5};
  const NodeMultiset sat = saturate(NodeMultiset(p, {-v.window_blocks, v.window_blocks}, {}));
  if (v.points < 2) throw ConfigError("points must be >= 2");
  double worst = 0.0;
  double at = 0.0;
  rep.header = {"z", "product", "sinc", "error"};
  for (int i = 0; i < v.points; ++i) {
    const double z = -v.radius + 2.0 * v.radius * i / (v.points - 1);
    const double f = weierstrass_product(sat, z, v.window_blocks).real();
    const double exact = z == 0.0 ? 1.0 : sin_pi(z) / (kPi * z);
    const double err = std::abs(f - exact);
    if (err > worst) {
      worst = err;
      at = z;
    }
    rep.rows.push_back({fmt(z), fmt(f), fmt(exact), fmt(err)});
  }
  rep.results = Json{{"points", v.points}, {"radius", v.radius}, {"worst_error", worst}, {"worst_at", at}};
  rep.check("sinc oracle within tolerance", worst <= ctx.tol.at("sinc"), Json{{"z", at}, {"error", worst}});
}

void interp_eval(const Vars& v, Ctx& ctx, Report& rep) {
  const GridParams p = grid_params(v);
  Rng rng(ctx.seed);
  const NodeMultiset lambda = random_admissible(p, v.window_blocks, rng, true);
  const InterpolationKernel phi(lambda, 0.0, 0.0);
  double own = std::abs(phi(0.0) - 1.0);
  double others = 0.0;
  double worst_node = 0.0;
  for (const Node& e : lambda.entries()) {
    if (e.position == 0.0) continue;
    const double a = std::abs(phi(e.position));
    if (a > others) {
      others = a;
      worst_node = e.position;
    }
  }
  rep.header = {"t", "re", "im"};
  const int n = std::max(v.points, 2);
  for (int i = 0; i < n; ++i) {
    const double t = -v.range + 2.0 * v.range * i / (n - 1);
    const cplx z = phi(t);
    rep.rows.push_back({fmt(t), fmt(z.real()), fmt(z.imag())});
  }
  rep.results = Json{{"multiset", to_json(lambda)},
                     {"own_node_error", own},
                     {"max_other_node", others},
                     {"worst_node", worst_node}};
  rep.check("value 1 at own node", own <= ctx.tol.at("dual"), Json{{"error", own}});
  rep.check("vanishes at other nodes", others <= ctx.tol.at("dual"), Json{{"node", worst_node}, {"value", others}});
}

void interp_radii(const Vars& v, Ctx& ctx, Report& rep) {
  const GridParams p = grid_params(v);
  RadiusSearch search;
  search.seed = ctx.seed;
  search.family_size = v.family;
  search.window_blocks = v.window_blocks;
  const RadiusCertificate b1 = truncation_radius(v.r, v.eps, p, search);
  const RadiusCertificate b2 = locality_radius(v.r, v.eps, p, search);
  std::vector<double> grid;
  for (int i = -64; i <= 64; ++i) grid.push_back(0.5 * i);
  const DecayEstimate k = decay_constant(p, grid, ctx.seed, std::min(v.family, 50), v.window_blocks);
  auto cert = [](const RadiusCertificate& c) {
    return Json{{"radius", c.radius}, {"certified", c.certified}, {"worst_error", c.worst_error},
                {"family_size", c.family_size}};
  };
  rep.results = Json{{"truncation", cert(b1)},
                     {"locality", cert(b2)},
                     {"decay", Json{{"k_hat", k.k_hat}, {"argmax", k.argmax}, {"family_size", k.family_size}}}};
  rep.header = {"quantity", "value", "certified"};
  rep.rows = {{"truncation_radius", fmt(b1.radius), b1.certified ? "1" : "0"},
              {"locality_radius", fmt(b2.radius), b2.certified ? "1" : "0"},
              {"decay_k_hat", fmt(k.k_hat), "0"}};
  rep.check("truncation radius certified", b1.certified, cert(b1));
  rep.check("locality radius certified", b2.certified, cert(b2));
  rep.check("decay estimate at least 1", k.k_hat >= 1.0 - ctx.tol.at("decay"));
}

// ---------------------------------------------------------------------------
// tiling

void tiling_demo(const Vars& v, Ctx& ctx, Report& rep) {
  if (v.L < 1 || v.M < v.L + 2 || v.window < 4 * v.M) throw ConfigError("need L >= 1, M >= L + 2, window >= 4M");
  Rng rng(ctx.seed);
  const MarkerSeq markers = random_markers(v.L, v.M, -3 * v.M, v.window + 3 * v.M, rng);
  const Interval win{0.0, static_cast<double>(v.window)};
  const Tiling tiling = compute_tiles(markers, win);
  const double tol = ctx.tol.at("equivariance");

  bool contained = true;
  Json contain_witness = nullptr;
  double covered = 0.0;
  for (const Tile& t : tiling.tiles) {
    if (t.empty) continue;
    covered += t.length();
    if (t.clipped_left || t.clipped_right) continue;
    const double half = 0.5 * static_cast<double>(v.M);
    if (!(t.alpha > static_cast<double>(t.n) - half && t.beta < static_cast<double>(t.n) + half)) {
      contained = false;
      contain_witness = Json{{"n", t.n}, {"interval", Json::array({t.alpha, t.beta})}};
    }
  }
  const double R = static_cast<double>(v.window) / 2.0;
  const DensityReport d = density_report(tiling, v.collar, R, static_cast<double>(v.window) / 4.0);

  const Tiling shifted = compute_tiles(shift_markers(markers, 1), {win.lo - 1.0, win.hi - 1.0});
  bool equivariant = shifted.tiles.size() == tiling.tiles.size();
  for (std::size_t i = 0; equivariant && i < tiling.tiles.size(); ++i) {
    const Tile& a = tiling.tiles[i];
    const Tile& b = shifted.tiles[i];
    equivariant = a.n - 1 == b.n && a.empty == b.empty &&
                  (a.empty || (std::abs(a.alpha - 1.0 - b.alpha) <= tol && std::abs(a.beta - 1.0 - b.beta) <= tol));
  }

  rep.results = Json{{"markers", to_json(markers)},
                     {"tiling", to_json(tiling)},
                     {"density",
                      Json{{"r", v.collar},
                           {"R", R},
                           {"count_density", d.count_density},
                           {"measure_density", d.measure_density},
                           {"count_bound", d.count_bound},
                           {"measure_bound", d.measure_bound},
                           {"slack", d.slack}}}};
  rep.header = {"record", "n", "alpha", "beta", "value"};
  for (const Tile& t : tiling.tiles) {
    rep.rows.push_back({"tile", std::to_string(t.n), t.empty ? "" : fmt(t.alpha), t.empty ? "" : fmt(t.beta),
                        t.empty ? "empty" : (t.degenerate() ? "degenerate" : "")});
  }
  rep.rows.push_back({"count_density", "", "", "", fmt(d.count_density)});
  rep.rows.push_back({"measure_density", "", "", "", fmt(d.measure_density)});
  rep.check("markers admissible", markers.invariant_violation().empty(), markers.invariant_violation());
  rep.check("tiles cover the window", std::abs(covered - win.length()) <= tol * static_cast<double>(tiling.tiles.size() + 1));
  rep.check("tiles inside (n - M/2, n + M/2)", contained, contain_witness);
  rep.check("count density bound", d.count_ok, d.count_density);
  rep.check("measure density bound", d.measure_ok, d.measure_density);
  rep.check("shift equivariance", equivariant);
}

// ---------------------------------------------------------------------------
// weights

void weights_run(const Vars& v, Ctx& ctx, Report& rep) {
  WeightParams p;
  std::int64_t window = v.weight_window;
  int instances = v.instances;
  if (!v.params_file.empty()) {
    std::ifstream in(v.params_file);
    if (!in) throw ConfigError("cannot open params file " + v.params_file);
    Json j;
    try {
      j = Json::parse(in);
      p = weight_params_from_json(j);
      window = j.value("window", window);
      instances = j.value("instances", instances);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed params file: ") + e.what());
    }
  }
  if (!validate_params(p)) throw ConfigError("weight parameters fail L > 4 L1 + 1 + 4 C L0 (4 L0 + 3) or R > M > L");
  if (window <= 2 * (p.R + p.M) || instances < 1) throw ConfigError("window must exceed 2 (R + M) and instances >= 1");
  WeightReport total;
  total.residual_zero = total.conservation = total.tax_cap = total.sparsity = true;
  total.c1_equivariance = total.c2_short_tiles = total.c3_support = total.c4_wild_service = true;
  bool surplus = true;
  Json witnesses = Json::array();
  const Interval win{0.0, static_cast<double>(window)};
  for (int i = 0; i < instances; ++i) {
    Rng rng(ctx.seed + static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL);
    const MarkerSeq markers = random_markers(p.L, p.M, -3 * p.M, window + 3 * p.M, rng);
    const WeightRun run = run_weights(markers, win, p);
    const WeightRun shifted = run_weights(shift_markers(markers, 1), {win.lo - 1.0, win.hi - 1.0}, p);
    const WeightReport r = verify_conditions(run, p, &shifted);
    total.residual_zero &= r.residual_zero;
    total.conservation &= r.conservation;
    total.tax_cap &= r.tax_cap;
    total.sparsity &= r.sparsity;
    total.c1_equivariance &= r.c1_equivariance;
    total.c2_short_tiles &= r.c2_short_tiles;
    total.c3_support &= r.c3_support;
    total.c4_wild_service &= r.c4_wild_service;
    total.wild_points += r.wild_points;
    const double a = static_cast<double>(p.M);
    surplus = surplus && surplus_check(run.tiling, p, a);
    for (const std::string& w : r.witnesses) {
      if (witnesses.size() < 32) witnesses.push_back(Json{{"instance", i}, {"detail", w}});
    }
    if (i == 0) {
      rep.header = {"n", "m", "v", "w"};
      for (const auto& [n, row] : run.weights.v) {
        const std::vector<double>& w = run.weights.w.at(n);
        for (std::size_t m = 0; m < row.size(); ++m) {
          if (row[m] != 0.0 || w[m] != 0.0) rep.rows.push_back({std::to_string(n), std::to_string(m), fmt(row[m]), fmt(w[m])});
        }
      }
    }
  }
  rep.results = Json{{"params", to_json(p)},
                     {"instances", instances},
                     {"window", window},
                     {"conditions", to_json(total)},
                     {"surplus", surplus},
                     {"witnesses", witnesses}};
  rep.check("zero residual need", total.residual_zero, witnesses);
  rep.check("conservation", total.conservation, witnesses);
  rep.check("tax cap", total.tax_cap, witnesses);
  rep.check("cascade sparsity", total.sparsity, witnesses);
  rep.check("condition 1 equivariance", total.c1_equivariance, witnesses);
  rep.check("condition 2 short tiles", total.c2_short_tiles, witnesses);
  rep.check("condition 3 support", total.c3_support, witnesses);
  rep.check("condition 4 wild service", total.c4_wild_service, witnesses);
  rep.check("surplus inequality", surplus);
}

// ---------------------------------------------------------------------------
// simplicial

SimplicialMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file " + path);
  try {
    return map_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed map file: ") + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

SimplicialMap random_icosahedron_map(int D, Rng& rng) {
  SimplicialMap m{icosahedron(), {}};
  for (int v = 0; v < m.complex.vertex_count(); ++v) {
    Point p;
    for (int k = 0; k < D; ++k) p.push_back(rng.normal());
    m.images.push_back(p);
  }
  return m;
}

Json witness_json(const SimplicialMap& m, const CollisionWitness& w) {
  return Json{{"sigma", w.sigma}, {"tau", w.tau}, {"x", w.x}, {"y", w.y}, {"point", m.at(w.sigma, w.x)}};
}

void simplicial_check(const Vars& v, Ctx& ctx, Report& rep) {
  if (v.target_dim < 1) throw ConfigError("target dimension must be positive");
  Rng rng(ctx.seed);
  const SimplicialMap m = v.map_file.empty() ? random_icosahedron_map(v.target_dim, rng) : load_map(v.map_file);
  const EmbeddingResult res = is_embedding(m);
  rep.results = Json{{"map", to_json(m)}, {"embedding", res.embedding}, {"pairs_checked", res.pairs_checked}};
  rep.header = {"embedding", "pairs_checked"};
  rep.rows = {{res.embedding ? "1" : "0", std::to_string(res.pairs_checked)}};
  if (res.witness) {
    const Json wj = witness_json(m, *res.witness);
    rep.results["witness"] = wj;
    const double gap = euclidean(m.at(res.witness->sigma, res.witness->x), m.at(res.witness->tau, res.witness->y));
    rep.results["witness_gap"] = gap;
    rep.check("witness images coincide", gap <= ctx.tol.at("witness"), wj);
  }
  if (v.expect == "embedding") rep.check("expected an embedding", res.embedding);
  if (v.expect == "collision") rep.check("expected a collision", !res.embedding);
  if (v.expect != "any" && v.expect != "embedding" && v.expect != "collision") {
    throw ConfigError("expect must be any, embedding or collision");
  }
}

void simplicial_perturb(const Vars& v, Ctx& ctx, Report& rep) {
  SimplicialMap m;
  if (v.map_file.empty()) {
    m = SimplicialMap{icosahedron(), std::vector<Point>(12, Point(static_cast<std::size_t>(v.target_dim), 0.0))};
  } else {
    m = load_map(v.map_file);
  }
  if (static_cast<int>(m.D()) < 2 * m.complex.dim() + 1) throw ConfigError("perturb needs D >= 2 dim + 1");
  const PerturbResult res = perturb_to_embedding(m, v.magnitude, ctx.seed, v.max_tries);
  double moved = 0.0;
  for (std::size_t i = 0; i < m.images.size(); ++i) moved = std::max(moved, euclidean(m.images[i], res.map.images[i]));
  rep.results = Json{{"map", to_json(res.map)}, {"success", res.success}, {"tries", res.tries}, {"max_displacement", moved}};
  rep.header = {"vertex", "image"};
  for (std::size_t i = 0; i < res.map.images.size(); ++i) {
    std::string coords;
    for (double c : res.map.images[i]) coords += (coords.empty() ? "" : " ") + fmt(c);
    rep.rows.push_back({std::to_string(i), coords});
  }
  rep.check("perturbation embeds", res.success && is_embedding(res.map).embedding);
  rep.check("displacement within magnitude", moved <= v.magnitude, moved);
}

// ---------------------------------------------------------------------------
// codec

void codec_rotation(const Vars& v, Ctx& ctx, Report& rep) {
  const IntRange window{-v.half_window, v.half_window};
  Rng rng(ctx.seed);
  double min_gap = INFINITY;
  Json at = nullptr;
  for (int i = 0; i < v.points; ++i) {
    const double x = rng.uniform();
    double y = rng.uniform();
    while (y == x) y = rng.uniform();
    const DiscreteSignal a = rotation_embed({v.alpha, x}, window);
    const DiscreteSignal b = rotation_embed({v.alpha, y}, window);
    double gap = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) gap = std::max(gap, std::abs(a.values[k] - b.values[k]));
    if (gap < min_gap) {
      min_gap = gap;
      at = Json::array({x, y});
    }
  }
  double shift_err = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double x = rng.uniform();
    const DiscreteSignal a = rotation_embed({v.alpha, x + v.alpha}, window);
    const DiscreteSignal b = rotation_embed({v.alpha, x}, {window.lo + 1, window.hi + 1});
    for (std::size_t k = 0; k < a.values.size(); ++k) shift_err = std::max(shift_err, std::abs(a.values[k] - b.values[k]));
  }
  rep.results = Json{{"alpha", v.alpha}, {"pairs", v.points}, {"min_gap", min_gap}, {"min_gap_pair", at},
                     {"shift_error", shift_err}};
  if (auto q = near_rational(v.alpha)) rep.results["advisory"] = "alpha is within 1e-12 of a rational";
  rep.header = {"quantity", "value"};
  rep.rows = {{"min_gap", fmt(min_gap)}, {"shift_error", fmt(shift_err)}};
  rep.check("sampled signals separate points", min_gap > 0.0, at);
  rep.check("shift equivariance", shift_err <= ctx.tol.at("equivariance"), shift_err);
}

void codec_marker(const Vars& v, Ctx& ctx, Report& rep) {
  const Rotation r{v.alpha, 0.0};
  const MarkerFunction h = marker_function(r, v.marker_L);
  const IntRange window{-v.half_window, v.half_window};
  const MarkerSeq seq = orbit_markers(r, h, {-1000, 1000});
  const Band band{v.band_lo, v.band_hi};
  const BandSignal g = marker_encode(r, h, band, window);
  const double gap = v.band_hi - v.band_lo;
  const BandCheckReport bc = band_check(g, band, {v.band_lo - gap, v.band_lo - 0.5 * gap, v.band_hi + 0.5 * gap,
                                                  v.band_hi + gap}, ctx.tol.at("leakage"));
  const Rotation moved{v.alpha, v.alpha};
  const BandSignal g1 = marker_encode(moved, h, band, {window.lo, window.hi - 1});
  const BandSignal g0 = marker_encode(r, h, band, {window.lo + 1, window.hi});
  Rng rng(ctx.seed);
  double shift_err = 0.0;
  const double span = 0.5 * static_cast<double>(v.half_window);
  for (int i = 0; i < 1000; ++i) {
    const double t = rng.uniform(-span, span);
    shift_err = std::max(shift_err, std::abs(eval(g1, t) - eval(g0, t + 1.0)));
  }
  Json probes = Json::array();
  for (const ProbeLeakage& p : bc.probes) probes.push_back(Json{{"frequency", p.frequency}, {"leakage", p.leakage}});
  rep.results = Json{{"half_width", h.half_width}, {"L", h.L}, {"M", h.M}, {"band", Json::array({band.lo, band.hi})},
                     {"probes", probes}, {"shift_error", shift_err}};
  rep.header = {"t", "re", "im"};
  for (int i = 0; i <= 200; ++i) {
    const double t = -10.0 + 0.1 * i;
    const cplx z = eval(g, t);
    rep.rows.push_back({fmt(t), fmt(z.real()), fmt(z.imag())});
  }
  rep.check("marker sequence admissible", seq.invariant_violation().empty(), seq.invariant_violation());
  rep.check("plateau value at the centre", h(0.0) == 1.0);
  rep.check("band check", bc.pass, probes);
  rep.check("shift equivariance", shift_err <= ctx.tol.at("equivariance"), shift_err);
}

void codec_toy(const Vars& v, Ctx& ctx, Report& rep) {
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const IntRange span{-4 * v.half_window, 4 * v.half_window};
  const IntRange word_window{span.lo - 64, span.hi + 64};
  const SubshiftWindow y = sturmian_window(golden, 0.0, word_window);
  const auto cyl = find_cylinder_markers(y, v.N);
  if (!cyl) throw ConfigError("no cylinder marker found for this N");
  const std::vector<std::int64_t>& markers = cyl->positions;
  BlockMaps G;
  G.kind = v.noisy ? BlockMaps::Kind::kNoisy : BlockMaps::Kind::kIdentity;
  G.delta = v.block_delta;
  Rng rng(ctx.seed);
  std::vector<std::pair<SubshiftWindow, SubshiftWindow>> pairs;
  pairs.reserve(static_cast<std::size_t>(v.pairs));
  for (int i = 0; i < v.pairs; ++i) {
    const double slope = rng.uniform(0.2, 0.8);
    const double icpt = rng.uniform();
    const double offset = (rng.coin(0.5) ? 1.0 : -1.0) * std::pow(10.0, -rng.uniform(0.5, 4.5));
    pairs.emplace_back(sturmian_window(slope, icpt, word_window), sturmian_window(slope, icpt + offset, word_window));
  }
  ToySetup setup;
  setup.window = {-v.half_window, v.half_window};
  setup.span = span;
  const ToyReport tr = toy_verify(pairs, markers, G, setup);

  bool equivariant = true;
  for (std::size_t i = 0; i < std::min<std::size_t>(pairs.size(), 100); ++i) {
    const SubshiftWindow& x = pairs[i].first;
    std::vector<std::int64_t> moved = markers;
    for (auto& m : moved) m -= 1;
    const DiscreteSignal a = toy_encode(x, markers, G, setup.window, setup.span);
    const DiscreteSignal b = toy_encode(shift_word(x, 1), moved, G, {setup.window.lo - 1, setup.window.hi - 1},
                                        {setup.span.lo - 1, setup.span.hi - 1});
    equivariant = equivariant && a.values == b.values;
  }
  rep.results = Json{{"cylinder", cyl->cylinder},
                     {"markers", markers.size()},
                     {"block_maps", v.noisy ? "noisy" : "identity"},
                     {"pairs", tr.pairs},
                     {"equal_images", tr.equal_images},
                     {"violations", tr.violations},
                     {"key_step_failures", tr.key_step_failures},
                     {"tube_failures", tr.tube_failures},
                     {"witnesses", tr.witnesses}};
  rep.header = {"quantity", "value"};
  rep.rows = {{"pairs", std::to_string(tr.pairs)},
              {"equal_images", std::to_string(tr.equal_images)},
              {"violations", std::to_string(tr.violations)}};
  rep.check("markers more than N apart", true);
  rep.check("no delta-embedding violations", tr.violations == 0, tr.witnesses);
  rep.check("key step inequality", tr.key_step_failures == 0, tr.witnesses);
  rep.check("perturbation tube", tr.tube_failures == 0, tr.witnesses);
  rep.check("shift equivariance", equivariant);
}

// ---------------------------------------------------------------------------
// sampling

void sampling_stress(const Vars& v, Ctx& ctx, Report& rep) {
  if (!v.stress) throw ConfigError("sampling requires --stress");
  if (!(v.c > 0.0) || v.n_rate < 1 || v.trials < 0) throw ConfigError("need c > 0, N >= 1, trials >= 0");
  StressConfig cfg;
  cfg.zero_tol = ctx.tol.at("zero");
  const StressReport sr = sampling_injectivity_stress(v.c, v.n_rate, v.trials, ctx.seed, cfg);
  rep.results = Json{{"c", v.c},
                     {"N", v.n_rate},
                     {"trials", sr.trials},
                     {"violations", sr.violations},
                     {"min_ratio", sr.trials > 0 ? Json(sr.min_ratio) : Json(nullptr)},
                     {"hypothesis_holds", sr.hypothesis_holds}};
  rep.header = {"quantity", "value"};
  rep.rows = {{"trials", std::to_string(sr.trials)}, {"violations", std::to_string(sr.violations)}};
  if (sr.hypothesis_holds) {
    rep.check("no injectivity violations", sr.violations == 0, sr.violations);
  } else {
    rep.results["nyquist_sampled_gap"] = *sr.nyquist_sampled_gap;
    rep.results["nyquist_continuous_gap"] = *sr.nyquist_continuous_gap;
    rep.check("counterexample vanishes on the lattice", *sr.nyquist_sampled_gap == 0.0);
    rep.check("counterexample is nonzero", *sr.nyquist_continuous_gap > 0.0);
  }
  // The closed-form counterexample sin(2 pi t) on (1/2)Z, always reported.
  const SampleTrack half = sample(sine_tone(1.0), 0.5, {-128, 128});
  const bool zero = std::all_of(half.values.begin(), half.values.end(), [](cplx z) { return z == cplx{0.0, 0.0}; });
  rep.results["sin_2pi_t_on_half_integers_zero"] = zero;
  rep.check("sin(2 pi t) vanishes on (1/2)Z", zero);
}

// ---------------------------------------------------------------------------

using SuiteFn = void (*)(const Vars&, Ctx&, Report&);

struct SuiteDef {
  SuiteFn fn;
  std::map<std::string, double> tol;
};

const std::map<std::string, SuiteDef>& suites() {
  static const std::map<std::string, SuiteDef> table = {
      {"interp eval", {interp_eval, {{"dual", 1e-4}}}},
      {"interp oracle-sinc", {interp_oracle_sinc, {{"sinc", 1e-6}}}},
      {"interp radii", {interp_radii, {{"decay", 1e-9}}}},
      {"tiling demo", {tiling_demo, {{"equivariance", 1e-9}}}},
      {"weights run", {weights_run, {}}},
      {"simplicial check", {simplicial_check, {{"witness", 1e-9}}}},
      {"simplicial perturb", {simplicial_perturb, {}}},
      {"codec rotation", {codec_rotation, {{"equivariance", 1e-12}}}},
      {"codec marker", {codec_marker, {{"leakage", 1e-3}, {"equivariance", 1e-9}}}},
      {"codec toy", {codec_toy, {}}},
      {"sampling", {sampling_stress, {{"zero", 1e-12}}}},
  };
  return table;
}

double parse_positive(const std::string& name, const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("tolerance " + name + " is not a number");
  }
  if (used != text.size() || !(x > 0.0) || !std::isfinite(x)) throw ConfigError("tolerance " + name + " must be positive");
  return x;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

int run_cli(const std::vector<std::string>& raw, std::ostream& out, std::ostream& err) {
  try {
    // --tol.<name> and --config are read before CLI11 sees the arguments.
    std::map<std::string, std::string> tol_text;
    std::string config_path;
    std::vector<std::string> args;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const std::string& a = raw[i];
      auto take_value = [&](const std::string& flag) -> std::string {
        const auto eq = a.find('=');
        if (eq != std::string::npos) return a.substr(eq + 1);
        if (i + 1 >= raw.size()) throw ConfigError(flag + " needs a value");
        return raw[++i];
      };
      if (a.rfind("--tol.", 0) == 0) {
        const std::string name = a.substr(6, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 6);
        if (name.empty()) throw ConfigError("empty tolerance name");
        tol_text[name] = take_value("--tol." + name);
      } else if (a == "--config" || a.rfind("--config=", 0) == 0) {
        config_path = take_value("--config");
      } else {
        args.push_back(a);
      }
    }

    Json config = Json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file " + config_path);
      try {
        config = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config file: ") + e.what());
      }
      if (!config.is_object()) throw ConfigError("config file must hold a JSON object");
    }

    Vars v;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string format = "json";
    std::string witness_path;
    const Json params = config.value("params", Json::object());
    try {
      seed = config.value("seed", seed);
      out_path = config.value("out", out_path);
      format = config.value("format", format);
      const Json tol_cfg = config.value("tol", Json::object());
      for (const auto& [name, value] : tol_cfg.items()) {
        tol_text.emplace(name, format_double(value.get<double>()));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config file: ") + e.what());
    }

    CLI::App app{"Band-limited embedding toolkit"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_path, "report file (default: standard output)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--witness", witness_path, "witness file written on assertion failure");

    std::map<const CLI::App*, std::vector<std::pair<std::string, std::function<Json()>>>> bound;
    auto bind = [&](CLI::App* sub, const std::string& name, auto& var, const std::string& help) {
      using T = std::decay_t<decltype(var)>;
      if (params.is_object() && params.contains(name)) {
        try {
          var = params.at(name).get<T>();
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError("config parameter " + name + ": " + e.what());
        }
      }
      sub->add_option("--" + name, var, help);
      bound[sub].emplace_back(name, [&var] { return Json(var); });
    };

    std::map<const CLI::App*, std::string> names;
    auto leaf = [&](CLI::App* parent, const std::string& cmd, const std::string& help) {
      CLI::App* s = parent->add_subcommand(cmd, help);
      s->fallthrough();
      names[s] = parent == &app ? cmd : parent->get_name() + " " + cmd;
      return s;
    };

    CLI::App* interp = app.add_subcommand("interp", "interpolation kernels");
    interp->require_subcommand(1);
    interp->fallthrough();
    CLI::App* ie = leaf(interp, "eval", "evaluate phi for a random admissible multiset");
    CLI::App* io = leaf(interp, "oracle-sinc", "compare the product with sin(pi z)/(pi z)");
    CLI::App* ir = leaf(interp, "radii", "empirical truncation and locality radii, decay constant");
    for (CLI::App* s : {ie, ir}) {
      bind(s, "l", v.l, "block length");
      bind(s, "rho", v.rho, "density p/q");
      bind(s, "tau", v.tau, "window width");
    }
    for (CLI::App* s : {ie, io, ir}) bind(s, "window", v.window_blocks, "block window radius");
    bind(ie, "points", v.points, "grid points");
    bind(ie, "range", v.range, "grid half-width");
    bind(io, "points", v.points, "oracle points");
    bind(io, "radius", v.radius, "max |z|");
    bind(ir, "r", v.r, "radius of the tested disk");
    bind(ir, "eps", v.eps, "target accuracy");
    bind(ir, "family", v.family, "random family size");

    CLI::App* tiling = app.add_subcommand("tiling", "Voronoi tilings");
    tiling->require_subcommand(1);
    tiling->fallthrough();
    CLI::App* td = leaf(tiling, "demo", "tiles and densities for random markers");
    bind(td, "L", v.L, "marker separation");
    bind(td, "M", v.M, "marker return bound");
    bind(td, "window", v.window, "window length");
    bind(td, "r", v.collar, "boundary collar radius");

    CLI::App* weights = app.add_subcommand("weights", "tax and weight allocation");
    weights->require_subcommand(1);
    weights->fallthrough();
    CLI::App* wr = leaf(weights, "run", "random instances with all condition checks");
    bind(wr, "params", v.params_file, "JSON file with C, L0, L1, L, R, M");
    bind(wr, "instances", v.instances, "number of instances");
    bind(wr, "window", v.weight_window, "window length");

    CLI::App* simp = app.add_subcommand("simplicial", "simplicial maps");
    simp->require_subcommand(1);
    simp->fallthrough();
    CLI::App* sc = leaf(simp, "check", "exact embedding test");
    CLI::App* sp = leaf(simp, "perturb", "perturb into an embedding");
    for (CLI::App* s : {sc, sp}) {
      bind(s, "map", v.map_file, "JSON map file");
      bind(s, "dim", v.target_dim, "target dimension for the built-in map");
    }
    bind(sc, "expect", v.expect, "any, embedding or collision");
    bind(sp, "magnitude", v.magnitude, "largest vertex displacement");
    bind(sp, "max-tries", v.max_tries, "random attempts");

    CLI::App* codec = app.add_subcommand("codec", "encoders for concrete systems");
    codec->require_subcommand(1);
    codec->fallthrough();
    CLI::App* cr = leaf(codec, "rotation", "cosine embedding of an irrational rotation");
    CLI::App* cm = leaf(codec, "marker", "marker-modulated band-limited encoder");
    CLI::App* ct = leaf(codec, "toy", "Voronoi block codec over Sturmian words");
    for (CLI::App* s : {cr, cm}) bind(s, "alpha", v.alpha, "rotation number");
    for (CLI::App* s : {cr, cm, ct}) bind(s, "window", v.half_window, "half window");
    bind(cr, "pairs", v.points, "random point pairs");
    bind(cm, "L", v.marker_L, "marker separation");
    bind(cm, "band-lo", v.band_lo, "band lower edge");
    bind(cm, "band-hi", v.band_hi, "band upper edge");
    bind(ct, "pairs", v.pairs, "random word pairs");
    bind(ct, "N", v.N, "marker separation");
    bind(ct, "noisy", v.noisy, "use the noisy block maps");
    bind(ct, "delta", v.block_delta, "block map perturbation size");

    CLI::App* samp = app.add_subcommand("sampling", "sampling injectivity stress test");
    samp->fallthrough();
    names[samp] = "sampling";
    samp->add_flag("--stress", v.stress, "run the injectivity stress suite");
    bind(samp, "c", v.c, "band half-width");
    bind(samp, "N", v.n_rate, "sampling rate");
    bind(samp, "trials", v.trials, "random pairs");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return kExitPass;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n";
      return kExitInvalid;
    }

    const CLI::App* chosen = nullptr;
    for (const auto& [sub, name] : names) {
      if (sub->parsed()) chosen = sub;
    }
    if (chosen == nullptr) throw ConfigError("no suite selected");
    const std::string suite = names.at(chosen);
    const SuiteDef& def = suites().at(suite);

    Ctx ctx;
    ctx.seed = seed;
    ctx.tol = def.tol;
    for (const auto& [name, text] : tol_text) {
      if (!ctx.tol.count(name)) throw ConfigError("unknown tolerance '" + name + "' for " + suite);
      ctx.tol[name] = parse_positive(name, text);
    }
    if (format != "json" && format != "csv") throw ConfigError("format must be json or csv");

    Json provenance{{"tool", "bandembed"}, {"version", kVersion}, {"suite", suite}, {"seed", seed}};
    Json tol_json = Json::object();
    for (const auto& [name, value] : ctx.tol) tol_json[name] = value;
    provenance["tolerances"] = tol_json;
    Json param_json = Json::object();
    if (bound.count(chosen)) {
      for (const auto& [name, get] : bound.at(chosen)) param_json[name] = get();
    }
    provenance["parameters"] = param_json;
    provenance["modules"] = Json{{"bandlimited", kVersion}, {"interpolation", kVersion}, {"tiling", kVersion},
                                 {"weights", kVersion},     {"simplicial", kVersion},    {"systems", kVersion}};

    Report rep;
    try {
      def.fn(v, ctx, rep);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }

    std::ostringstream body;
    if (format == "json") {
      Json doc{{"provenance", provenance}, {"results", rep.results}, {"assertions", rep.assertions},
               {"pass", rep.all_pass()}};
      body << doc.dump(2) << '\n';
    } else {
      body << "# provenance " << provenance.dump() << '\n';
      for (std::size_t i = 0; i < rep.header.size(); ++i) body << (i ? "," : "") << csv_escape(rep.header[i]);
      body << '\n';
      for (const auto& row : rep.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) body << (i ? "," : "") << csv_escape(row[i]);
        body << '\n';
      }
    }
    if (out_path.empty() || out_path == "-") {
      out << body.str();
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + out_path);
      f << body.str();
    }

    if (!rep.all_pass()) {
      if (witness_path.empty()) witness_path = out_path.empty() || out_path == "-" ? "bandembed_witness.json" : out_path + ".witness.json";
      Json failed = Json::array();
      for (const Json& a : rep.assertions) {
        if (!a.at("pass").get<bool>()) failed.push_back(a.at("name"));
      }
      std::ofstream w(witness_path, std::ios::binary);
      w << Json{{"provenance", provenance}, {"failed", failed}, {"witnesses", rep.witnesses}}.dump(2) << '\n';
      err << "assertion failure; witness written to " << witness_path << "\n";
      return kExitAssertion;
    }
    return kExitPass;
  } catch (const ConfigError& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CLI::Error& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace bandembed
