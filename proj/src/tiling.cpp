#include "bandembed/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bandembed {

void MarkerSeq::validate() const {
  if (L < 1 || M <= L) throw Error("markers: need 1 <= L < M");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].h > 0.0 && entries[i].h <= 1.0)) throw Error("markers: heights must lie in (0, 1]");
    if (i > 0 && entries[i - 1].n >= entries[i].n) throw Error("markers: positions must be strictly increasing");
  }
}

std::string MarkerSeq::invariant_violation() const {
  std::ostringstream out;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].n - entries[i - 1].n <= L) {
      out << "markers " << entries[i - 1].n << " and " << entries[i].n << " are within L";
      return out.str();
    }
  }
  std::optional<std::int64_t> last_full;
  for (const Marker& m : entries) {
    if (m.h != 1.0) continue;
    if (last_full && m.n - *last_full > M) {
      out << "no h = 1 marker in (" << *last_full << ", " << m.n << ")";
      return out.str();
    }
    last_full = m.n;
  }
  return {};
}

const Tile* Tiling::find(std::int64_t n) const {
  auto it = std::lower_bound(tiles.begin(), tiles.end(), n, [](const Tile& t, std::int64_t v) { return t.n < v; });
  return (it != tiles.end() && it->n == n) ? &*it : nullptr;
}

std::vector<double> Tiling::boundaries() const {
  std::vector<double> out;
  for (const Tile& t : tiles) {
    if (t.empty) continue;
    if (!t.clipped_left) out.push_back(t.alpha);
    if (!t.clipped_right) out.push_back(t.beta);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) <= 1e-9; }),
            out.end());
  return out;
}

namespace {

// Where the bisector of (n, 1/hn) and (m, 1/hm) meets the axis, as an offset
// from n so that translating both markers translates the result exactly.
double crossing_offset(const Marker& a, const Marker& b) {
  const auto d = static_cast<double>(b.n - a.n);
  const double ia = 1.0 / (a.h * a.h);
  const double ib = 1.0 / (b.h * b.h);
  return (d * d + ib - ia) / (2.0 * d);
}

}  // namespace

Tiling compute_tiles(const MarkerSeq& markers, Interval window) {
  markers.validate();
  if (!(window.lo < window.hi)) throw Error("tiling: window must have lo < hi");
  Tiling tiling;
  tiling.window = window;
  tiling.L = markers.L;
  tiling.M = markers.M;
  const auto& e = markers.entries;
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (static_cast<double>(e[i].n - e[i - 1].n) > window.length()) {
      tiling.diagnostic = "window narrower than a marker gap";
      break;
    }
  }
  const std::int64_t reach = 2 * markers.M;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double n = static_cast<double>(e[i].n);
    double alpha = -std::numeric_limits<double>::infinity();
    double beta = std::numeric_limits<double>::infinity();
    for (std::size_t j = i; j-- > 0 && e[i].n - e[j].n <= reach;) {
      alpha = std::max(alpha, n + crossing_offset(e[i], e[j]));
    }
    for (std::size_t j = i + 1; j < e.size() && e[j].n - e[i].n <= reach; ++j) {
      beta = std::min(beta, n + crossing_offset(e[i], e[j]));
    }
    Tile tile;
    tile.n = e[i].n;
    if (alpha > beta) {
      if (n < window.lo || n > window.hi) continue;
      tile.empty = true;
      tile.alpha = alpha;
      tile.beta = beta;
      tiling.tiles.push_back(tile);
      continue;
    }
    tile.clipped_left = alpha < window.lo;
    tile.clipped_right = beta > window.hi;
    tile.alpha = std::max(alpha, window.lo);
    tile.beta = std::min(beta, window.hi);
    if (tile.alpha > tile.beta) continue;
    tiling.tiles.push_back(tile);
  }
  return tiling;
}

MarkerSeq shift_markers(const MarkerSeq& markers, std::int64_t k) {
  MarkerSeq out = markers;
  for (Marker& m : out.entries) m.n -= k;
  return out;
}

std::vector<Interval> boundary_set(const Tiling& tiling, double r, bool include_window_edges) {
  if (r < 0.0) throw Error("boundary_set: r must be nonnegative");
  std::vector<double> points = tiling.boundaries();
  if (include_window_edges) {
    for (const Tile& t : tiling.tiles) {
      if (t.empty) continue;
      if (t.clipped_left) points.push_back(t.alpha);
      if (t.clipped_right) points.push_back(t.beta);
    }
    std::sort(points.begin(), points.end());
  }
  std::vector<Interval> out;
  for (double p : points) {
    Interval c{std::max(p - r, tiling.window.lo), std::min(p + r, tiling.window.hi)};
    if (!out.empty() && c.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, c.hi);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

DensityReport density_report(const Tiling& tiling, double r, double R, double a) {
  if (!(R > 0.0)) throw Error("density_report: R must be positive");
  if (a < tiling.window.lo || a + R > tiling.window.hi) throw Error("density_report: [a, a+R] outside the window");
  DensityReport rep;
  double count = 0.0;
  double measure = 0.0;
  for (const Interval& j : boundary_set(tiling, r, false)) {
    const double u = std::max(j.lo, a);
    const double v = std::min(j.hi, a + R);
    if (u > v) continue;
    count += std::floor(v) - std::ceil(u) + 1.0;
    measure += v - u;
  }
  const auto L = static_cast<double>(tiling.L);
  const auto M = static_cast<double>(tiling.M);
  rep.count_density = count / R;
  rep.measure_density = measure / R;
  rep.count_bound = (4.0 * r + 2.0) / L;
  rep.measure_bound = 4.0 * r / L;
  rep.slack = 2.0 * (2.0 * r + 1.0) * (1.0 + (R + M) / L) / R;
  rep.finite_count_bound = (2.0 * (r + 1.0) + 2.0 * (2.0 * r + 1.0) * (1.0 + (R + M) / L)) / R;
  rep.count_ok = rep.count_density <= rep.count_bound + rep.slack;
  rep.measure_ok = rep.measure_density <= rep.measure_bound + rep.slack;
  return rep;
}

TileAnchors anchors_of(double alpha, double beta, std::int64_t n, std::int64_t N) {
  if (N < 1) throw Error("tile_anchors: N must be positive");
  const auto nd = static_cast<double>(n);
  const auto Nd = static_cast<double>(N);
  TileAnchors a;
  a.r = static_cast<std::int64_t>(std::ceil((alpha - nd) / Nd));
  a.s = static_cast<std::int64_t>(std::floor((beta - nd) / Nd));
  a.c = (nd + static_cast<double>(a.r) * Nd - alpha) / Nd;
  a.c_prime = (beta - nd - static_cast<double>(a.s) * Nd) / Nd;
  return a;
}

std::optional<TileAnchors> tile_anchors(const Tiling& tiling, std::int64_t n, std::int64_t N) {
  const Tile* t = tiling.find(n);
  if (t == nullptr || t->empty) return std::nullopt;
  return anchors_of(t->alpha, t->beta, n, N);
}

NodeMultiset build_node_set(const Tiling& tiling, const std::vector<ThetaBits>& theta, std::int64_t N,
                            const GridParams& params) {
  params.validate();
  const std::int64_t p = params.rho.num();
  const std::int64_t q = params.rho.den();
  if ((N * p) % q != 0) throw Error("build_node_set: rho N must be an integer");
  const std::int64_t per_unit = N * p / q;  // grid points per N
  std::vector<Node> nodes;
  std::size_t slot = 0;
  for (const Tile& t : tiling.tiles) {
    if (t.empty) continue;
    if (slot >= theta.size()) throw Error("build_node_set: one theta pair per nonempty tile required");
    const ThetaBits bits = theta[slot++];
    if (t.degenerate()) continue;
    const TileAnchors a = anchors_of(t.alpha, t.beta, t.n, N);
    const std::int64_t k_lo = (a.r + bits.first) * per_unit;
    const std::int64_t k_hi = (a.s - bits.second) * per_unit;  // exclusive
    for (std::int64_t k = k_lo; k < k_hi; ++k) {
      nodes.push_back({static_cast<double>(t.n) + static_cast<double>(k * q) / static_cast<double>(p), 1});
    }
  }
  if (slot != theta.size()) throw Error("build_node_set: one theta pair per nonempty tile required");
  const IntRange blocks{floor_div(static_cast<std::int64_t>(std::floor(tiling.window.lo)), params.l),
                        floor_div(static_cast<std::int64_t>(std::floor(tiling.window.hi)), params.l)};
  return NodeMultiset(params, blocks, std::move(nodes));
}

MarkerSeq random_markers(std::int64_t L, std::int64_t M, std::int64_t lo, std::int64_t hi, Rng& rng) {
  if (L < 1 || M < L + 2) throw Error("random_markers: need M >= L + 2");
  MarkerSeq seq;
  seq.L = L;
  seq.M = M;
  std::int64_t p = lo + rng.integer(0, M - 2);
  while (p <= hi) {
    seq.entries.push_back({p, 1.0});
    const std::int64_t next = p + rng.integer(L + 1, M - 1);
    if (next - p >= 2 * (L + 1)) {
      const std::int64_t extra = rng.integer(p + L + 1, next - L - 1);
      seq.entries.push_back({extra, static_cast<double>(rng.integer(1, 16)) / 16.0});
    }
    p = next;
  }
  return seq;
}

}  // namespace bandembed
