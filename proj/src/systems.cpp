#include "bandembed/systems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace bandembed {

namespace {

double frac(double u) { return u - std::floor(u); }

// Distance from u to the nearest integer.
double circle_norm(double u) {
  const double f = frac(u);
  return std::min(f, 1.0 - f);
}

}  // namespace

double Rotation::orbit(std::int64_t n) const { return frac(x0 + static_cast<double>(n) * alpha); }

std::optional<std::pair<std::int64_t, std::int64_t>> near_rational(double alpha, std::int64_t max_den, double tol) {
  for (std::int64_t q = 1; q <= max_den; ++q) {
    const double p = std::round(alpha * static_cast<double>(q));
    if (std::abs(alpha - p / static_cast<double>(q)) < tol) return std::make_pair(static_cast<std::int64_t>(p), q);
  }
  return std::nullopt;
}

DiscreteSignal rotation_embed(const Rotation& r, IntRange window) {
  DiscreteSignal s;
  s.window = window;
  for (std::int64_t n = window.lo; n <= window.hi; ++n) {
    s.values.push_back(0.5 * (1.0 + cos_pi(2.0 * r.orbit(n))));
  }
  return s;
}

double MarkerFunction::operator()(double x) const {
  const double a = circle_norm(x);
  if (a <= 0.5 * half_width) return 1.0;
  if (a >= half_width) return 0.0;
  return (half_width - a) / (0.5 * half_width);
}

MarkerFunction marker_function(const Rotation& r, std::int64_t L, std::int64_t sample_span) {
  if (L < 1) throw Error("marker_function: L must be positive");
  double gap = 1.0;
  for (std::int64_t k = 1; k <= L; ++k) gap = std::min(gap, circle_norm(static_cast<double>(k) * r.alpha));
  if (gap < 1e-12) throw Error("marker_function: no admissible arc, alpha is too close to a rational");
  MarkerFunction h;
  h.L = L;
  h.half_width = 0.45 * gap;
  std::optional<std::int64_t> last;
  std::int64_t widest = 0;
  for (std::int64_t n = -sample_span; n <= sample_span; ++n) {
    if (h(r.orbit(n)) != 1.0) continue;
    if (last) widest = std::max(widest, n - *last);
    last = n;
  }
  if (widest == 0) throw Error("marker_function: orbit sample too short to observe returns");
  h.M = std::max(widest + 1, L + 1);
  return h;
}

MarkerSeq orbit_markers(const Rotation& r, const MarkerFunction& h, IntRange window) {
  MarkerSeq seq;
  seq.L = h.L;
  seq.M = h.M;
  for (std::int64_t n = window.lo; n <= window.hi; ++n) {
    const double v = h(r.orbit(n));
    if (v > 0.0) seq.entries.push_back({n, v});
  }
  return seq;
}

BandSignal marker_encode(const Rotation& r, const MarkerFunction& h, const Band& band, IntRange window,
                         EncodeKernel kernel) {
  band.validate();
  BandSignal s;
  s.carrier = band.carrier();
  for (std::int64_t k = window.lo; k <= window.hi; ++k) {
    s.nodes.push_back(static_cast<double>(k));
    s.coeffs.emplace_back(h(r.orbit(k)), 0.0);
  }
  if (kernel == EncodeKernel::kBump) {
    s.kernel = BumpKernel{band.width()};
  } else {
    const double tau = band.width() - 1.0;
    if (!(tau > 0.0)) throw Error("marker_encode: interpolation kernel needs a band wider than 1");
    GridParams params{1, Rational(1), tau};
    std::vector<Node> nodes;
    for (double t : s.nodes) nodes.push_back({t, 1});
    s.kernel = LambdaKernel{std::make_shared<const LambdaFamily>(NodeMultiset(params, window, nodes))};
  }
  return s;
}

SubshiftWindow sturmian_window(double slope, double intercept, IntRange window) {
  SubshiftWindow w;
  w.window = window;
  w.slope = slope;
  w.intercept = intercept;
  w.degenerate = near_rational(slope, 1000).has_value();
  for (std::int64_t n = window.lo; n <= window.hi; ++n) {
    const auto nd = static_cast<double>(n);
    w.word.push_back(static_cast<std::uint8_t>(std::floor((nd + 1.0) * slope + intercept) -
                                               std::floor(nd * slope + intercept)));
  }
  return w;
}

bool is_balanced(const std::vector<std::uint8_t>& word) {
  std::vector<int> prefix(word.size() + 1, 0);
  for (std::size_t i = 0; i < word.size(); ++i) prefix[i + 1] = prefix[i] + word[i];
  for (std::size_t len = 1; len <= word.size(); ++len) {
    int lo = prefix[len];
    int hi = prefix[len];
    for (std::size_t i = 1; i + len <= word.size(); ++i) {
      const int ones = prefix[i + len] - prefix[i];
      lo = std::min(lo, ones);
      hi = std::max(hi, ones);
    }
    if (hi - lo > 1) return false;
  }
  return true;
}

SubshiftWindow shift_word(const SubshiftWindow& w, std::int64_t k) {
  SubshiftWindow out = w;
  out.window = {w.window.lo - k, w.window.hi - k};
  return out;
}

std::vector<std::int64_t> cylinder_positions(const SubshiftWindow& y, const std::vector<std::uint8_t>& cylinder) {
  std::vector<std::int64_t> out;
  if (cylinder.empty() || cylinder.size() > y.word.size()) return out;
  for (std::size_t i = 0; i + cylinder.size() <= y.word.size(); ++i) {
    if (std::equal(cylinder.begin(), cylinder.end(), y.word.begin() + static_cast<std::ptrdiff_t>(i))) {
      out.push_back(y.window.lo + static_cast<std::int64_t>(i));
    }
  }
  return out;
}

std::optional<CylinderMarkers> find_cylinder_markers(const SubshiftWindow& y, std::int64_t N, std::size_t max_length) {
  for (std::size_t len = 1; len <= std::min(max_length, y.word.size()); ++len) {
    std::set<std::vector<std::uint8_t>> factors;
    for (std::size_t i = 0; i + len <= y.word.size(); ++i) {
      factors.emplace(y.word.begin() + static_cast<std::ptrdiff_t>(i),
                      y.word.begin() + static_cast<std::ptrdiff_t>(i + len));
    }
    for (const auto& f : factors) {
      std::vector<std::int64_t> pos = cylinder_positions(y, f);
      if (pos.size() < 2) continue;
      bool spread = true;
      for (std::size_t i = 1; i < pos.size() && spread; ++i) spread = pos[i] - pos[i - 1] > N;
      if (spread) return CylinderMarkers{f, pos};
    }
  }
  return std::nullopt;
}

double BlockMaps::value(const std::vector<std::uint8_t>& block, std::size_t t) const {
  const double b = block.at(t);
  if (kind == Kind::kIdentity) return b;
  const double position = static_cast<double>(t + 1) / static_cast<double>(block.size());
  return (1.0 - 0.5 * delta) * b + 0.25 * delta * position;
}

std::vector<std::pair<std::int64_t, std::int64_t>> discrete_tiles(const std::vector<std::int64_t>& markers,
                                                                  IntRange window) {
  std::vector<std::pair<std::int64_t, std::int64_t>> tiles;
  for (std::size_t i = 0; i < markers.size(); ++i) {
    if (i > 0 && markers[i] <= markers[i - 1]) throw Error("discrete_tiles: markers must be strictly increasing");
    std::int64_t start = i == 0 ? window.lo : floor_div(markers[i - 1] + markers[i], 2) + 1;
    std::int64_t end = i + 1 == markers.size() ? window.hi : floor_div(markers[i] + markers[i + 1], 2);
    start = std::max(start, window.lo);
    end = std::min(end, window.hi);
    if (start <= end) tiles.emplace_back(start, end - start + 1);
  }
  return tiles;
}

DiscreteSignal toy_encode(const SubshiftWindow& x, const std::vector<std::int64_t>& markers, const BlockMaps& G,
                          IntRange window, IntRange span) {
  if (window.lo < span.lo || window.hi > span.hi) throw Error("toy_encode: window must lie inside the span");
  if (span.lo < x.window.lo || span.hi > x.window.hi) throw Error("toy_encode: word does not cover the span");
  DiscreteSignal g;
  g.window = window;
  g.values.assign(static_cast<std::size_t>(window.size()), 0.0);
  for (const auto& [alpha, len] : discrete_tiles(markers, span)) {
    if (static_cast<std::size_t>(len - 1) >= G.max_length) throw Error("toy_encode: no block map for a tile this long");
    if (alpha + len - 1 < window.lo || alpha > window.hi) continue;
    std::vector<std::uint8_t> block;
    for (std::int64_t t = alpha; t < alpha + len; ++t) block.push_back(x.at(t));
    for (std::int64_t t = std::max(alpha, window.lo); t <= std::min(alpha + len - 1, window.hi); ++t) {
      g.values[static_cast<std::size_t>(t - window.lo)] = G.value(block, static_cast<std::size_t>(t - alpha));
    }
  }
  return g;
}

double word_distance(const SubshiftWindow& a, const SubshiftWindow& b, std::int64_t origin) {
  const std::int64_t lo = std::max(a.window.lo, b.window.lo);
  const std::int64_t hi = std::min(a.window.hi, b.window.hi);
  if (origin < lo || origin > hi) throw Error("word_distance: origin outside the common window");
  const std::int64_t reach = std::min(origin - lo, hi - origin);
  for (std::int64_t r = 0; r <= reach; ++r) {
    if (a.at(origin - r) != b.at(origin - r) || a.at(origin + r) != b.at(origin + r)) {
      return std::ldexp(1.0, -static_cast<int>(r));
    }
  }
  return std::ldexp(1.0, -static_cast<int>(reach + 1));
}

double bowen_distance(const SubshiftWindow& a, const SubshiftWindow& b, std::int64_t alpha, std::int64_t n) {
  double d = 0.0;
  for (std::int64_t k = 0; k <= n; ++k) d = std::max(d, word_distance(a, b, alpha + k));
  return d;
}

ToyReport toy_verify(const std::vector<std::pair<SubshiftWindow, SubshiftWindow>>& pairs,
                     const std::vector<std::int64_t>& markers, const BlockMaps& G, const ToySetup& setup) {
  ToyReport rep;
  const std::int64_t half = std::min(-setup.window.lo, setup.window.hi);
  if (half < 0) throw Error("toy_verify: window must contain 0");
  const double delta = setup.delta > 0.0 ? setup.delta : std::ldexp(1.0, -static_cast<int>(half));
  std::pair<std::int64_t, std::int64_t> home{0, 0};
  for (const auto& tile : discrete_tiles(markers, setup.span)) {
    if (tile.first <= 0 && 0 < tile.first + tile.second) home = tile;
  }
  auto note = [&rep](const std::string& s) {
    if (rep.witnesses.size() < 32) rep.witnesses.push_back(s);
  };
  for (const auto& [x, xp] : pairs) {
    ++rep.pairs;
    const DiscreteSignal g = toy_encode(x, markers, G, setup.window, setup.span);
    const DiscreteSignal gp = toy_encode(xp, markers, G, setup.window, setup.span);
    double gap = 0.0;
    for (std::int64_t t = setup.window.lo; t <= setup.window.hi; ++t) {
      gap = std::max(gap, std::abs(g.at(t) - gp.at(t)));
      if (std::abs(g.at(t) - static_cast<double>(x.at(t))) >= G.delta) {
        ++rep.tube_failures;
        note("tube left at " + std::to_string(t));
        break;
      }
    }
    if (gap > setup.eta) continue;
    ++rep.equal_images;
    const double d = word_distance(x, xp, 0);
    if (d >= delta) {
      ++rep.violations;
      note("equal images at distance " + std::to_string(d));
    }
    const double dn = bowen_distance(x, xp, home.first, home.second - 1);
    if (!(d <= dn && dn < setup.eps)) {
      ++rep.key_step_failures;
      note("key step fails: d = " + std::to_string(d) + ", d_n = " + std::to_string(dn));
    }
  }
  return rep;
}

}  // namespace bandembed
