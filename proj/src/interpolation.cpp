#include "bandembed/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace bandembed {

// ---------------------------------------------------------------------------
// GridParams / NodeMultiset

std::int64_t GridParams::block_capacity() const {
  const std::int64_t scaled = l * rho.num();
  return scaled / rho.den();
}

void GridParams::validate() const {
  if (l <= 0) throw Error("grid params: l must be positive");
  if (rho.num() <= 0) throw Error("grid params: rho must be positive");
  if ((l * rho.num()) % rho.den() != 0) throw Error("grid params: l * rho must be an integer");
  if (!(tau > 0.0)) throw Error("grid params: tau must be positive");
}

NodeMultiset::NodeMultiset(GridParams params, IntRange window, std::vector<Node> entries)
    : params_(params), window_(window) {
  params_.validate();
  std::sort(entries.begin(), entries.end(),
            [](const Node& a, const Node& b) { return a.position < b.position; });
  for (const Node& e : entries) {
    if (e.multiplicity <= 0) throw Error("node multiset: multiplicity must be positive");
    if (!std::isfinite(e.position)) throw Error("node multiset: non-finite position");
    const std::int64_t n = block_of(e.position);
    if (!window_.contains(n)) {
      std::ostringstream msg;
      msg << "node multiset: position " << e.position << " outside window blocks [" << window_.lo
          << ", " << window_.hi << "]";
      throw Error(msg.str());
    }
    if (!entries_.empty() && entries_.back().position == e.position) {
      entries_.back().multiplicity += e.multiplicity;
    } else {
      entries_.push_back(e);
    }
  }
}

std::int64_t NodeMultiset::block_of(double position) const {
  return static_cast<std::int64_t>(std::floor(position / static_cast<double>(params_.l)));
}

std::pair<std::size_t, std::size_t> NodeMultiset::block_span(std::int64_t n) const {
  const double lo = static_cast<double>(n * params_.l);
  const double hi = static_cast<double>((n + 1) * params_.l);
  auto first = std::lower_bound(entries_.begin(), entries_.end(), lo,
                                [](const Node& e, double v) { return e.position < v; });
  auto last = std::lower_bound(first, entries_.end(), hi,
                               [](const Node& e, double v) { return e.position < v; });
  return {static_cast<std::size_t>(first - entries_.begin()),
          static_cast<std::size_t>(last - entries_.begin())};
}

std::vector<Node> NodeMultiset::block(std::int64_t n) const {
  const auto [first, last] = block_span(n);
  return {entries_.begin() + static_cast<std::ptrdiff_t>(first),
          entries_.begin() + static_cast<std::ptrdiff_t>(last)};
}

std::int64_t NodeMultiset::block_count(std::int64_t n) const {
  const auto [first, last] = block_span(n);
  std::int64_t count = 0;
  for (std::size_t i = first; i < last; ++i) count += entries_[i].multiplicity;
  return count;
}

std::int64_t NodeMultiset::total_count() const {
  std::int64_t count = 0;
  for (const Node& e : entries_) count += e.multiplicity;
  return count;
}

bool NodeMultiset::contains(double position) const {
  return std::binary_search(entries_.begin(), entries_.end(), Node{position, 1},
                            [](const Node& a, const Node& b) { return a.position < b.position; });
}

NodeMultiset NodeMultiset::translated(double offset) const {
  std::vector<Node> moved;
  moved.reserve(entries_.size());
  std::int64_t extent = 0;
  const double l = static_cast<double>(params_.l);
  for (const Node& e : entries_) {
    const double p = e.position + offset;
    moved.push_back({p, e.multiplicity});
    const auto n = static_cast<std::int64_t>(std::floor(p / l));
    extent = std::max(extent, std::max(n, -n));
  }
  return {params_, IntRange{-extent, extent}, std::move(moved)};
}

NodeMultiset NodeMultiset::restricted(double radius) const {
  std::vector<Node> kept;
  for (const Node& e : entries_) {
    if (std::abs(e.position) <= radius) kept.push_back(e);
  }
  return {params_, window_, std::move(kept)};
}

// ---------------------------------------------------------------------------
// Conditions and saturation

ConditionReport check_conditions(const NodeMultiset& lambda, IntRange window) {
  if (window.empty()) throw Error("check_conditions: empty window");
  ConditionReport report;
  report.window = window;
  const GridParams& p = lambda.params();
  const double l = static_cast<double>(p.l);
  const double lo = static_cast<double>(window.lo) * l;
  const double hi = static_cast<double>(window.hi + 1) * l;
  double min_abs = INFINITY;
  for (const Node& e : lambda.entries()) {
    if (e.position < lo || e.position >= hi || e.position == 0.0) continue;
    min_abs = std::min(min_abs, std::abs(e.position));
  }
  report.min_nonzero_abs = min_abs;
  report.c1 = min_abs >= p.spacing() - kSpacingSlack;
  report.c2 = true;
  report.c3 = true;
  const std::int64_t cap = p.block_capacity();
  for (std::int64_t n = window.lo; n <= window.hi; ++n) {
    const std::int64_t count = lambda.block_count(n);
    if (count > cap && report.c2) {
      report.c2 = false;
      report.c2_violation = n;
    }
    if (n != 0 && count != cap && report.c3) {
      report.c3 = false;
      report.c3_violation = n;
    }
  }
  return report;
}

SaturationError::SaturationError(std::int64_t block, std::int64_t count)
    : Error("saturate: block " + std::to_string(block) + " holds " + std::to_string(count) +
            " nodes, more than l*rho"),
      block_(block),
      count_(count) {}

NodeMultiset saturate(const NodeMultiset& lambda) {
  const GridParams& p = lambda.params();
  const std::int64_t cap = p.block_capacity();
  std::vector<Node> out = lambda.entries();
  for (std::int64_t n = lambda.window().lo; n <= lambda.window().hi; ++n) {
    const std::int64_t count = lambda.block_count(n);
    if (count > cap) throw SaturationError(n, count);
    if (n != 0 && count < cap) out.push_back({static_cast<double>(n * p.l), cap - count});
  }
  return {p, lambda.window(), std::move(out)};
}

// ---------------------------------------------------------------------------
// Products

namespace {

// Flattened factors of a saturated multiset over blocks |n| <= radius,
// excluding the origin. Block 0 first, then blocks n, -n for n = 1..radius.
void collect_factors(const NodeMultiset& sat, std::int64_t radius, std::vector<double>& block0,
                     std::vector<double>& paired) {
  auto push_block = [&](std::int64_t n, std::vector<double>& into) {
    for (const Node& e : sat.block(n)) {
      if (e.position == 0.0) continue;
      for (std::int64_t k = 0; k < e.multiplicity; ++k) into.push_back(e.position);
    }
  };
  push_block(0, block0);
  for (std::int64_t n = 1; n <= radius; ++n) {
    push_block(n, paired);
    push_block(-n, paired);
  }
}

cplx product_of(const std::vector<double>& nodes, cplx z) {
  cplx acc{1.0, 0.0};
  for (double lambda : nodes) acc *= (1.0 - z / lambda);
  return acc;
}

void require_saturated(const NodeMultiset& sat, std::int64_t radius) {
  if (radius < 0) throw Error("weierstrass_product: negative block radius");
  if (!sat.window().contains(-radius) || !sat.window().contains(radius)) {
    throw Error("weierstrass_product: block radius exceeds the multiset window");
  }
  const std::int64_t cap = sat.params().block_capacity();
  for (std::int64_t n = -radius; n <= radius; ++n) {
    if (n != 0 && sat.block_count(n) != cap) {
      throw Error("weierstrass_product: block " + std::to_string(n) + " is not saturated");
    }
  }
}

// Bernoulli numbers B_2, B_4, ..., B_14.
constexpr std::array<double, 7> kBernoulli = {1.0 / 6.0,    -1.0 / 30.0, 1.0 / 42.0,   -1.0 / 30.0,
                                              5.0 / 66.0,   -691.0 / 2730.0, 7.0 / 6.0};

// sum_{n >= n0} (n0 / n)^s by Euler-Maclaurin, s >= 2.
double scaled_zeta_tail(double s, double n0) {
  double sum = n0 / (s - 1.0) + 0.5;
  double rising = s;  // (s)_{2j-1}
  double factorial = 2.0;  // (2j)!
  double power = 1.0;  // n0^{1-2j}
  for (std::size_t j = 1; j <= kBernoulli.size(); ++j) {
    if (j > 1) {
      const double m = static_cast<double>(2 * j - 1);
      rising *= (s + m - 2.0) * (s + m - 1.0);
      factorial *= (2.0 * j - 1.0) * (2.0 * j);
      power /= n0 * n0;
    } else {
      power = 1.0 / n0;
    }
    const double term = kBernoulli[j - 1] / factorial * rising * power;
    sum += term;
    if (std::abs(term) < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

cplx lattice_tail(const GridParams& params, cplx z, std::int64_t first_block) {
  if (first_block < 1) throw Error("lattice_tail: first block must be >= 1");
  const std::int64_t cap = params.block_capacity();
  const cplx w = z / static_cast<double>(params.l);
  const cplx w2 = w * w;
  const auto n0 = std::max<std::int64_t>(
      {first_block, 64, static_cast<std::int64_t>(std::ceil(4.0 * std::abs(w))) + 1});
  cplx direct{1.0, 0.0};
  for (std::int64_t n = first_block; n < n0; ++n) {
    const double nd = static_cast<double>(n);
    direct *= (1.0 - w2 / (nd * nd));
  }
  // sum_{n >= n0} log(1 - w^2/n^2) = -sum_k u^{2k} Z_k / k with u = w/n0.
  const double n0d = static_cast<double>(n0);
  const cplx u2 = w2 / (n0d * n0d);
  cplx log_sum{0.0, 0.0};
  cplx u2k = u2;
  for (int k = 1; k <= 200; ++k) {
    const cplx term = u2k * scaled_zeta_tail(2.0 * k, n0d) / static_cast<double>(k);
    log_sum -= term;
    if (std::abs(term) < 1e-19 * (1.0 + std::abs(log_sum))) break;
    u2k *= u2;
  }
  cplx powered{1.0, 0.0};
  for (std::int64_t i = 0; i < cap; ++i) powered *= direct;
  return powered * std::exp(static_cast<double>(cap) * log_sum);
}

cplx weierstrass_product(const NodeMultiset& saturated, cplx z, std::int64_t block_radius, Tail tail) {
  require_saturated(saturated, block_radius);
  std::vector<double> block0;
  std::vector<double> paired;
  collect_factors(saturated, block_radius, block0, paired);
  cplx value = product_of(block0, z) * product_of(paired, z);
  if (tail == Tail::kLattice) value *= lattice_tail(saturated.params(), z, block_radius + 1);
  return value;
}

// ---------------------------------------------------------------------------
// Window kernel

namespace {

constexpr std::size_t kGaussNodes = 16;
constexpr std::size_t kMinPanels = 4;
constexpr std::size_t kMaxTierPanels = 4096;

}  // namespace

WindowKernel::WindowKernel(double tau) : tau_(tau), base_(gauss_legendre(kGaussNodes)) {
  if (!(tau > 0.0)) throw Error("window kernel: tau must be positive");
  for (std::size_t panels = kMinPanels; panels <= kMaxTierPanels; panels *= 2) {
    tiers_.push_back(make_tier(panels));
  }
}

WindowKernel::Tier WindowKernel::make_tier(std::size_t panels) const {
  // The bump is even, so integrate over [0, tau/2] only.
  const GaussRule rule = composite_rule(base_, 0.0, 0.5 * tau_, panels);
  Tier tier;
  tier.panels = panels;
  tier.xi = rule.nodes;
  tier.weight.resize(rule.nodes.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = 2.0 * rule.nodes[i] / tau_;
    const double psi = (std::abs(u) < 1.0) ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
    tier.weight[i] = rule.weights[i] * psi;
    mass += tier.weight[i];
  }
  for (double& w : tier.weight) w /= mass;
  return tier;
}

const WindowKernel::Tier* WindowKernel::tier_for(double abs_t, Tier& scratch) const {
  // Periods of cos(2 pi t xi) over [0, tau/2]: |t| tau / 2; one panel each.
  const double periods = 0.5 * abs_t * tau_;
  for (const Tier& tier : tiers_) {
    if (static_cast<double>(tier.panels) >= periods) return &tier;
  }
  scratch = make_tier(static_cast<std::size_t>(std::ceil(periods)));
  return &scratch;
}

double WindowKernel::operator()(double t) const {
  Tier scratch;
  const Tier* tier = tier_for(std::abs(t), scratch);
  double acc = 0.0;
  const double omega = kTwoPi * t;
  for (std::size_t i = 0; i < tier->xi.size(); ++i) acc += tier->weight[i] * std::cos(omega * tier->xi[i]);
  return acc;
}

cplx WindowKernel::operator()(cplx z) const {
  if (z.imag() == 0.0) return {(*this)(z.real()), 0.0};
  Tier scratch;
  const Tier* tier = tier_for(std::abs(z.real()), scratch);
  cplx acc{0.0, 0.0};
  const cplx omega = kTwoPi * z;
  for (std::size_t i = 0; i < tier->xi.size(); ++i) acc += tier->weight[i] * std::cos(omega * tier->xi[i]);
  return acc;
}

std::shared_ptr<const WindowKernel> window_kernel_for(double tau) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const WindowKernel>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[tau];
  if (!slot) slot = std::make_shared<const WindowKernel>(tau);
  return slot;
}

double window_kernel(const GridParams& params, double t) { return (*window_kernel_for(params.tau))(t); }

// ---------------------------------------------------------------------------
// Interpolation kernel

InterpolationKernel::InterpolationKernel(const NodeMultiset& lambda, double center, double carrier,
                                         std::optional<std::int64_t> block_radius)
    : params_(lambda.params()), center_(center), carrier_(carrier), window_(window_kernel_for(lambda.params().tau)) {
  NodeMultiset local = lambda.translated(-center);
  if (block_radius) {
    if (*block_radius < 0) throw Error("interpolation kernel: negative block radius");
    const double l = static_cast<double>(params_.l);
    std::vector<Node> kept;
    for (const Node& e : local.entries()) {
      const auto n = static_cast<std::int64_t>(std::floor(e.position / l));
      if (std::abs(n) <= *block_radius) kept.push_back(e);
    }
    local = NodeMultiset(params_, IntRange{-*block_radius, *block_radius}, std::move(kept));
  }
  radius_ = local.window().hi;
  const NodeMultiset sat = saturate(local);
  collect_factors(sat, radius_, block0_, paired_);
}

cplx InterpolationKernel::product(cplx local_z) const {
  return product_of(block0_, local_z) * product_of(paired_, local_z) *
         lattice_tail(params_, local_z, radius_ + 1);
}

cplx InterpolationKernel::operator()(cplx z) const {
  const cplx local = z - center_;
  const cplx f = product(local);
  if (f == cplx{0.0, 0.0}) return f;
  cplx phase;
  if (local.imag() == 0.0) {
    phase = unit_phase(carrier_ * local.real());
  } else {
    phase = std::exp(cplx{0.0, kTwoPi * carrier_} * local);
  }
  return phase * (*window_)(local) * f;
}

double InterpolationKernel::half_band() const { return 0.5 * (params_.rho.value() + params_.tau); }

cplx phi_lambda(const NodeMultiset& lambda, cplx z, std::optional<std::int64_t> block_radius,
                double carrier, double center) {
  return InterpolationKernel(lambda, center, carrier, block_radius)(z);
}

// ---------------------------------------------------------------------------
// Random families and empirical constants

namespace {

// Walk outward from `start` (exclusive side given by sign) with gaps in
// [spacing, 3 spacing) until |position| leaves the span.
void walk(std::vector<Node>& out, double start, double sign, double limit, double spacing, Rng& rng) {
  double t = start;
  while (true) {
    const double p = sign * t;
    if (p < -limit || p >= limit) break;
    out.push_back({p, 1});
    t += spacing + rng.uniform(0.0, 2.0 * spacing);
  }
}

}  // namespace

NodeMultiset random_admissible(const GridParams& params, std::int64_t window_blocks, Rng& rng,
                               bool keep_origin) {
  params.validate();
  const double sp = params.spacing();
  const double l = static_cast<double>(params.l);
  std::vector<Node> nodes;
  if (keep_origin) nodes.push_back({0.0, 1});
  walk(nodes, sp + rng.uniform(0.0, 2.0 * sp), 1.0, static_cast<double>(window_blocks + 1) * l, sp, rng);
  walk(nodes, sp + rng.uniform(0.0, 2.0 * sp), -1.0, static_cast<double>(window_blocks) * l, sp, rng);
  return {params, IntRange{-window_blocks, window_blocks}, std::move(nodes)};
}

NodeMultiset resample_outside(const NodeMultiset& lambda, double radius, Rng& rng) {
  const GridParams& params = lambda.params();
  const double sp = params.spacing();
  const double l = static_cast<double>(params.l);
  std::vector<Node> nodes;
  // Largest kept |position| on each side; 0 stands for "none kept", which
  // still forces the first new node to respect the 1/rho origin gap.
  double right = 0.0;
  double left = 0.0;
  for (const Node& e : lambda.entries()) {
    if (std::abs(e.position) <= radius) {
      nodes.push_back(e);
      if (e.position > 0.0) right = std::max(right, e.position);
      if (e.position < 0.0) left = std::max(left, -e.position);
    }
  }
  auto first_beyond = [&](double kept) {
    const double t = std::max(kept + sp, radius) + rng.uniform(0.0, 2.0 * sp);
    return t > radius ? t : std::nextafter(radius, INFINITY);
  };
  walk(nodes, first_beyond(right), 1.0, static_cast<double>(lambda.window().hi + 1) * l, sp, rng);
  walk(nodes, first_beyond(left), -1.0, -static_cast<double>(lambda.window().lo) * l, sp, rng);
  return {params, lambda.window(), std::move(nodes)};
}

cplx tail_factor(const NodeMultiset& saturated, cplx z, double radius) {
  const IntRange win = saturated.window();
  const std::int64_t extent = std::min(-win.lo, win.hi);
  require_saturated(saturated, extent);
  cplx acc{1.0, 0.0};
  for (const Node& e : saturated.entries()) {
    const auto n = saturated.block_of(e.position);
    if (std::abs(n) > extent || e.position == 0.0 || std::abs(e.position) <= radius) continue;
    const cplx f = 1.0 - z / e.position;
    for (std::int64_t k = 0; k < e.multiplicity; ++k) acc *= f;
  }
  const double l = static_cast<double>(saturated.params().l);
  const auto first = std::max<std::int64_t>(extent + 1, static_cast<std::int64_t>(std::floor(radius / l)) + 1);
  return acc * lattice_tail(saturated.params(), z, first);
}

namespace {

std::vector<cplx> disk_points(double r, int radii, int angles) {
  std::vector<cplx> pts{cplx{0.0, 0.0}};
  if (!(r > 0.0)) return pts;
  for (int i = 1; i <= radii; ++i) {
    const double rad = r * static_cast<double>(i) / static_cast<double>(radii);
    for (int j = 0; j < angles; ++j) {
      pts.push_back(std::polar(rad, kTwoPi * static_cast<double>(j) / static_cast<double>(angles)));
    }
  }
  return pts;
}

std::vector<double> line_points(double r, int count) {
  std::vector<double> pts;
  if (!(r > 0.0) || count < 2) return {0.0};
  for (int i = 0; i < count; ++i) pts.push_back(-r + 2.0 * r * static_cast<double>(i) / (count - 1));
  return pts;
}

}  // namespace

RadiusCertificate truncation_radius(double r, double eps, const GridParams& params, const RadiusSearch& search) {
  if (r < 0.0 || !(eps > 0.0)) throw Error("truncation_radius: need r >= 0 and eps > 0");
  Rng rng(search.seed);
  std::vector<NodeMultiset> family;
  family.reserve(static_cast<std::size_t>(search.family_size));
  for (int i = 0; i < search.family_size; ++i) {
    family.push_back(saturate(random_admissible(params, search.window_blocks, rng)));
  }
  const std::vector<cplx> pts = disk_points(r, search.disk_radii, search.disk_angles);
  RadiusCertificate cert;
  cert.family_size = search.family_size;
  for (int k = 0; k <= search.max_doublings; ++k) {
    const double b = std::ldexp(1.0, k);
    double worst = 0.0;
    for (const NodeMultiset& sat : family) {
      for (const cplx& z : pts) worst = std::max(worst, std::abs(1.0 - tail_factor(sat, z, b)));
      if (worst >= eps) break;
    }
    cert.radius = b;
    cert.worst_error = worst;
    if (worst < eps) {
      cert.certified = true;
      return cert;
    }
  }
  return cert;
}

double locality_gap(const NodeMultiset& a, const NodeMultiset& b, double radius, double r, int grid_points) {
  const NodeMultiset ia = a.restricted(radius);
  const NodeMultiset ib = b.restricted(radius);
  if (ia.entries() != ib.entries()) {
    throw Error("locality_gap: multisets differ inside the radius");
  }
  const InterpolationKernel ka(a, 0.0, 0.0);
  const InterpolationKernel kb(b, 0.0, 0.0);
  double gap = 0.0;
  for (double x : line_points(r, grid_points)) gap = std::max(gap, std::abs(ka(x) - kb(x)));
  return gap;
}

RadiusCertificate locality_radius(double r, double eps, const GridParams& params, const RadiusSearch& search) {
  if (r < 0.0 || !(eps > 0.0)) throw Error("locality_radius: need r >= 0 and eps > 0");
  Rng rng(search.seed);
  std::vector<NodeMultiset> family;
  for (int i = 0; i < search.family_size; ++i) {
    family.push_back(random_admissible(params, search.window_blocks, rng));
  }
  RadiusCertificate cert;
  cert.family_size = search.family_size;
  const double span = static_cast<double>((search.window_blocks + 1) * params.l);
  for (int k = 0; k <= search.max_doublings; ++k) {
    const double b = std::ldexp(1.0, k);
    Rng pair_rng(search.seed ^ (0x5bd1e995ULL * static_cast<std::uint64_t>(k + 1)));
    double worst = 0.0;
    for (const NodeMultiset& lam : family) {
      const NodeMultiset other = resample_outside(lam, b, pair_rng);
      worst = std::max(worst, locality_gap(lam, other, b, r));
      if (worst >= eps) break;
    }
    cert.radius = b;
    cert.worst_error = worst;
    if (worst < eps) {
      cert.certified = true;
      return cert;
    }
    if (b > span) break;
  }
  return cert;
}

DecayEstimate decay_constant(const GridParams& params, const std::vector<double>& probe_grid, std::uint64_t seed,
                             int family_size, std::int64_t window_blocks) {
  Rng rng(seed);
  DecayEstimate est;
  est.family_size = family_size;
  std::vector<NodeMultiset> family;
  for (int i = 0; i < family_size; ++i) family.push_back(random_admissible(params, window_blocks, rng));
  // Worst cases seen in searches: one gap next to the origin at the top of
  // the generator's range, tight spacing everywhere else.
  const double sp = params.spacing();
  const double wide = 3.0 * sp * (1.0 - 0x1.0p-20);
  const double l = static_cast<double>(params.l);
  for (const auto& [right, left] : {std::pair{wide, sp}, std::pair{sp, wide}, std::pair{wide, wide}}) {
    std::vector<Node> nodes{{0.0, 1}};
    for (double x = right; x < static_cast<double>(window_blocks + 1) * l; x += sp) nodes.push_back({x, 1});
    for (double x = -left; x >= -static_cast<double>(window_blocks) * l; x -= sp) nodes.push_back({x, 1});
    family.emplace_back(params, IntRange{-window_blocks, window_blocks}, std::move(nodes));
  }
  for (const NodeMultiset& lam : family) {
    const InterpolationKernel phi(lam, 0.0, 0.0);
    for (double x : probe_grid) {
      const double v = std::abs(phi(x)) * (1.0 + x * x);
      if (v > est.k_hat) {
        est.k_hat = v;
        est.argmax = x;
      }
    }
  }
  return est;
}

}  // namespace bandembed
