#include "bandembed/bandlimited.hpp"

#include <algorithm>
#include <cmath>

#include "bandembed/quadrature.hpp"
#include "bandembed/rng.hpp"

namespace bandembed {

LambdaFamily::LambdaFamily(NodeMultiset lambda) : lambda_(std::move(lambda)) {
  kernels_.reserve(lambda_.entries().size());
  for (const Node& e : lambda_.entries()) kernels_.emplace_back(lambda_, e.position, 0.0);
}

std::vector<double> LambdaFamily::nodes() const {
  std::vector<double> out;
  for (const Node& e : lambda_.entries()) out.push_back(e.position);
  return out;
}

cplx LambdaFamily::value(std::size_t k, double local_t) const {
  const InterpolationKernel& phi = kernels_.at(k);
  return phi(phi.center() + local_t);
}

double LambdaFamily::half_band() const {
  const GridParams& p = lambda_.params();
  return 0.5 * (p.rho.value() + p.tau);
}

double kernel_half_band(const Kernel& kernel) {
  struct Visitor {
    double operator()(const ToneKernel&) const { return 0.0; }
    double operator()(const SincKernel& k) const { return 0.5 * std::abs(k.width); }
    double operator()(const BumpKernel& k) const { return 0.5 * k.tau; }
    double operator()(const LambdaKernel& k) const { return k.family ? k.family->half_band() : 0.0; }
  };
  return std::visit(Visitor{}, kernel);
}

void BandSignal::validate() const {
  if (nodes.size() != coeffs.size()) throw Error("band signal: nodes and coeffs differ in length");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i - 1] < nodes[i])) throw Error("band signal: nodes must be strictly increasing");
  }
  if (const auto* lk = std::get_if<LambdaKernel>(&kernel)) {
    if (!lk->family) throw Error("band signal: empty interpolation kernel");
    if (lk->family->nodes() != nodes) throw Error("band signal: nodes must match the kernel multiset");
  }
  if (const auto* sk = std::get_if<SincKernel>(&kernel); sk && !(sk->width > 0.0)) {
    throw Error("band signal: sinc width must be positive");
  }
  if (const auto* bk = std::get_if<BumpKernel>(&kernel); bk && !(bk->tau > 0.0)) {
    throw Error("band signal: bump tau must be positive");
  }
}

Interval spectrum_hull(const BandSignal& s) {
  const double hb = kernel_half_band(s.kernel);
  Interval hull{s.carrier - hb, s.carrier + hb};
  if (s.real_part) {
    const double m = std::max(std::abs(hull.lo), std::abs(hull.hi));
    hull = {-m, m};
  }
  return hull;
}

namespace {

double sinc_pi(double x) {
  if (x == 0.0) return 1.0;
  return sin_pi(x) / (kPi * x);
}

}  // namespace

cplx eval(const BandSignal& s, double t) {
  cplx acc{0.0, 0.0};
  const auto* tone = std::get_if<ToneKernel>(&s.kernel);
  const auto* sinc = std::get_if<SincKernel>(&s.kernel);
  const auto* bump = std::get_if<BumpKernel>(&s.kernel);
  const auto* lam = std::get_if<LambdaKernel>(&s.kernel);
  std::shared_ptr<const WindowKernel> wk;
  if (bump) wk = window_kernel_for(bump->tau);
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    const cplx c = s.coeffs[k];
    if (c == cplx{0.0, 0.0}) continue;
    const double local = t - s.nodes[k];
    cplx kv;
    if (tone) {
      kv = 1.0;
    } else if (sinc) {
      kv = sinc_pi(sinc->width * local);
    } else if (bump) {
      kv = (*wk)(local);
    } else {
      kv = lam->family->value(k, local);
    }
    const cplx phase = (s.carrier == 0.0) ? cplx{1.0, 0.0} : unit_phase(s.carrier * local);
    acc += c * (kv * phase);
  }
  if (s.real_part) return {acc.real(), 0.0};
  return acc;
}

SampleTrack sample(const BandSignal& s, double step, IntRange window) {
  if (!(step > 0.0)) throw Error("sample: step must be positive");
  SampleTrack track;
  track.step = step;
  track.offset = window.lo;
  for (std::int64_t k = window.lo; k <= window.hi; ++k) {
    track.values.push_back(eval(s, static_cast<double>(k) * step));
  }
  return track;
}

double metric_d(const BandSignal& s1, const BandSignal& s2, int depth, double grid_step) {
  if (depth < 1) throw Error("metric_d: depth must be >= 1");
  if (!(grid_step > 0.0)) throw Error("metric_d: grid step must be positive");
  double running_sup = 0.0;
  double total = 0.0;
  std::int64_t k_done = -1;  // grid indices |k| <= k_done already scanned
  for (int n = 1; n <= depth; ++n) {
    const auto k_max = static_cast<std::int64_t>(std::floor(static_cast<double>(n) / grid_step));
    for (std::int64_t k = k_done + 1; k <= k_max; ++k) {
      const double t = static_cast<double>(k) * grid_step;
      running_sup = std::max(running_sup, std::abs(eval(s1, t) - eval(s2, t)));
      if (k != 0) running_sup = std::max(running_sup, std::abs(eval(s1, -t) - eval(s2, -t)));
    }
    k_done = std::max(k_done, k_max);
    total += std::ldexp(running_sup, -n);
  }
  return total;
}

double grid_sup(const BandSignal& s, double half_window, double grid_step) {
  const auto k_max = static_cast<std::int64_t>(std::floor(half_window / grid_step));
  double sup = 0.0;
  for (std::int64_t k = -k_max; k <= k_max; ++k) {
    sup = std::max(sup, std::abs(eval(s, static_cast<double>(k) * grid_step)));
  }
  return sup;
}

bool in_unit_ball(const BandSignal& s, double tol, double half_window, double grid_step) {
  return grid_sup(s, half_window, grid_step) <= 1.0 + tol;
}

BandSignal realify(const BandSignal& s) {
  BandSignal out = s;
  out.real_part = true;
  return out;
}

BandCheckReport band_check(const BandSignal& s, const Band& band, const std::vector<double>& probe_freqs,
                           double tol, const BandCheckConfig& config) {
  band.validate();
  BandCheckReport report;
  const double T = config.half_window;
  const Interval hull = spectrum_hull(s);
  const double signal_freq = std::max(std::abs(hull.lo), std::abs(hull.hi));
  double min_gap = INFINITY;
  for (double xi : probe_freqs) {
    if (xi >= band.lo && xi <= band.hi) throw Error("band_check: probe frequency inside the band");
    min_gap = std::min(min_gap, xi < band.lo ? band.lo - xi : xi - band.hi);
  }
  if (!probe_freqs.empty() && min_gap * T < config.min_resolution) {
    report.diagnostic = "quadrature window too short: probe gap * half_window below resolution";
  }

  const GaussRule base = gauss_legendre(16);
  // Taper w(t) = exp(-1/(1-(t/T)^2)), mass computed on the same rule.
  double max_probe = 0.0;
  for (double xi : probe_freqs) max_probe = std::max(max_probe, std::abs(xi));
  const double freq = max_probe + signal_freq + 1.0;
  const std::size_t per_panel = base.nodes.size();
  const auto panels = static_cast<std::size_t>(
      std::ceil(2.0 * T * freq * static_cast<double>(config.nodes_per_period) / static_cast<double>(per_panel))) + 1;
  const GaussRule rule = composite_rule(base, -T, T, std::max<std::size_t>(panels, 64));

  std::vector<cplx> weighted(rule.nodes.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i] / T;
    const double taper = (std::abs(u) < 1.0) ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
    mass += rule.weights[i] * taper;
    weighted[i] = (taper == 0.0) ? cplx{0.0, 0.0} : rule.weights[i] * taper * eval(s, rule.nodes[i]);
  }

  // Edge diagnostic: a signal that is still large where the taper is already
  // negligible is under-resolved by the window.
  report.pass = report.diagnostic.empty();
  for (double xi : probe_freqs) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      if (weighted[i] == cplx{0.0, 0.0}) continue;
      acc += weighted[i] * unit_phase(-xi * rule.nodes[i]);
    }
    ProbeLeakage probe{xi, std::abs(acc) / mass, false};
    probe.pass = probe.leakage <= tol;
    report.pass = report.pass && probe.pass;
    report.probes.push_back(probe);
  }
  return report;
}

BandSignal complex_tone(double frequency, cplx amplitude) {
  BandSignal s;
  s.nodes = {0.0};
  s.coeffs = {amplitude};
  s.kernel = ToneKernel{};
  s.carrier = frequency;
  return s;
}

BandSignal sine_tone(double frequency) {
  // Re(-i e^{2 pi i f t}) = sin(2 pi f t).
  return realify(complex_tone(frequency, cplx{0.0, -1.0}));
}

namespace {

BandSignal random_real_sinc_signal(double c, const StressConfig& config, Rng& rng) {
  std::vector<std::pair<double, double>> terms;
  for (int j = 0; j < config.nodes_per_signal; ++j) {
    terms.emplace_back(rng.uniform(-config.node_span, config.node_span), rng.uniform(-1.0, 1.0));
  }
  std::sort(terms.begin(), terms.end());
  BandSignal s;
  s.kernel = SincKernel{2.0 * c};
  for (const auto& [t, a] : terms) {
    if (!s.nodes.empty() && s.nodes.back() == t) continue;
    s.nodes.push_back(t);
    s.coeffs.emplace_back(a, 0.0);
  }
  return s;
}

// s1 - s2 as a single signal (same kernel, merged nodes).
BandSignal difference(const BandSignal& s1, const BandSignal& s2) {
  std::vector<std::pair<double, cplx>> terms;
  for (std::size_t i = 0; i < s1.nodes.size(); ++i) terms.emplace_back(s1.nodes[i], s1.coeffs[i]);
  for (std::size_t i = 0; i < s2.nodes.size(); ++i) terms.emplace_back(s2.nodes[i], -s2.coeffs[i]);
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  BandSignal d;
  d.kernel = s1.kernel;
  d.carrier = s1.carrier;
  d.real_part = s1.real_part;
  for (const auto& [t, c] : terms) {
    if (!d.nodes.empty() && d.nodes.back() == t) {
      d.coeffs.back() += c;
    } else {
      d.nodes.push_back(t);
      d.coeffs.push_back(c);
    }
  }
  return d;
}

double sampled_sup(const BandSignal& s, double step, double half_window) {
  const auto k_max = static_cast<std::int64_t>(std::floor(half_window / step));
  double sup = 0.0;
  for (const cplx& v : sample(s, step, {-k_max, k_max}).values) sup = std::max(sup, std::abs(v));
  return sup;
}

}  // namespace

StressReport sampling_injectivity_stress(double c, std::int64_t n, int trials, std::uint64_t seed,
                                         const StressConfig& config) {
  if (!(c > 0.0) || n < 1) throw Error("sampling stress: need c > 0 and N >= 1");
  StressReport report;
  report.hypothesis_holds = c < 0.5 * static_cast<double>(n);
  const double step = 1.0 / static_cast<double>(n);
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    BandSignal diff;
    double continuous = 0.0;
    do {
      const BandSignal s1 = random_real_sinc_signal(c, config, rng);
      const BandSignal s2 = random_real_sinc_signal(c, config, rng);
      diff = difference(s1, s2);
      continuous = grid_sup(diff, config.half_window, config.grid_step);
    } while (continuous <= config.signal_tol);
    const double sampled = sampled_sup(diff, step, config.half_window);
    report.min_ratio = std::min(report.min_ratio, sampled / continuous);
    if (sampled <= config.zero_tol) ++report.violations;
    ++report.trials;
  }
  if (!report.hypothesis_holds) {
    // sin(pi N t) has spectrum {-N/2, N/2} inside [-c, c] and vanishes on (1/N)Z.
    const BandSignal witness = sine_tone(0.5 * static_cast<double>(n));
    report.nyquist_continuous_gap = grid_sup(witness, config.half_window, config.grid_step);
    report.nyquist_sampled_gap = sampled_sup(witness, step, config.half_window);
    if (*report.nyquist_sampled_gap <= config.zero_tol && *report.nyquist_continuous_gap > config.signal_tol) {
      ++report.violations;
    }
  }
  return report;
}

}  // namespace bandembed
