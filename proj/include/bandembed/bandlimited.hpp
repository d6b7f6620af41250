#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bandembed/common.hpp"
#include "bandembed/interpolation.hpp"

namespace bandembed {

/// Frequency band [lo, hi] in cycles per unit time.
struct Band {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double carrier() const { return 0.5 * (lo + hi); }
  [[nodiscard]] double width() const { return hi - lo; }
  void validate() const {
    if (!(lo < hi)) throw Error("band: need lo < hi");
  }
};

/// K(t) = 1. With a carrier f the component is a pure tone e^{2 pi i f t}.
struct ToneKernel {};

/// K(t) = sin(pi w t) / (pi w t); spectrum [-w/2, w/2].
struct SincKernel {
  double width = 1.0;
};

/// K = inverse Fourier transform of the unit bump on [-tau/2, tau/2].
struct BumpKernel {
  double tau = 1.0;
};

/// Per-node interpolation kernels phi_{-lambda + Lambda}(t - lambda) over the
/// nodes of a multiset; node k of the signal must be node k of Lambda.
class LambdaFamily {
 public:
  explicit LambdaFamily(NodeMultiset lambda);
  [[nodiscard]] const NodeMultiset& multiset() const { return lambda_; }
  [[nodiscard]] std::size_t size() const { return kernels_.size(); }
  [[nodiscard]] std::vector<double> nodes() const;
  /// phi for node k at local coordinate t (relative to the node), no carrier.
  [[nodiscard]] cplx value(std::size_t k, double local_t) const;
  [[nodiscard]] double half_band() const;

 private:
  NodeMultiset lambda_;
  std::vector<InterpolationKernel> kernels_;
};

struct LambdaKernel {
  std::shared_ptr<const LambdaFamily> family;
};

using Kernel = std::variant<ToneKernel, SincKernel, BumpKernel, LambdaKernel>;

/// Half-width of the kernel's spectrum around 0.
double kernel_half_band(const Kernel& kernel);

/// s(t) = sum_k c_k K_k(t - lambda_k) e^{2 pi i carrier (t - lambda_k)},
/// or its real part when `real_part` is set.
struct BandSignal {
  std::vector<double> nodes;
  std::vector<cplx> coeffs;
  Kernel kernel = ToneKernel{};
  double carrier = 0.0;
  bool real_part = false;

  void validate() const;
};

/// Smallest interval containing the spectrum of the signal.
Interval spectrum_hull(const BandSignal& s);

cplx eval(const BandSignal& s, double t);

/// Discrete samples values[i] = s((offset + i) * step).
struct SampleTrack {
  double step = 1.0;
  std::int64_t offset = 0;
  std::vector<cplx> values;

  [[nodiscard]] IntRange window() const {
    return {offset, offset + static_cast<std::int64_t>(values.size()) - 1};
  }
};

SampleTrack sample(const BandSignal& s, double step, IntRange window);

/// Weighted local sup distance sum_{n=1}^{depth} 2^{-n} sup_{[-n,n]} |s1 - s2|
/// with the sup taken over the grid k * grid_step.
double metric_d(const BandSignal& s1, const BandSignal& s2, int depth = 40, double grid_step = 1.0 / 64.0);

/// sup |s| over the grid k * grid_step in [-half_window, half_window].
double grid_sup(const BandSignal& s, double half_window = 64.0, double grid_step = 1.0 / 64.0);

/// Grid certificate for membership in the unit ball.
bool in_unit_ball(const BandSignal& s, double tol = 1e-12, double half_window = 64.0,
                  double grid_step = 1.0 / 64.0);

/// phi -> (phi + conj(phi)) / 2.
BandSignal realify(const BandSignal& s);

struct BandCheckConfig {
  double half_window = 64.0;       ///< quadrature over [-T, T] with a smooth taper
  std::size_t nodes_per_period = 8;  ///< lower bound; the rule uses 16-point panels
  double min_resolution = 8.0;     ///< required (probe gap) * T
};

struct ProbeLeakage {
  double frequency = 0.0;
  double leakage = 0.0;
  bool pass = false;
};

struct BandCheckReport {
  std::vector<ProbeLeakage> probes;
  bool pass = false;
  std::string diagnostic;  ///< nonempty when the check could not be trusted
};

/// Estimates |F(s w)(xi)| / int w at probe frequencies outside the band,
/// where w is a bump taper on [-T, T].
BandCheckReport band_check(const BandSignal& s, const Band& band, const std::vector<double>& probe_freqs,
                           double tol = 1e-3, const BandCheckConfig& config = {});

struct StressConfig {
  int nodes_per_signal = 6;
  double node_span = 8.0;       ///< sinc centres uniform in [-span, span]
  double half_window = 64.0;    ///< comparison window
  double grid_step = 1.0 / 64.0;
  double zero_tol = 1e-12;      ///< sampled gap at or below this counts as zero
  double signal_tol = 1e-9;     ///< continuous gap above this counts as nonzero
};

struct StressReport {
  int trials = 0;
  int violations = 0;
  double min_ratio = INFINITY;  ///< min sampled gap / continuous gap
  bool hypothesis_holds = false;  ///< c < N/2
  /// Filled when c >= N/2: sin(pi N t) vanishes on (1/N)Z but not on the line.
  std::optional<double> nyquist_continuous_gap;
  std::optional<double> nyquist_sampled_gap;
};

/// Monte-Carlo check that sampling at step 1/N separates real signals band
/// limited in [-c, c].
StressReport sampling_injectivity_stress(double c, std::int64_t n, int trials, std::uint64_t seed,
                                         const StressConfig& config = {});

/// sin(2 pi f t) as a realified tone.
BandSignal sine_tone(double frequency);
/// e^{2 pi i f t}.
BandSignal complex_tone(double frequency, cplx amplitude = {1.0, 0.0});

}  // namespace bandembed
