#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bandembed/bandlimited.hpp"
#include "bandembed/common.hpp"
#include "bandembed/tiling.hpp"

namespace bandembed {

/// x -> x + alpha on R/Z, started at x0.
struct Rotation {
  double alpha = 0.0;
  double x0 = 0.0;

  /// Fractional part of x0 + n alpha.
  [[nodiscard]] double orbit(std::int64_t n) const;
};

/// Some p/q with q <= max_den and |alpha - p/q| < tol, if any.
std::optional<std::pair<std::int64_t, std::int64_t>> near_rational(double alpha, std::int64_t max_den = 1000,
                                                                   double tol = 1e-12);

/// Values in [0,1]; `channels` values per index, row-major.
struct DiscreteSignal {
  IntRange window;
  std::size_t channels = 1;
  std::vector<double> values;

  [[nodiscard]] double at(std::int64_t n, std::size_t channel = 0) const {
    return values.at(static_cast<std::size_t>(n - window.lo) * channels + channel);
  }
};

/// ((1 + cos 2 pi (x0 + n alpha)) / 2)_n.
DiscreteSignal rotation_embed(const Rotation& r, IntRange window);

/// Trapezoid marker on the circle around 0: 1 on |u| <= half_width / 2,
/// 0 for |u| >= half_width, linear between.
struct MarkerFunction {
  double half_width = 0.0;
  std::int64_t L = 1;
  std::int64_t M = 2;  ///< largest observed gap between plateau visits

  [[nodiscard]] double operator()(double x) const;
};

/// Support of width below the least |k alpha| mod 1, 1 <= k <= L, so the
/// support misses its first L translates. M comes from the orbit of x0 over
/// [-sample_span, sample_span].
MarkerFunction marker_function(const Rotation& r, std::int64_t L, std::int64_t sample_span = 100000);

/// (n, h(T^n x)) for n in the window with h > 0.
MarkerSeq orbit_markers(const Rotation& r, const MarkerFunction& h, IntRange window);

enum class EncodeKernel { kBump, kInterpolation };

/// g(x)(t) = sum_k h(T^k x) K(t - k) e^{2 pi i c (t - k)}, c the band centre.
/// The bump kernel uses tau = b - a; the interpolation kernel uses the
/// multiset of window integers with rho = 1 and tau = b - a - 1.
BandSignal marker_encode(const Rotation& r, const MarkerFunction& h, const Band& band, IntRange window,
                         EncodeKernel kernel = EncodeKernel::kBump);

struct SubshiftWindow {
  IntRange window;
  std::vector<std::uint8_t> word;
  double slope = 0.0;
  double intercept = 0.0;
  bool degenerate = false;  ///< slope within 1e-12 of a rational with small denominator

  [[nodiscard]] std::uint8_t at(std::int64_t n) const { return word.at(static_cast<std::size_t>(n - window.lo)); }
  [[nodiscard]] bool covers(std::int64_t n) const { return window.contains(n); }
};

/// word[n] = floor((n + 1) slope + intercept) - floor(n slope + intercept).
SubshiftWindow sturmian_window(double slope, double intercept, IntRange window);

/// Factors of equal length differ in their number of ones by at most 1.
bool is_balanced(const std::vector<std::uint8_t>& word);

/// The same word seen from S x: window moved by -1.
SubshiftWindow shift_word(const SubshiftWindow& w, std::int64_t k);

/// Occurrences of a cylinder word whose consecutive occurrences are more
/// than N apart, found by exhaustive search over factors of the window.
struct CylinderMarkers {
  std::vector<std::uint8_t> cylinder;
  std::vector<std::int64_t> positions;
};

std::optional<CylinderMarkers> find_cylinder_markers(const SubshiftWindow& y, std::int64_t N,
                                                     std::size_t max_length = 64);

/// Occurrence positions n (cylinder starting at n) within the window.
std::vector<std::int64_t> cylinder_positions(const SubshiftWindow& y, const std::vector<std::uint8_t>& cylinder);

/// Block maps G_n on binary blocks of length n + 1.
struct BlockMaps {
  enum class Kind { kIdentity, kNoisy };
  Kind kind = Kind::kIdentity;
  double delta = 0.5;
  std::size_t max_length = 1 << 20;

  /// Value of G at position t of the block.
  [[nodiscard]] double value(const std::vector<std::uint8_t>& block, std::size_t t) const;
};

/// Discrete tiles: every integer joins its nearest marker, ties to the left.
/// Returns (start, length) per marker; outermost tiles stop at the window.
std::vector<std::pair<std::int64_t, std::int64_t>> discrete_tiles(const std::vector<std::int64_t>& markers,
                                                                  IntRange window);

/// g(x)(t) = G_{#I - 1}(T^alpha x)(t - alpha) on each tile I = [alpha, ...].
/// Tiles are formed over `span` (which must lie inside the word's window),
/// the result is reported on `window`.
DiscreteSignal toy_encode(const SubshiftWindow& x, const std::vector<std::int64_t>& markers, const BlockMaps& G,
                          IntRange window, IntRange span);

/// 2^{-min |k|} over mismatches on the common window; 2^{-(reach + 1)} when
/// none is seen, where reach bounds |k| inside the window.
double word_distance(const SubshiftWindow& a, const SubshiftWindow& b, std::int64_t origin = 0);

/// max_{0 <= k <= n} d(T^{alpha + k} a, T^{alpha + k} b).
double bowen_distance(const SubshiftWindow& a, const SubshiftWindow& b, std::int64_t alpha, std::int64_t n);

struct ToyReport {
  std::int64_t pairs = 0;
  std::int64_t equal_images = 0;   ///< pairs with sup |g - g'| <= eta
  std::int64_t violations = 0;     ///< equal images but d >= delta
  std::int64_t key_step_failures = 0;
  std::int64_t tube_failures = 0;  ///< |g - f| >= delta somewhere
  std::vector<std::string> witnesses;
};

struct ToySetup {
  IntRange window{-32, 32};  ///< where g is compared
  IntRange span{-96, 96};    ///< where tiles are formed
  double delta = 0.0;        ///< 0 means 2^{-(half window)}
  double eps = 1.0;
  double eta = 1e-12;
};

/// Checks the delta-embedding property on pairs sharing the marker set.
ToyReport toy_verify(const std::vector<std::pair<SubshiftWindow, SubshiftWindow>>& pairs,
                     const std::vector<std::int64_t>& markers, const BlockMaps& G, const ToySetup& setup);

}  // namespace bandembed
