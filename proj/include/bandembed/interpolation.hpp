#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "bandembed/common.hpp"
#include "bandembed/quadrature.hpp"
#include "bandembed/rng.hpp"

namespace bandembed {

/// Block length l, node density rho and window width tau of the
/// interpolation construction. l * rho must be a positive integer.
struct GridParams {
  std::int64_t l = 1;
  Rational rho{1};
  double tau = 0.5;

  /// l * rho, the number of nodes every nonzero block carries after saturation.
  [[nodiscard]] std::int64_t block_capacity() const;
  /// Minimal admissible distance 1/rho.
  [[nodiscard]] double spacing() const { return static_cast<double>(rho.den()) / static_cast<double>(rho.num()); }
  void validate() const;
  friend bool operator==(const GridParams&, const GridParams&) = default;
};

struct Node {
  double position = 0.0;
  std::int64_t multiplicity = 1;
  friend bool operator==(const Node&, const Node&) = default;
};

/// Finite multiset of reals. `window` is the range of block indices n for
/// which the blocks [n l, (n+1) l) are considered; every entry must lie in
/// one of them. Entries are sorted and positions are distinct.
class NodeMultiset {
 public:
  NodeMultiset(GridParams params, IntRange window, std::vector<Node> entries);

  [[nodiscard]] const GridParams& params() const { return params_; }
  [[nodiscard]] IntRange window() const { return window_; }
  [[nodiscard]] const std::vector<Node>& entries() const { return entries_; }

  [[nodiscard]] std::int64_t block_of(double position) const;
  /// Entries of the block [n l, (n+1) l).
  [[nodiscard]] std::vector<Node> block(std::int64_t n) const;
  /// #Lambda_n counted with multiplicity.
  [[nodiscard]] std::int64_t block_count(std::int64_t n) const;
  [[nodiscard]] std::int64_t total_count() const;
  [[nodiscard]] bool contains(double position) const;

  /// The multiset `offset + Lambda` re-windowed symmetrically around 0 so that
  /// all shifted entries are covered.
  [[nodiscard]] NodeMultiset translated(double offset) const;
  /// Entries with |position| <= radius, same window.
  [[nodiscard]] NodeMultiset restricted(double radius) const;

  friend bool operator==(const NodeMultiset&, const NodeMultiset&) = default;

 private:
  // [first, last) indices of entries inside block n.
  [[nodiscard]] std::pair<std::size_t, std::size_t> block_span(std::int64_t n) const;

  GridParams params_;
  IntRange window_;
  std::vector<Node> entries_;
};

struct ConditionReport {
  bool c1 = false;  ///< min |lambda| over nonzero lambda >= 1/rho
  bool c2 = false;  ///< #Lambda_n <= l rho on the window
  bool c3 = false;  ///< #Lambda_n == l rho for every nonzero n in the window
  IntRange window;
  double min_nonzero_abs = 0.0;
  std::optional<std::int64_t> c2_violation;
  std::optional<std::int64_t> c3_violation;
};

/// Slack used when comparing distances against 1/rho, absorbing the rounding
/// of positions built as k/rho.
inline constexpr double kSpacingSlack = 1e-12;

ConditionReport check_conditions(const NodeMultiset& lambda, IntRange window);

/// Raised by saturate() when a block holds more than l rho nodes.
class SaturationError : public Error {
 public:
  SaturationError(std::int64_t block, std::int64_t count);
  [[nodiscard]] std::int64_t block() const { return block_; }
  [[nodiscard]] std::int64_t count() const { return count_; }

 private:
  std::int64_t block_;
  std::int64_t count_;
};

/// Pads every nonzero block of the window up to l rho nodes by adding the
/// anchor n l with the missing multiplicity.
NodeMultiset saturate(const NodeMultiset& lambda);

/// Treatment of blocks beyond the block radius in weierstrass_product.
enum class Tail {
  kNone,     ///< plain paired partial product over |n| <= A
  kLattice,  ///< blocks |n| > A are empty before saturation, i.e. anchors n l
             ///< with multiplicity l rho; their product is summed analytically
};

/// prod over the saturated blocks |n| <= block_radius of (1 - z/lambda),
/// lambda != 0, taking blocks n and -n together. With Tail::kLattice the
/// product is completed by the anchor lattice beyond the radius, which makes
/// it the full limit for the multiset truncated to those blocks.
cplx weierstrass_product(const NodeMultiset& saturated, cplx z, std::int64_t block_radius,
                         Tail tail = Tail::kLattice);

/// prod_{n >= first_block} (1 - (z/l)^2 / n^2)^{l rho}, the contribution of
/// anchor pairs +-n l. Computed by a Hurwitz-zeta log series.
cplx lattice_tail(const GridParams& params, cplx z, std::int64_t first_block);

/// Inverse Fourier transform of the unit-mass bump
/// psi(xi) = c exp(-1 / (1 - (2 xi / tau)^2)) on (-tau/2, tau/2).
/// Composite Gauss quadrature with at least 16 nodes per oscillation.
class WindowKernel {
 public:
  explicit WindowKernel(double tau);

  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] cplx operator()(cplx z) const;

 private:
  struct Tier {
    std::size_t panels;
    std::vector<double> xi;
    std::vector<double> weight;  // quadrature weight * psi(xi), normalized
  };
  [[nodiscard]] Tier make_tier(std::size_t panels) const;
  [[nodiscard]] const Tier* tier_for(double abs_t, Tier& scratch) const;

  double tau_;
  GaussRule base_;
  std::vector<Tier> tiers_;
};

/// Shared kernel instance per tau.
std::shared_ptr<const WindowKernel> window_kernel_for(double tau);

/// F-bar(psi)(t) for the bump of width params.tau.
double window_kernel(const GridParams& params, double t);

/// phi for the multiset Lambda centred at `center`:
///   z -> e^{2 pi i carrier (z - center)} WK(z - center) f_{(-center + Lambda)^+}(z - center).
/// It is 1 at `center` and 0 at every other node of Lambda. When a block
/// radius is given, nodes of the translated multiset in blocks beyond it are
/// dropped (replaced by saturation anchors).
class InterpolationKernel {
 public:
  InterpolationKernel(const NodeMultiset& lambda, double center, double carrier,
                      std::optional<std::int64_t> block_radius = std::nullopt);

  [[nodiscard]] cplx operator()(cplx z) const;
  [[nodiscard]] cplx operator()(double t) const { return (*this)(cplx{t, 0.0}); }
  /// Product factor only (no window kernel, no carrier), in local coordinate.
  [[nodiscard]] cplx product(cplx local_z) const;

  [[nodiscard]] double center() const { return center_; }
  [[nodiscard]] double carrier() const { return carrier_; }
  [[nodiscard]] const GridParams& params() const { return params_; }
  [[nodiscard]] std::int64_t block_radius() const { return radius_; }
  /// Half-width of the spectrum around the carrier: (rho + tau) / 2.
  [[nodiscard]] double half_band() const;

 private:
  GridParams params_;
  double center_;
  double carrier_;
  std::int64_t radius_ = 0;
  std::vector<double> block0_;  // nonzero nodes of block 0, with multiplicity
  // Paired factors: for each n = 1..radius the nodes of blocks n and -n.
  std::vector<double> paired_;
  std::shared_ptr<const WindowKernel> window_;
};

cplx phi_lambda(const NodeMultiset& lambda, cplx z, std::optional<std::int64_t> block_radius,
                double carrier, double center);

// ---------------------------------------------------------------------------
// Empirical constants.

/// Random multiset whose nonzero points are pairwise >= 1/rho apart, on the
/// symmetric window of +-window_blocks blocks. Gaps are drawn from
/// [1/rho, 3/rho); `keep_origin` inserts the node 0.
NodeMultiset random_admissible(const GridParams& params, std::int64_t window_blocks, Rng& rng,
                               bool keep_origin = true);

/// Same nodes as `lambda` on [-radius, radius]; fresh random admissible nodes
/// outside.
NodeMultiset resample_outside(const NodeMultiset& lambda, double radius, Rng& rng);

struct RadiusSearch {
  std::uint64_t seed = 1;
  int family_size = 100;
  std::int64_t window_blocks = 64;
  int max_doublings = 24;
  int disk_radii = 4;    // concentric circles sampled in |z| <= r
  int disk_angles = 16;  // points per circle
};

struct RadiusCertificate {
  double radius = 0.0;
  bool certified = false;
  double worst_error = 0.0;  ///< sup of the certified quantity at `radius`
  int family_size = 0;
};

/// |1 - prod_{|lambda| > B} (1 - z/lambda)| over the saturation, i.e. the
/// tail factor of the full limit product.
cplx tail_factor(const NodeMultiset& saturated, cplx z, double radius);

/// Smallest power-of-two B such that dropping the factors with |lambda| > B
/// changes the product by < eps on |z| <= r, over a random admissible family.
RadiusCertificate truncation_radius(double r, double eps, const GridParams& params,
                                    const RadiusSearch& search = {});

/// Smallest power-of-two B such that |phi_Lambda - phi_Lambda'| < eps on
/// |x| <= r for random pairs agreeing on [-B, B].
RadiusCertificate locality_radius(double r, double eps, const GridParams& params,
                                  const RadiusSearch& search = {});

/// sup_{|x| <= r} |phi_Lambda(x) - phi_Lambda'(x)| on a grid; throws if the
/// pair does not agree on [-radius, radius].
double locality_gap(const NodeMultiset& a, const NodeMultiset& b, double radius, double r,
                    int grid_points = 65);

struct DecayEstimate {
  double k_hat = 0.0;
  double argmax = 0.0;
  int family_size = 0;
};

/// K-hat = max over the probe grid of |phi_Lambda(x)| (1 + x^2), over a
/// random admissible family plus three extremal multisets (a gap just under
/// 3/rho beside the origin, spacing 1/rho elsewhere). An estimate, not a
/// certified bound.
DecayEstimate decay_constant(const GridParams& params, const std::vector<double>& probe_grid,
                             std::uint64_t seed, int family_size = 50,
                             std::int64_t window_blocks = 64);

}  // namespace bandembed
