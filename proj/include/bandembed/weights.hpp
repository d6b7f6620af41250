#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bandembed/common.hpp"
#include "bandembed/tiling.hpp"

namespace bandembed {

struct WeightParams {
  double C = 1.0;
  double L0 = 2.0;
  double L1 = 4.0;
  std::int64_t L = 106;
  std::int64_t R = 200;
  std::int64_t M = 110;
};

/// L > 4 L1 + 1 + 4 C L0 (4 L0 + 3) and R > M > L, all entries positive.
bool validate_params(const WeightParams& p);

/// Sparse maps indexed by integer position.
using IndexMap = std::map<std::int64_t, double>;

struct Bases {
  IndexMap a0;  ///< per marker: (|I| - L1)^+ / C; clipped tiles get 0
  IndexMap b0;  ///< per integer of the window: (L0 - dist(k, boundary))^+, zeros omitted
};

Bases bases(const Tiling& tiling, const WeightParams& p);

/// v[n][m] for donors n and rounds m = 0..R.
using VMatrix = std::map<std::int64_t, std::vector<double>>;

struct GreedyResult {
  VMatrix v;
  IndexMap residual_a;  ///< a after round R
  IndexMap residual_b;  ///< b after round R, entries above 1e-9 only
};

/// Round m: every donor n (ascending) gives v_nm = min(a_n, b_{n+m}).
GreedyResult greedy_rounds(const IndexMap& a0, const IndexMap& b0, const WeightParams& p);

/// alpha(t) = R - (R - 1) min(t, 1) for t >= 0.
double cascade_alpha(double t, std::int64_t R);
/// beta(t) = clamp(t - 1, 0, 1).
double cascade_beta(double t);
/// A: y_R = R x_R, y_m = alpha(max_{j > m} y_j) x_m.
std::vector<double> cascade_A(const std::vector<double>& x, std::int64_t R);

struct WeightMatrix {
  VMatrix v;
  std::map<std::int64_t, std::vector<double>> w;
  WeightParams params;

  /// w_n, or zeros for indices without a row.
  [[nodiscard]] std::vector<double> row(std::int64_t n) const;
};

WeightMatrix finalize(const VMatrix& v, const WeightParams& p);

/// Receivers and donors whose values do not depend on what lies beyond the
/// window: receivers in [lo + R + M, hi - R - M], donors in [lo + M, hi - R - M].
struct Interior {
  std::int64_t receiver_lo = 0;
  std::int64_t receiver_hi = -1;
  std::int64_t donor_lo = 0;
  std::int64_t donor_hi = -1;
};
Interior interior_of(const Tiling& tiling, const WeightParams& p);

struct WeightReport {
  bool residual_zero = false;
  bool conservation = false;
  bool tax_cap = false;
  bool sparsity = false;       ///< #{y > 1} <= 1 + #{x > 1}
  bool c1_equivariance = false;
  bool c2_short_tiles = false;
  bool c3_support = false;
  bool c4_wild_service = false;
  std::int64_t wild_points = 0;  ///< interior integers within L0 - 4 of the boundary
  std::vector<std::string> witnesses;

  [[nodiscard]] bool all() const {
    return residual_zero && conservation && tax_cap && sparsity && c1_equivariance && c2_short_tiles &&
           c3_support && c4_wild_service;
  }
};

/// Every stage of the allocation for one marker sequence on a window.
struct WeightRun {
  Tiling tiling;
  Bases base;
  GreedyResult greedy;
  WeightMatrix weights;
};

WeightRun run_weights(const MarkerSeq& markers, Interval window, const WeightParams& p);

/// Checks conditions (2)-(4) and the greedy identities on the interior.
/// Condition (1) compares against `shifted`, the run on S x (markers and
/// window moved by -1); when absent it is recorded as not checked (false).
WeightReport verify_conditions(const WeightRun& run, const WeightParams& p, const WeightRun* shifted = nullptr);

/// sum_{a <= n <= a+R} (|I(x,n)| - L1)^+ >= C sum_{a <= n <= a+R} (L0 - dist(n, boundary))^+.
bool surplus_check(const Tiling& tiling, const WeightParams& p, double a);

}  // namespace bandembed
