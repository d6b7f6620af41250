#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bandembed/common.hpp"
#include "bandembed/interpolation.hpp"
#include "bandembed/rng.hpp"

namespace bandembed {

struct Marker {
  std::int64_t n = 0;
  double h = 1.0;  ///< in (0, 1]
  friend bool operator==(const Marker&, const Marker&) = default;
};

/// Marker positions n with heights h(S^n x) > 0.
struct MarkerSeq {
  std::vector<Marker> entries;  ///< strictly increasing in n
  std::int64_t L = 1;
  std::int64_t M = 2;

  void validate() const;
  /// Empty when both marker invariants hold on the span of the entries,
  /// otherwise a description of the first violation.
  [[nodiscard]] std::string invariant_violation() const;
  friend bool operator==(const MarkerSeq&, const MarkerSeq&) = default;
};

struct Tile {
  std::int64_t n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  bool empty = false;
  bool clipped_left = false;   ///< alpha is the window edge
  bool clipped_right = false;  ///< beta is the window edge

  [[nodiscard]] bool degenerate() const { return !empty && alpha == beta; }
  [[nodiscard]] double length() const { return empty ? 0.0 : beta - alpha; }
};

/// Tiles I(x, n) of the markers whose cells meet the window, in order of n.
struct Tiling {
  Interval window;
  std::vector<Tile> tiles;
  std::int64_t L = 1;
  std::int64_t M = 2;
  std::string diagnostic;

  [[nodiscard]] const Tile* find(std::int64_t n) const;
  /// Distinct endpoints of nonempty tiles that are not window edges.
  [[nodiscard]] std::vector<double> boundaries() const;
};

/// Voronoi tiling of the window by the lifted points (n, 1/h).
Tiling compute_tiles(const MarkerSeq& markers, Interval window);

/// Markers of S^k x: (n, h) -> (n - k, h).
MarkerSeq shift_markers(const MarkerSeq& markers, std::int64_t k);

/// Union of the r-collars of tile endpoints, clipped to the window and merged.
/// Window edges count as endpoints unless `include_window_edges` is false.
std::vector<Interval> boundary_set(const Tiling& tiling, double r, bool include_window_edges = true);

struct DensityReport {
  double count_density = 0.0;    ///< #([a, a+R] cap d(x, r) cap Z) / R
  double measure_density = 0.0;  ///< |[a, a+R] cap d(x, r)| / R
  double count_bound = 0.0;      ///< (4r + 2) / L
  double measure_bound = 0.0;    ///< 4r / L
  double slack = 0.0;            ///< 2(2r + 1)(1 + (R + M)/L) / R
  double finite_count_bound = 0.0;  ///< (2(r + 1) + 2(2r + 1)(1 + (R + M)/L)) / R
  bool count_ok = false;
  bool measure_ok = false;
};

/// Densities of the true boundary collars on [a, a + R].
DensityReport density_report(const Tiling& tiling, double r, double R, double a);

struct TileAnchors {
  std::int64_t r = 0;
  std::int64_t s = 0;
  double c = 0.0;
  double c_prime = 0.0;
};

std::optional<TileAnchors> tile_anchors(const Tiling& tiling, std::int64_t n, std::int64_t N);
/// Anchors of an explicit interval [alpha, beta] around n.
TileAnchors anchors_of(double alpha, double beta, std::int64_t n, std::int64_t N);

/// Bits (theta_n, theta'_n) of one tile.
using ThetaBits = std::pair<int, int>;

/// Union over nonempty tiles of n + ((1/rho)Z cap [(r + theta)N, (s - theta')N)).
/// `theta` holds one pair per nonempty tile in tile order; rho N must be an
/// integer. Degenerate tiles contribute nothing.
NodeMultiset build_node_set(const Tiling& tiling, const std::vector<ThetaBits>& theta, std::int64_t N,
                            const GridParams& params);

/// Random markers on [lo, hi]: h = 1 anchors with gaps in [L + 1, M - 1] and,
/// inside gaps of at least 2(L + 1), one extra marker of height k/16.
MarkerSeq random_markers(std::int64_t L, std::int64_t M, std::int64_t lo, std::int64_t hi, Rng& rng);

}  // namespace bandembed
