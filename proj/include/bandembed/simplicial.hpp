#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bandembed/common.hpp"

namespace bandembed {

using Simplex = std::vector<int>;  ///< sorted vertex indices
using Point = std::vector<double>;

/// Finite abstract simplicial complex on vertices 0..vertex_count-1; all
/// faces are stored, sorted by size and then lexicographically.
class Complex {
 public:
  Complex() = default;
  /// Closure of the given simplices under taking faces. Every vertex index
  /// must be below vertex_count; isolated vertices are added as 0-simplices.
  Complex(int vertex_count, const std::vector<Simplex>& generators);

  [[nodiscard]] int vertex_count() const { return vertex_count_; }
  [[nodiscard]] const std::vector<Simplex>& simplices() const { return simplices_; }
  [[nodiscard]] std::vector<Simplex> facets() const;
  [[nodiscard]] int dim() const;
  [[nodiscard]] bool contains(const Simplex& s) const;

  friend bool operator==(const Complex&, const Complex&) = default;

 private:
  int vertex_count_ = 0;
  std::vector<Simplex> simplices_;
};

/// Boundary of the icosahedron: 12 vertices, 20 triangles.
Complex icosahedron();

struct SimplicialMap {
  Complex complex;
  std::vector<Point> images;  ///< one point in R^D per vertex

  [[nodiscard]] std::size_t D() const { return images.empty() ? 0 : images.front().size(); }
  void validate() const;
  /// f(sum_i x_i v_i) for barycentric x over the vertices of s.
  [[nodiscard]] Point at(const Simplex& s, const std::vector<double>& bary) const;
};

/// Barycentric subdivision. carrier[i] is the simplex whose barycentre is the
/// new vertex i.
struct Subdivision {
  Complex complex;
  std::vector<Simplex> carrier;
};

Subdivision subdivide(const Complex& c);
/// The subdivided map, equal to `m` on the geometric realization.
SimplicialMap subdivide(const SimplicialMap& m, const Subdivision& sd);

/// Two vertex-disjoint simplices with f(x) = f(y).
struct CollisionWitness {
  Simplex sigma;
  Simplex tau;
  std::vector<double> x;  ///< barycentric over sigma
  std::vector<double> y;  ///< barycentric over tau
};

struct EmbeddingResult {
  bool embedding = false;
  std::optional<CollisionWitness> witness;
  std::int64_t pairs_checked = 0;
};

/// f is an embedding iff f(sigma) and f(tau) are disjoint for all
/// vertex-disjoint simplices. Each pair is an exact rational feasibility
/// problem solved by the simplex method.
EmbeddingResult is_embedding(const SimplicialMap& m);

/// Exact test whether conv(f(sigma)) meets conv(f(tau)).
std::optional<CollisionWitness> intersect(const SimplicialMap& m, const Simplex& sigma, const Simplex& tau);

struct PerturbResult {
  SimplicialMap map;
  bool success = false;
  int tries = 0;  ///< 0 when the input already was an embedding
};

/// Moves every vertex image by at most `magnitude` until the map embeds.
/// Requires D >= 2 dim + 1.
PerturbResult perturb_to_embedding(const SimplicialMap& m, double magnitude, std::uint64_t seed, int max_tries = 100);

struct SegmentResult {
  bool ok = true;
  std::optional<double> failing_t;
};

/// is_embedding((1 - t) f + t g) at each t of the grid; a sampled check.
SegmentResult segment_family_check(const SimplicialMap& f, const SimplicialMap& g, const std::vector<double>& t_grid);

/// Finite metric space given by its distance matrix.
struct MetricSample {
  std::vector<std::vector<double>> dist;

  [[nodiscard]] std::size_t size() const { return dist.size(); }
  /// Throws when the matrix is not a metric (tolerance 1e-12 for the triangle inequality).
  void validate() const;
};

MetricSample euclidean_sample(const std::vector<Point>& points);

struct PairWitness {
  std::size_t i = 0;
  std::size_t j = 0;
};

struct EpsEmbeddingResult {
  bool ok = true;
  std::optional<PairWitness> witness;
};

/// True iff every pair whose images are within eta (Euclidean) has dist < eps.
EpsEmbeddingResult eps_embedding_check(const MetricSample& sample, const std::vector<Point>& images, double eps,
                                       double eta);

/// Location of a sample point in the complex.
struct Placement {
  Simplex simplex;
  std::vector<double> bary;
};

/// Raised by approx_map with the offending pair of sample points.
class PairError : public Error {
 public:
  PairError(const std::string& what, PairWitness w) : Error(what), witness_(w) {}
  [[nodiscard]] PairWitness witness() const { return witness_; }

 private:
  PairWitness witness_;
};

/// g(v) = f(x_v) for a sample point x_v in the open star of v (largest
/// coordinate at v, lowest index on ties); vertices with no such point map to 0.
/// Requires every open star preimage to have diameter < eps and
/// dist < eps => |f(x) - f(y)| < delta on the sample.
SimplicialMap approx_map(const Complex& complex, const MetricSample& sample, const std::vector<Placement>& pi,
                         const std::vector<Point>& f, double eps, double delta);

double euclidean(const Point& a, const Point& b);

}  // namespace bandembed
