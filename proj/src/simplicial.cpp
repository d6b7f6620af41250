#include "bandembed/simplicial.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "bandembed/rng.hpp"

namespace bandembed {

namespace {

bool simplex_less(const Simplex& a, const Simplex& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool disjoint(const Simplex& a, const Simplex& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

Simplex with_vertex(const Simplex& s, int v) {
  Simplex out = s;
  out.insert(std::upper_bound(out.begin(), out.end(), v), v);
  return out;
}

}  // namespace

Complex::Complex(int vertex_count, const std::vector<Simplex>& generators) : vertex_count_(vertex_count) {
  if (vertex_count < 0) throw Error("complex: negative vertex count");
  std::set<Simplex> all;
  for (int v = 0; v < vertex_count; ++v) all.insert({v});
  for (Simplex g : generators) {
    std::sort(g.begin(), g.end());
    if (g.empty()) continue;
    if (std::adjacent_find(g.begin(), g.end()) != g.end()) throw Error("complex: repeated vertex in a simplex");
    if (g.front() < 0 || g.back() >= vertex_count) throw Error("complex: vertex index out of range");
    if (g.size() > 20) throw Error("complex: simplex dimension too large");
    const std::size_t k = g.size();
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (1u << i)) face.push_back(g[i]);
      }
      all.insert(face);
    }
  }
  simplices_.assign(all.begin(), all.end());
  std::sort(simplices_.begin(), simplices_.end(), simplex_less);
}

bool Complex::contains(const Simplex& s) const {
  return std::binary_search(simplices_.begin(), simplices_.end(), s, simplex_less);
}

int Complex::dim() const {
  int d = -1;
  for (const Simplex& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

std::vector<Simplex> Complex::facets() const {
  std::vector<Simplex> out;
  for (const Simplex& s : simplices_) {
    bool maximal = true;
    for (int v = 0; v < vertex_count_ && maximal; ++v) {
      if (!std::binary_search(s.begin(), s.end(), v) && contains(with_vertex(s, v))) maximal = false;
    }
    if (maximal) out.push_back(s);
  }
  return out;
}

Complex icosahedron() {
  std::vector<Simplex> f;
  for (int i = 0; i < 5; ++i) {
    const int u = 1 + i;
    const int u_next = 1 + (i + 1) % 5;
    const int d = 6 + i;
    const int d_next = 6 + (i + 1) % 5;
    f.push_back({0, u, u_next});
    f.push_back({u, u_next, d});
    f.push_back({u_next, d, d_next});
    f.push_back({11, d, d_next});
  }
  return Complex(12, f);
}

void SimplicialMap::validate() const {
  if (static_cast<int>(images.size()) != complex.vertex_count()) throw Error("map: one image per vertex required");
  const std::size_t d = D();
  if (d < 1 && !images.empty()) throw Error("map: target dimension must be >= 1");
  for (const Point& p : images) {
    if (p.size() != d) throw Error("map: images differ in dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw Error("map: non-finite image coordinate");
    }
  }
}

Point SimplicialMap::at(const Simplex& s, const std::vector<double>& bary) const {
  if (s.size() != bary.size()) throw Error("map: barycentric size mismatch");
  Point out(D(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Point& p = images.at(static_cast<std::size_t>(s[i]));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += bary[i] * p[k];
  }
  return out;
}

Subdivision subdivide(const Complex& c) {
  Subdivision sd;
  sd.carrier = c.simplices();
  std::map<Simplex, int> index;
  for (std::size_t i = 0; i < sd.carrier.size(); ++i) index[sd.carrier[i]] = static_cast<int>(i);
  std::vector<Simplex> chains;
  for (const Simplex& facet : c.facets()) {
    Simplex order = facet;
    do {
      Simplex chain;
      Simplex prefix;
      for (int v : order) {
        prefix = with_vertex(prefix, v);
        chain.push_back(index.at(prefix));
      }
      std::sort(chain.begin(), chain.end());
      chains.push_back(chain);
    } while (std::next_permutation(order.begin(), order.end()));
  }
  sd.complex = Complex(static_cast<int>(sd.carrier.size()), chains);
  return sd;
}

SimplicialMap subdivide(const SimplicialMap& m, const Subdivision& sd) {
  m.validate();
  SimplicialMap out;
  out.complex = sd.complex;
  for (const Simplex& s : sd.carrier) {
    out.images.push_back(m.at(s, std::vector<double>(s.size(), 1.0 / static_cast<double>(s.size()))));
  }
  return out;
}

namespace {

// Phase one of the simplex method on A z = b, z >= 0, b >= 0, with Bland's
// rule. Returns a feasible z or nothing.
std::optional<std::vector<mpq_class>> feasible_point(const std::vector<std::vector<mpq_class>>& A,
                                                     const std::vector<mpq_class>& b) {
  const std::size_t rows = A.size();
  const std::size_t cols = rows == 0 ? 0 : A.front().size();
  const std::size_t total = cols + rows;  // original plus artificial columns
  std::vector<std::vector<mpq_class>> T(rows, std::vector<mpq_class>(total + 1));
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) T[i][j] = A[i][j];
    T[i][cols + i] = 1;
    T[i][total] = b[i];
    basis[i] = cols + i;
  }
  // Reduced costs of the phase-one objective sum of artificials.
  std::vector<mpq_class> cost(total + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) cost[j] -= T[i][j];
    cost[total] -= T[i][total];
  }
  while (true) {
    std::size_t enter = total;
    for (std::size_t j = 0; j < total; ++j) {
      if (sgn(cost[j]) < 0) {
        enter = j;
        break;
      }
    }
    if (enter == total) break;
    std::size_t leave = rows;
    mpq_class best;
    for (std::size_t i = 0; i < rows; ++i) {
      if (sgn(T[i][enter]) <= 0) continue;
      mpq_class ratio = T[i][total] / T[i][enter];
      if (leave == rows || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == rows) break;  // unbounded cannot occur for a sum of artificials
    const mpq_class pivot = T[leave][enter];
    for (mpq_class& e : T[leave]) e /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == leave || sgn(T[i][enter]) == 0) continue;
      const mpq_class factor = T[i][enter];
      for (std::size_t j = 0; j <= total; ++j) T[i][j] -= factor * T[leave][j];
    }
    if (sgn(cost[enter]) != 0) {
      const mpq_class factor = cost[enter];
      for (std::size_t j = 0; j <= total; ++j) cost[j] -= factor * T[leave][j];
    }
    basis[leave] = enter;
  }
  if (sgn(cost[total]) != 0) return std::nullopt;
  std::vector<mpq_class> z(cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] < cols) z[basis[i]] = T[i][total];
  }
  return z;
}

}  // namespace

std::optional<CollisionWitness> intersect(const SimplicialMap& m, const Simplex& sigma, const Simplex& tau) {
  const std::size_t d = m.D();
  const std::size_t ks = sigma.size();
  const std::size_t kt = tau.size();
  std::vector<std::vector<mpq_class>> A(d + 2, std::vector<mpq_class>(ks + kt));
  std::vector<mpq_class> b(d + 2);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < ks; ++i) A[k][i] = mpq_class(m.images[static_cast<std::size_t>(sigma[i])][k]);
    for (std::size_t j = 0; j < kt; ++j) A[k][ks + j] = -mpq_class(m.images[static_cast<std::size_t>(tau[j])][k]);
  }
  for (std::size_t i = 0; i < ks; ++i) A[d][i] = 1;
  for (std::size_t j = 0; j < kt; ++j) A[d + 1][ks + j] = 1;
  b[d] = 1;
  b[d + 1] = 1;
  auto z = feasible_point(A, b);
  if (!z) return std::nullopt;
  CollisionWitness w{sigma, tau, {}, {}};
  for (std::size_t i = 0; i < ks; ++i) w.x.push_back((*z)[i].get_d());
  for (std::size_t j = 0; j < kt; ++j) w.y.push_back((*z)[ks + j].get_d());
  return w;
}

EmbeddingResult is_embedding(const SimplicialMap& m) {
  m.validate();
  EmbeddingResult res;
  const auto& s = m.complex.simplices();
  const int nv = m.complex.vertex_count();
  // A pair is redundant when one side extends to a larger simplex that is
  // still disjoint from the other side.
  auto extendable = [&](const Simplex& a, const Simplex& b) {
    for (int v = 0; v < nv; ++v) {
      if (std::binary_search(a.begin(), a.end(), v) || std::binary_search(b.begin(), b.end(), v)) continue;
      if (m.complex.contains(with_vertex(a, v))) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (!disjoint(s[i], s[j])) continue;
      if (extendable(s[i], s[j]) || extendable(s[j], s[i])) continue;
      ++res.pairs_checked;
      if (auto w = intersect(m, s[i], s[j])) {
        res.witness = std::move(w);
        return res;
      }
    }
  }
  res.embedding = true;
  return res;
}

PerturbResult perturb_to_embedding(const SimplicialMap& m, double magnitude, std::uint64_t seed, int max_tries) {
  m.validate();
  const auto d = static_cast<int>(m.D());
  if (d < 2 * m.complex.dim() + 1) throw Error("perturb_to_embedding: need D >= 2 dim + 1");
  if (!(magnitude > 0.0)) throw Error("perturb_to_embedding: magnitude must be positive");
  PerturbResult res{m, false, 0};
  if (is_embedding(m).embedding) {
    res.success = true;
    return res;
  }
  Rng rng(seed);
  // Coordinates uniform in a cube inscribed in the ball of radius magnitude.
  const double half = magnitude / std::sqrt(static_cast<double>(d));
  for (int attempt = 1; attempt <= max_tries; ++attempt) {
    SimplicialMap trial = m;
    for (Point& p : trial.images) {
      for (double& c : p) c += rng.uniform(-half, half);
    }
    res.tries = attempt;
    if (is_embedding(trial).embedding) {
      res.map = std::move(trial);
      res.success = true;
      return res;
    }
  }
  return res;
}

SegmentResult segment_family_check(const SimplicialMap& f, const SimplicialMap& g, const std::vector<double>& t_grid) {
  f.validate();
  g.validate();
  if (!(f.complex == g.complex) || f.D() != g.D()) throw Error("segment check: maps must share complex and D");
  SegmentResult res;
  for (double t : t_grid) {
    SimplicialMap h = f;
    for (std::size_t v = 0; v < h.images.size(); ++v) {
      for (std::size_t k = 0; k < h.images[v].size(); ++k) {
        h.images[v][k] = (1.0 - t) * f.images[v][k] + t * g.images[v][k];
      }
    }
    if (!is_embedding(h).embedding) {
      res.ok = false;
      res.failing_t = t;
      return res;
    }
  }
  return res;
}

double euclidean(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw Error("euclidean: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void MetricSample::validate() const {
  const std::size_t n = dist.size();
  for (const auto& row : dist) {
    if (row.size() != n) throw Error("metric sample: matrix must be square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0.0) throw Error("metric sample: nonzero diagonal");
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] < 0.0 || dist[i][j] != dist[j][i]) throw Error("metric sample: not symmetric and nonnegative");
      for (std::size_t k = 0; k < n; ++k) {
        if (dist[i][k] > dist[i][j] + dist[j][k] + 1e-12) throw Error("metric sample: triangle inequality fails");
      }
    }
  }
}

MetricSample euclidean_sample(const std::vector<Point>& points) {
  MetricSample s;
  s.dist.assign(points.size(), std::vector<double>(points.size(), 0.0));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      s.dist[i][j] = s.dist[j][i] = euclidean(points[i], points[j]);
    }
  }
  return s;
}

EpsEmbeddingResult eps_embedding_check(const MetricSample& sample, const std::vector<Point>& images, double eps,
                                       double eta) {
  if (eta < 0.0) throw Error("eps_embedding_check: eta must be nonnegative");
  if (images.size() != sample.size()) throw Error("eps_embedding_check: one image per sample point required");
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      if (euclidean(images[i], images[j]) <= eta && sample.dist[i][j] >= eps) return {false, PairWitness{i, j}};
    }
  }
  return {};
}

SimplicialMap approx_map(const Complex& complex, const MetricSample& sample, const std::vector<Placement>& pi,
                         const std::vector<Point>& f, double eps, double delta) {
  sample.validate();
  const std::size_t n = sample.size();
  if (pi.size() != n || f.size() != n) throw Error("approx_map: one placement and one value per sample point");
  if (n == 0) throw Error("approx_map: empty sample");
  const std::size_t d = f.front().size();
  const auto nv = static_cast<std::size_t>(complex.vertex_count());
  // Weight of every vertex in the placement of every point.
  std::vector<std::vector<double>> weight(n, std::vector<double>(nv, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (!complex.contains(pi[i].simplex) || pi[i].bary.size() != pi[i].simplex.size()) {
      throw Error("approx_map: placement outside the complex");
    }
    for (std::size_t k = 0; k < pi[i].simplex.size(); ++k) {
      weight[i][static_cast<std::size_t>(pi[i].simplex[k])] = pi[i].bary[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sample.dist[i][j] < eps && euclidean(f[i], f[j]) >= delta) {
        throw PairError("approx_map: modulus violated", {i, j});
      }
      for (std::size_t v = 0; v < nv; ++v) {
        if (weight[i][v] > 0.0 && weight[j][v] > 0.0 && sample.dist[i][j] >= eps) {
          throw PairError("approx_map: open star preimage too large", {i, j});
        }
      }
    }
  }
  SimplicialMap g;
  g.complex = complex;
  g.images.assign(nv, Point(d, 0.0));
  for (std::size_t v = 0; v < nv; ++v) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
      if (weight[i][v] > 0.0 && (!best || weight[i][v] > weight[*best][v])) best = i;
    }
    if (best) g.images[v] = f[*best];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (euclidean(f[i], g.at(pi[i].simplex, pi[i].bary)) >= delta) {
      throw PairError("approx_map: gap postcondition failed", {i, i});
    }
  }
  return g;
}

}  // namespace bandembed
