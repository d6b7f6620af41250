#include <doctest.h>

#include <cmath>

#include "bandembed/rng.hpp"
#include "bandembed/simplicial.hpp"

using namespace bandembed;

namespace {

SimplicialMap random_map(const Complex& c, int D, Rng& rng) {
  SimplicialMap m{c, {}};
  for (int v = 0; v < c.vertex_count(); ++v) {
    Point p;
    for (int k = 0; k < D; ++k) p.push_back(rng.normal());
    m.images.push_back(p);
  }
  return m;
}

std::vector<double> random_bary(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  double sum = 0.0;
  for (double& e : x) {
    e = -std::log(1.0 - rng.uniform());
    sum += e;
  }
  for (double& e : x) e /= sum;
  return x;
}

bool disjoint(const Simplex& a, const Simplex& b) {
  for (int v : a) {
    if (std::find(b.begin(), b.end(), v) != b.end()) return false;
  }
  return true;
}

const Complex kTwoEdges(4, {{0, 1}, {2, 3}});

}  // namespace

TEST_CASE("icosahedron: counts") {
  const Complex c = icosahedron();
  CHECK(c.vertex_count() == 12);
  CHECK(c.facets().size() == 20);
  CHECK(c.simplices().size() == 62);
  CHECK(c.dim() == 2);
}

TEST_CASE("subdivide: edge, triangle and point") {
  const Subdivision edge = subdivide(Complex(2, {{0, 1}}));
  CHECK(edge.complex.vertex_count() == 3);
  CHECK(edge.complex.facets().size() == 2);
  const Subdivision tri = subdivide(Complex(3, {{0, 1, 2}}));
  CHECK(tri.complex.vertex_count() == 7);
  CHECK(tri.complex.facets().size() == 6);
  const Subdivision pt = subdivide(Complex(1, {{0}}));
  CHECK(pt.complex.vertex_count() == 1);
  CHECK(pt.complex.dim() == 0);
}

TEST_CASE("subdivide: the subdivided map agrees on barycentres") {
  Rng rng(2);
  const SimplicialMap m = random_map(Complex(3, {{0, 1, 2}}), 3, rng);
  const Subdivision sd = subdivide(m.complex);
  const SimplicialMap s = subdivide(m, sd);
  for (std::size_t i = 0; i < sd.carrier.size(); ++i) {
    const Simplex& c = sd.carrier[i];
    const Point direct = m.at(c, std::vector<double>(c.size(), 1.0 / static_cast<double>(c.size())));
    CHECK(euclidean(direct, s.images[i]) < 1e-12);
  }
}

TEST_CASE("is_embedding: single edge in the plane") {
  const SimplicialMap m{Complex(2, {{0, 1}}), {{0.0, 0.0}, {1.0, 2.0}}};
  CHECK(is_embedding(m).embedding);
}

TEST_CASE("is_embedding: crossing segments meet at (0.5, 0.5)") {
  const SimplicialMap m{kTwoEdges, {{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}};
  const EmbeddingResult r = is_embedding(m);
  CHECK_FALSE(r.embedding);
  REQUIRE(r.witness.has_value());
  const Point p = m.at(r.witness->sigma, r.witness->x);
  const Point q = m.at(r.witness->tau, r.witness->y);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
  CHECK(euclidean(p, q) == 0.0);
}

TEST_CASE("is_embedding: two vertices on one point") {
  const SimplicialMap m{Complex(2, {{0}, {1}}), {{1.0, 1.0}, {1.0, 1.0}}};
  CHECK_FALSE(is_embedding(m).embedding);
}

TEST_CASE("is_embedding: random icosahedra in R^5 embed") {
  Rng rng(5);
  int ok = 0;
  for (int i = 0; i < 20; ++i) ok += is_embedding(random_map(icosahedron(), 5, rng)).embedding ? 1 : 0;
  CHECK(ok >= 19);
}

TEST_CASE("is_embedding: planted collisions in low dimension") {
  Rng rng(6);
  const Complex c = icosahedron();
  for (int D = 2; D <= 4; ++D) {
    for (int i = 0; i < 5; ++i) {
      SimplicialMap m = random_map(c, D, rng);
      const Simplex sigma = c.facets().at(0);
      Simplex tau;
      for (const Simplex& f : c.facets()) {
        if (disjoint(f, sigma)) tau = f;
      }
      REQUIRE_FALSE(tau.empty());
      // Put one vertex of tau inside f(sigma).
      m.images[static_cast<std::size_t>(tau[0])] = m.at(sigma, random_bary(3, rng));
      const EmbeddingResult r = is_embedding(m);
      CHECK_FALSE(r.embedding);
      REQUIRE(r.witness.has_value());
      CHECK(disjoint(r.witness->sigma, r.witness->tau));
      CHECK(euclidean(m.at(r.witness->sigma, r.witness->x), m.at(r.witness->tau, r.witness->y)) < 1e-9);
    }
  }
}

TEST_CASE("is_embedding: sampled collisions are never missed") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const SimplicialMap m = random_map(kTwoEdges, 2, rng);
    const bool exact = is_embedding(m).embedding;
    bool sampled_hit = false;
    // Near-hits within 1e-3 on a fine parameter grid.
    for (int a = 0; a <= 200 && !sampled_hit; ++a) {
      for (int b = 0; b <= 200 && !sampled_hit; ++b) {
        const double s = a / 200.0;
        const double t = b / 200.0;
        sampled_hit = euclidean(m.at({0, 1}, {1 - s, s}), m.at({2, 3}, {1 - t, t})) < 1e-12;
      }
    }
    if (sampled_hit) CHECK_FALSE(exact);
    if (!exact) {
      const auto w = intersect(m, {0, 1}, {2, 3});
      REQUIRE(w.has_value());
      CHECK(euclidean(m.at(w->sigma, w->x), m.at(w->tau, w->y)) < 1e-9);
    }
  }
}

TEST_CASE("perturb_to_embedding: collapsed edge in R^3") {
  const SimplicialMap m{Complex(2, {{0, 1}}), {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
  const PerturbResult r = perturb_to_embedding(m, 0.1, 3);
  CHECK(r.success);
  CHECK(is_embedding(r.map).embedding);
  for (std::size_t i = 0; i < 2; ++i) CHECK(euclidean(r.map.images[i], m.images[i]) <= 0.1);
}

TEST_CASE("perturb_to_embedding: embeddings are returned unchanged") {
  const SimplicialMap m{Complex(2, {{0, 1}}), {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}};
  const PerturbResult r = perturb_to_embedding(m, 0.1, 3);
  CHECK(r.success);
  CHECK(r.tries == 0);
  CHECK(r.map.images == m.images);
}

TEST_CASE("perturb_to_embedding: too few dimensions are rejected") {
  const SimplicialMap m{Complex(2, {{0, 1}}), {{0.0, 0.0}, {0.0, 0.0}}};
  CHECK_THROWS_AS((void)perturb_to_embedding(m, 0.1, 3), Error);
}

TEST_CASE("segment_family_check: constant family and generic segment") {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  Rng rng(9);
  const SimplicialMap f = random_map(kTwoEdges, 4, rng);
  REQUIRE(is_embedding(f).embedding);
  CHECK(segment_family_check(f, f, grid).ok);
  const SimplicialMap g = random_map(kTwoEdges, 4, rng);
  CHECK(segment_family_check(f, g, grid).ok);
}

TEST_CASE("segment_family_check: midpoint collapse is found at t = 0.5") {
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  const SimplicialMap f{Complex(2, {{0}, {1}}), {{0.0, 0.0}, {2.0, 0.0}}};
  const SimplicialMap g{Complex(2, {{0}, {1}}), {{2.0, 2.0}, {0.0, 2.0}}};
  const SegmentResult r = segment_family_check(f, g, grid);
  CHECK_FALSE(r.ok);
  REQUIRE(r.failing_t.has_value());
  CHECK(*r.failing_t == 0.5);
}

TEST_CASE("eps_embedding_check: vacuous and failing cases") {
  const MetricSample s = euclidean_sample({{0.0}, {1.0}, {5.0}});
  CHECK(eps_embedding_check(s, {{0.0}, {1.0}, {2.0}}, 0.5, 0.1).ok);
  const EpsEmbeddingResult bad = eps_embedding_check(s, {{0.0}, {1.0}, {0.0}}, 1.0, 0.1);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->i == 0);
  CHECK(bad.witness->j == 2);
}

TEST_CASE("eps_embedding_check: rotation orbit under the cosine coordinates") {
  const double alpha = std::sqrt(2.0) - 1.0;
  std::vector<Point> pts;
  std::vector<Point> images;
  for (int n = 0; n < 200; ++n) {
    const double x = std::fmod(n * alpha, 1.0);
    pts.push_back({std::cos(2 * kPi * x), std::sin(2 * kPi * x)});
    Point img;
    for (int k = -10; k <= 10; ++k) img.push_back(0.5 * (1.0 + std::cos(2 * kPi * (x + k * alpha))));
    images.push_back(img);
  }
  const MetricSample s = euclidean_sample(pts);
  double distortion = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (euclidean(images[i], images[j]) <= 1e-6) distortion = std::max(distortion, s.dist[i][j]);
    }
  }
  CHECK(eps_embedding_check(s, images, distortion + 1e-12, 1e-6).ok);
}

TEST_CASE("approx_map: constant data and vertex samples") {
  const Complex tri(3, {{0, 1, 2}});
  const std::vector<Point> corners{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const MetricSample s = euclidean_sample(corners);
  const std::vector<Placement> pi{{{0, 1, 2}, {1, 0, 0}}, {{0, 1, 2}, {0, 1, 0}}, {{0, 1, 2}, {0, 0, 1}}};
  const SimplicialMap c = approx_map(tri, s, pi, {{3.0}, {3.0}, {3.0}}, 0.5, 0.1);
  for (const Point& p : c.images) CHECK(p == Point{3.0});
  const SimplicialMap id = approx_map(tri, s, pi, corners, 0.5, 0.1);
  CHECK(id.images == corners);
}

TEST_CASE("approx_map: Lipschitz data on a subdivided triangle") {
  const Subdivision sd = subdivide(subdivide(Complex(3, {{0, 1, 2}})).complex);
  Rng rng(13);
  // Geometric positions of the new vertices in the plane.
  const std::vector<Point> corners{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const Subdivision first = subdivide(Complex(3, {{0, 1, 2}}));
  std::vector<Point> pos1;
  for (const Simplex& c : first.carrier) {
    Point p{0.0, 0.0};
    for (int v : c) {
      p[0] += corners[static_cast<std::size_t>(v)][0] / static_cast<double>(c.size());
      p[1] += corners[static_cast<std::size_t>(v)][1] / static_cast<double>(c.size());
    }
    pos1.push_back(p);
  }
  std::vector<Point> pos2;
  for (const Simplex& c : sd.carrier) {
    Point p{0.0, 0.0};
    for (int v : c) {
      p[0] += pos1[static_cast<std::size_t>(v)][0] / static_cast<double>(c.size());
      p[1] += pos1[static_cast<std::size_t>(v)][1] / static_cast<double>(c.size());
    }
    pos2.push_back(p);
  }
  std::vector<Point> pts;
  std::vector<Placement> pi;
  std::vector<Point> f;
  const auto facets = sd.complex.facets();
  for (int i = 0; i < 20; ++i) {
    const Simplex& s = facets[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(facets.size()) - 1))];
    const std::vector<double> x = random_bary(3, rng);
    Point p{0.0, 0.0};
    for (std::size_t k = 0; k < 3; ++k) {
      p[0] += x[k] * pos2[static_cast<std::size_t>(s[k])][0];
      p[1] += x[k] * pos2[static_cast<std::size_t>(s[k])][1];
    }
    pts.push_back(p);
    pi.push_back({s, x});
    f.push_back({std::sin(p[0]), std::cos(p[1])});
  }
  const double delta = 1.0;
  const SimplicialMap g = approx_map(sd.complex, euclidean_sample(pts), pi, f, 0.9, delta);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(euclidean(g.at(pi[i].simplex, pi[i].bary), f[i]) < delta);
}

TEST_CASE("approx_map: modulus violation names the pair") {
  const Complex tri(3, {{0, 1, 2}});
  const MetricSample s = euclidean_sample({{0.0, 0.0}, {0.01, 0.0}});
  const std::vector<Placement> pi{{{0, 1, 2}, {1, 0, 0}}, {{0, 1, 2}, {0.99, 0.01, 0}}};
  try {
    (void)approx_map(tri, s, pi, {{0.0}, {5.0}}, 0.5, 0.1);
    FAIL("expected PairError");
  } catch (const PairError& e) {
    CHECK(e.witness().i == 0);
    CHECK(e.witness().j == 1);
  }
}
