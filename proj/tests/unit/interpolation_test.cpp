#include <doctest.h>

#include <cmath>

#include "bandembed/interpolation.hpp"

using namespace bandembed;

namespace {

const GridParams kUnit{1, Rational(1), 0.5};

NodeMultiset integer_grid(std::int64_t w) {
  std::vector<Node> nodes;
  for (std::int64_t k = -w; k <= w; ++k) {
    if (k != 0) nodes.push_back({static_cast<double>(k), 1});
  }
  return NodeMultiset(kUnit, {-w, w}, nodes);
}

// prod over 0 < |lambda| <= B of (1 - z/lambda)^mult, anchors n l beyond the window included.
cplx direct_truncated(const NodeMultiset& sat, cplx z, double B) {
  cplx p{1.0, 0.0};
  for (const Node& e : sat.entries()) {
    if (e.position == 0.0 || std::abs(e.position) > B) continue;
    for (std::int64_t k = 0; k < e.multiplicity; ++k) p *= 1.0 - z / e.position;
  }
  const GridParams& g = sat.params();
  const auto l = static_cast<double>(g.l);
  for (std::int64_t n = sat.window().hi + 1; static_cast<double>(n) * l <= B; ++n) {
    const double a = static_cast<double>(n) * l;
    for (std::int64_t k = 0; k < g.block_capacity(); ++k) p *= (1.0 - z / a) * (1.0 + z / a);
  }
  return p;
}

}  // namespace

TEST_CASE("check_conditions: the integer grid satisfies all three") {
  const ConditionReport r = check_conditions(integer_grid(10), {-10, 10});
  CHECK(r.c1);
  CHECK(r.c2);
  CHECK(r.c3);
}

TEST_CASE("check_conditions: nodes closer than the spacing break c1") {
  const NodeMultiset m(kUnit, {-3, 3}, {{0.0, 1}, {0.5, 1}});
  CHECK_FALSE(check_conditions(m, {-3, 3}).c1);
}

TEST_CASE("check_conditions: an empty block breaks c3 only") {
  const NodeMultiset grid = integer_grid(10);
  std::vector<Node> nodes;
  for (const Node& e : grid.entries()) {
    if (e.position != 5.0) nodes.push_back(e);
  }
  const ConditionReport r = check_conditions(NodeMultiset(kUnit, {-10, 10}, nodes), {-10, 10});
  CHECK(r.c2);
  CHECK_FALSE(r.c3);
  REQUIRE(r.c3_violation.has_value());
  CHECK(*r.c3_violation == 5);
}

TEST_CASE("saturate: fixed point on saturated input") {
  const NodeMultiset g = integer_grid(8);
  CHECK(saturate(g) == g);
}

TEST_CASE("saturate: a half-filled block gains its anchor") {
  const GridParams p{1, Rational(2), 0.5};
  const NodeMultiset m(p, {-4, 4}, {{3.5, 1}});
  const NodeMultiset s = saturate(m);
  CHECK(s.block_count(3) == 2);
  const auto block = s.block(3);
  REQUIRE(block.size() == 2);
  CHECK(block[0] == Node{3.0, 1});
  CHECK(block[1] == Node{3.5, 1});
}

TEST_CASE("saturate: empty input becomes the anchor lattice") {
  const GridParams p{2, Rational(3, 2), 0.5};
  const NodeMultiset s = saturate(NodeMultiset(p, {-5, 5}, {}));
  std::vector<Node> expected;
  for (std::int64_t n = -5; n <= 5; ++n) {
    if (n != 0) expected.push_back({2.0 * static_cast<double>(n), 3});
  }
  CHECK(s.entries() == expected);
}

TEST_CASE("saturate: overfull block is rejected with its index") {
  const NodeMultiset m(kUnit, {-3, 3}, {{2.0, 1}, {2.5, 1}});
  try {
    (void)saturate(m);
    FAIL("expected SaturationError");
  } catch (const SaturationError& e) {
    CHECK(e.block() == 2);
  }
}

TEST_CASE("saturate: idempotent with exact block counts on random input") {
  Rng rng(17);
  for (const GridParams& p : {kUnit, GridParams{2, Rational(1), 0.5}, GridParams{1, Rational(3), 0.25}}) {
    for (int i = 0; i < 20; ++i) {
      const NodeMultiset s = saturate(random_admissible(p, 20, rng));
      CHECK(saturate(s) == s);
      for (std::int64_t n = -20; n <= 20; ++n) {
        if (n != 0) CHECK(s.block_count(n) == p.block_capacity());
      }
    }
  }
}

TEST_CASE("weierstrass_product: value at 0 and at nodes") {
  const NodeMultiset g = integer_grid(32);
  CHECK(weierstrass_product(g, 0.0, 32) == cplx{1.0, 0.0});
  for (int k : {-7, -1, 1, 3, 20}) CHECK(weierstrass_product(g, static_cast<double>(k), 32) == cplx{0.0, 0.0});
}

TEST_CASE("weierstrass_product: integer lattice reproduces sin(pi z)/(pi z)") {
  const NodeMultiset g = integer_grid(64);
  CHECK(std::abs(weierstrass_product(g, 0.5, 64) - 2.0 / kPi) < 1e-6);
  for (double z = -10.0; z <= 10.0; z += 0.173) {
    const double exact = std::sin(kPi * z) / (kPi * z);
    CHECK(std::abs(weierstrass_product(g, z, 64) - exact) < 1e-6);
  }
}

TEST_CASE("weierstrass_product: paired partial products settle") {
  Rng rng(4);
  const NodeMultiset s = saturate(random_admissible(kUnit, 256, rng));
  const cplx z{2.3, 0.7};
  double worst = 0.0;
  for (std::int64_t A = 16; A < 256; A *= 2) {
    const cplx a = weierstrass_product(s, z, A, Tail::kNone);
    const cplx b = weierstrass_product(s, z, 2 * A, Tail::kNone);
    worst = std::max(worst, std::abs(a - b) * static_cast<double>(A));
  }
  CHECK(worst < 200.0);
}

TEST_CASE("weierstrass_product: growth along the imaginary axis") {
  Rng rng(6);
  const NodeMultiset s = saturate(random_admissible(kUnit, 64, rng));
  for (double y = -8.0; y <= 8.0; y += 0.5) {
    CHECK(std::abs(weierstrass_product(s, cplx{0.0, y}, 64)) <= 50.0 * std::exp(kPi * std::abs(y)));
  }
}

TEST_CASE("window_kernel: normalization, symmetry and decay") {
  CHECK(std::abs(window_kernel(kUnit, 0.0) - 1.0) < 1e-9);
  for (double t : {0.3, 1.7, 12.0}) CHECK(window_kernel(kUnit, t) == window_kernel(kUnit, -t));
  for (double t = 0.0; t < 40.0; t += 0.77) CHECK(std::abs(window_kernel(kUnit, t)) <= 1.0 + 1e-12);
  CHECK(std::abs(window_kernel(kUnit, 50.0 / kUnit.tau)) < 1e-6);
}

TEST_CASE("phi_lambda: one at its centre, zero at the other nodes") {
  Rng rng(21);
  const NodeMultiset m = random_admissible(kUnit, 32, rng);
  for (double centre : {0.0, m.entries().at(5).position}) {
    CHECK(std::abs(phi_lambda(m, centre, std::nullopt, 0.0, centre) - 1.0) < 1e-9);
    for (const Node& e : m.entries()) {
      if (e.position != centre) CHECK(std::abs(phi_lambda(m, e.position, std::nullopt, 0.0, centre)) < 1e-4);
    }
  }
}

TEST_CASE("phi_lambda: stays under the decay envelope") {
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back(-32.0 + 64.0 * i / 999.0);
  const DecayEstimate k = decay_constant(kUnit, grid, 1, 20);
  CHECK(k.k_hat >= 1.0);
  Rng rng(1);
  const NodeMultiset m = random_admissible(kUnit, 64, rng);
  const InterpolationKernel phi(m, 0.0, 0.0);
  for (double x : grid) CHECK(std::abs(phi(x)) * (1.0 + x * x) <= k.k_hat * (1.0 + 1e-12));
}

TEST_CASE("truncation_radius: monotone in eps and minimal at r = 0") {
  RadiusSearch search;
  search.family_size = 20;
  const RadiusCertificate a = truncation_radius(3.0, 1e-3, kUnit, search);
  const RadiusCertificate b = truncation_radius(3.0, 2e-3, kUnit, search);
  REQUIRE(a.certified);
  REQUIRE(b.certified);
  CHECK(b.radius <= a.radius);
  const RadiusCertificate z = truncation_radius(0.0, 1e-3, kUnit, search);
  CHECK(z.certified);
  CHECK(z.radius == 1.0);
}

TEST_CASE("truncation_radius: relative certificate holds against the full product") {
  const RadiusCertificate c = truncation_radius(5.0, 1e-3, kUnit);
  REQUIRE(c.certified);
  Rng rng(99);
  for (int i = 0; i < 10; ++i) {
    const NodeMultiset s = saturate(random_admissible(kUnit, 64, rng));
    for (double angle = 0.0; angle < 6.28; angle += 0.5) {
      const cplx z = std::polar(5.0, angle);
      const cplx full = weierstrass_product(s, z, 64);
      const cplx cut = direct_truncated(s, z, c.radius);
      CHECK(std::abs(full - cut) <= 1e-3 * std::abs(cut));
    }
  }
}

TEST_CASE("locality: identical multisets and far-only differences") {
  Rng rng(31);
  const NodeMultiset a = random_admissible(kUnit, 64, rng);
  CHECK(locality_gap(a, a, 8.0, 3.0) == 0.0);
  RadiusSearch search;
  search.family_size = 20;
  const RadiusCertificate c = locality_radius(3.0, 1e-3, kUnit, search);
  REQUIRE(c.certified);
  const NodeMultiset b = resample_outside(a, c.radius, rng);
  CHECK(locality_gap(a, b, c.radius, 3.0) < 1e-3);
}

TEST_CASE("locality: pairs that differ inside the radius are refused") {
  Rng rng(32);
  const NodeMultiset a = random_admissible(kUnit, 32, rng);
  const NodeMultiset b = resample_outside(a, 2.0, rng);
  CHECK_THROWS_AS((void)locality_gap(a, b, 16.0, 1.0), Error);
}

TEST_CASE("decay_constant: at least one, monotone in the family, stable across seeds") {
  std::vector<double> grid;
  for (int i = -64; i <= 64; ++i) grid.push_back(0.5 * i);
  const DecayEstimate small = decay_constant(kUnit, grid, 5, 10);
  const DecayEstimate large = decay_constant(kUnit, grid, 5, 20);
  CHECK(small.k_hat >= 1.0);
  CHECK(large.k_hat >= small.k_hat);
  const DecayEstimate other = decay_constant(kUnit, grid, 6, 20);
  CHECK(std::isfinite(large.k_hat));
  CHECK(std::abs(other.k_hat / large.k_hat - 1.0) < 0.1);
}
