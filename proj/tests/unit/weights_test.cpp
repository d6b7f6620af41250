#include <doctest.h>

#include <cmath>

#include "bandembed/weights.hpp"

using namespace bandembed;

namespace {

MarkerSeq spaced(std::int64_t gap, std::int64_t lo, std::int64_t hi, std::int64_t L, std::int64_t M) {
  MarkerSeq m;
  m.L = L;
  m.M = M;
  for (std::int64_t n = lo; n <= hi; n += gap) m.entries.push_back({n, 1.0});
  return m;
}

WeightParams tiny() {
  WeightParams p;
  p.R = 2;
  p.M = 1;
  p.L = 1;
  return p;
}

}  // namespace

TEST_CASE("validate_params: threshold arithmetic") {
  WeightParams p;
  CHECK(validate_params(p));
  p.L = 105;
  CHECK_FALSE(validate_params(p));
  WeightParams q;
  q.R = q.M;
  CHECK_FALSE(validate_params(q));
  q.R = 50;
  CHECK_FALSE(validate_params(q));
}

TEST_CASE("bases: surplus of a tile of length L1 + 3") {
  const WeightParams p;
  const Tiling t = compute_tiles(spaced(7, -14, 35, 3, 8), {-10.0, 30.0});
  const Bases b = bases(t, p);
  CHECK(b.a0.at(7) == 3.0);
  CHECK(b.a0.at(14) == 3.0);
}

TEST_CASE("bases: short tiles pay nothing and far points need nothing") {
  const WeightParams p;
  const Tiling t = compute_tiles(spaced(4, -8, 48, 2, 5), {0.0, 40.0});
  const Bases b = bases(t, p);
  for (const auto& [n, a] : b.a0) CHECK(a == 0.0);
  const Tiling wide = compute_tiles(spaced(20, -40, 80, 10, 21), {0.0, 40.0});
  const Bases w = bases(wide, p);
  CHECK(w.b0.count(20) == 0);
  CHECK(w.b0.at(10) == 2.0);
  CHECK(w.b0.at(11) == 1.0);
  CHECK(w.b0.count(12) == 0);
}

TEST_CASE("greedy_rounds: nothing needed means nothing given") {
  const GreedyResult g = greedy_rounds({{0, 5.0}, {3, 1.0}}, {}, tiny());
  for (const auto& [n, row] : g.v) {
    for (double x : row) CHECK(x == 0.0);
  }
}

TEST_CASE("greedy_rounds: hand-run two rounds") {
  const GreedyResult g = greedy_rounds({{0, 3.0}}, {{1, 2.0}}, tiny());
  CHECK(g.v.at(0) == std::vector<double>{0.0, 2.0, 0.0});
  CHECK(g.residual_a.at(0) == 1.0);
  CHECK(g.residual_b.empty());
}

TEST_CASE("greedy_rounds: unmet need is reported") {
  const GreedyResult g = greedy_rounds({{0, 1.0}}, {{1, 2.0}, {5, 1.0}}, tiny());
  CHECK(g.residual_b.at(1) == 1.0);
  CHECK(g.residual_b.at(5) == 1.0);
}

TEST_CASE("finalize: cascade on the hand-run instance") {
  const WeightMatrix w = finalize({{0, {0.0, 2.0, 0.0}}}, tiny());
  CHECK(cascade_A({0.0, 2.0, 0.0}, 2) == std::vector<double>{0.0, 4.0, 0.0});
  CHECK(w.row(0) == std::vector<double>{0.0, 1.0, 0.0});
  CHECK(w.row(9) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(finalize({{0, {0.0, 0.0, 0.0}}}, tiny()).row(0) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("cascade: a first positive entry of at least 2 saturates") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t R = rng.integer(1, 12);
    std::vector<double> x(static_cast<std::size_t>(R + 1), 0.0);
    const auto first = static_cast<std::size_t>(rng.integer(0, R));
    x[first] = rng.uniform(2.0, 5.0);
    for (std::size_t m = 0; m < first; ++m) x[m] = rng.coin() ? rng.uniform(0.0, 3.0) : 0.0;
    WeightParams p;
    p.R = R;
    CHECK(finalize({{0, x}}, p).row(0)[first] == 1.0);
  }
}

TEST_CASE("cascade: sparsity of large entries") {
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t R = rng.integer(1, 20);
    std::vector<double> x(static_cast<std::size_t>(R + 1));
    for (double& e : x) e = rng.coin(0.3) ? rng.uniform(0.0, 3.0) : 0.0;
    const std::vector<double> y = cascade_A(x, R);
    const auto big = [](const std::vector<double>& v) { return std::count_if(v.begin(), v.end(), [](double e) { return e > 1.0; }); };
    CHECK(big(y) <= 1 + big(x));
  }
}

TEST_CASE("cascade_alpha and cascade_beta endpoints") {
  CHECK(cascade_alpha(0.0, 7) == 7.0);
  CHECK(cascade_alpha(1.0, 7) == 1.0);
  CHECK(cascade_alpha(9.0, 7) == 1.0);
  CHECK(cascade_beta(0.0) == 0.0);
  CHECK(cascade_beta(1.5) == 0.5);
  CHECK(cascade_beta(2.0) == 1.0);
}

TEST_CASE("surplus_check: empty neighbourhoods and exact spacing") {
  const WeightParams p;
  MarkerSeq single;
  single.L = 106;
  single.M = 110;
  single.entries = {{500, 1.0}};
  const Tiling lone = compute_tiles(single, {0.0, 1000.0});
  CHECK(surplus_check(lone, p, 100.0));
  const Tiling even = compute_tiles(spaced(106, -212, 3212, 106, 110), {0.0, 3000.0});
  for (double a : {300.0, 1000.0, 2000.0}) CHECK(surplus_check(even, p, a));
}

TEST_CASE("surplus_check: too small L leaves need unmet") {
  WeightParams p;
  p.L1 = 6.0;
  p.L = 8;
  p.M = 10;
  p.R = 20;
  CHECK_FALSE(validate_params(p));
  const Tiling t = compute_tiles(spaced(8, -40, 240, 8, 10), {0.0, 200.0});
  CHECK_FALSE(surplus_check(t, p, 60.0));
  const WeightRun run = run_weights(spaced(8, -40, 240, 8, 10), {0.0, 200.0}, p);
  CHECK_FALSE(run.greedy.residual_b.empty());
  CHECK_FALSE(verify_conditions(run, p).residual_zero);
}

TEST_CASE("short tiles only: all weights vanish") {
  WeightParams p;
  p.L1 = 4.0;
  const WeightRun run = run_weights(spaced(4, -100, 1100, 2, 5), {0.0, 1000.0}, p);
  for (const auto& [n, row] : run.weights.w) {
    for (double x : row) CHECK(x == 0.0);
  }
}

TEST_CASE("weight conditions on random instances") {
  const WeightParams p;
  Rng rng(10);
  std::int64_t wild = 0;
  for (int i = 0; i < 50; ++i) {
    const MarkerSeq m = random_markers(p.L, p.M, -3 * p.M, 1500 + 3 * p.M, rng);
    const WeightRun run = run_weights(m, {0.0, 1500.0}, p);
    const WeightRun shifted = run_weights(shift_markers(m, 1), {-1.0, 1499.0}, p);
    const WeightReport r = verify_conditions(run, p, &shifted);
    CHECK(r.all());
    wild += r.wild_points;
    const Interior in = interior_of(run.tiling, p);
    for (std::int64_t k = in.receiver_lo; k <= in.receiver_hi; ++k) {
      double got = 0.0;
      for (std::int64_t m2 = 0; m2 <= p.R; ++m2) {
        auto it = run.greedy.v.find(k - m2);
        if (it != run.greedy.v.end()) got += it->second[static_cast<std::size_t>(m2)];
      }
      const auto b = run.base.b0.find(k);
      CHECK(std::abs(got - (b == run.base.b0.end() ? 0.0 : b->second)) < 1e-9);
    }
  }
  CHECK(wild == 0);
}

TEST_CASE("weight conditions with wild points present") {
  WeightParams p;
  p.L0 = 6.0;
  p.L = 666;
  p.M = 1500;
  p.R = 3200;
  REQUIRE(validate_params(p));
  Rng rng(12);
  std::int64_t wild = 0;
  for (int i = 0; i < 5; ++i) {
    const MarkerSeq m = random_markers(p.L, p.M, -3 * p.M, 12000 + 3 * p.M, rng);
    const WeightRun run = run_weights(m, {0.0, 12000.0}, p);
    const WeightRun shifted = run_weights(shift_markers(m, 1), {-1.0, 11999.0}, p);
    const WeightReport r = verify_conditions(run, p, &shifted);
    CHECK(r.all());
    wild += r.wild_points;
  }
  CHECK(wild > 0);
}
