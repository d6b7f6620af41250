#include <doctest.h>

#include <cmath>
#include <string>

#include "bandembed/systems.hpp"

using namespace bandembed;

namespace {

const double kAlpha = std::sqrt(2.0) - 1.0;
const double kGolden = 0.5 * (3.0 - std::sqrt(5.0));

std::string word_string(const SubshiftWindow& w) {
  std::string s;
  for (auto b : w.word) s += static_cast<char>('0' + b);
  return s;
}

}  // namespace

TEST_CASE("rotation_embed: closed-form values") {
  CHECK(rotation_embed({kAlpha, 0.0}, {0, 0}).at(0) == 1.0);
  CHECK(rotation_embed({kAlpha, 0.5}, {0, 0}).at(0) == 0.0);
}

TEST_CASE("rotation_embed: distinct points give distinct signals") {
  Rng rng(1);
  double worst = INFINITY;
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    if (x == y) continue;
    const DiscreteSignal a = rotation_embed({kAlpha, x}, {-50, 50});
    const DiscreteSignal b = rotation_embed({kAlpha, y}, {-50, 50});
    double gap = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) gap = std::max(gap, std::abs(a.values[k] - b.values[k]));
    worst = std::min(worst, gap);
  }
  CHECK(worst > 0.0);
}

TEST_CASE("rotation_embed: advancing the point shifts the signal") {
  const double x = 0.137;
  const DiscreteSignal a = rotation_embed({kAlpha, x + kAlpha}, {-20, 20});
  const DiscreteSignal b = rotation_embed({kAlpha, x}, {-19, 21});
  for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(std::abs(a.values[k] - b.values[k]) < 1e-12);
}

TEST_CASE("near_rational flags rational rotation numbers") {
  CHECK(near_rational(0.375).has_value());
  CHECK_FALSE(near_rational(kAlpha).has_value());
}

TEST_CASE("marker_function: arc avoids its first translate") {
  const Rotation r{kAlpha, 0.0};
  const MarkerFunction h = marker_function(r, 1);
  CHECK(2.0 * h.half_width < std::min(kAlpha, 1.0 - kAlpha));
  CHECK(h(0.0) == 1.0);
  CHECK(h(0.5) == 0.0);
  CHECK(h(h.half_width) == 0.0);
  const MarkerSeq seq = orbit_markers(r, h, {-500, 500});
  CHECK(seq.invariant_violation().empty());
}

TEST_CASE("marker_function: near-rational rotation has no arc") {
  CHECK_THROWS_AS((void)marker_function({0.5, 0.0}, 3), Error);
}

TEST_CASE("marker_encode: empty marker gives the zero signal") {
  const Rotation r{kAlpha, 0.5};
  MarkerFunction h;
  h.half_width = 1e-9;
  const BandSignal g = marker_encode(r, h, {0.5, 1.5}, {-5, 5});
  for (double t : {-2.0, 0.0, 0.7, 4.0}) CHECK(eval(g, t) == cplx{0.0, 0.0});
}

TEST_CASE("marker_encode: a single marker is the carrier times the kernel") {
  const Rotation r{kAlpha, 0.0};
  MarkerFunction h;
  h.half_width = 0.01;
  const BandSignal g = marker_encode(r, h, {0.5, 1.5}, {0, 0});
  CHECK(std::abs(eval(g, 0.0) - 1.0) < 1e-9);
  const BandSignal gi = marker_encode(r, h, {0.5, 2.5}, {0, 0}, EncodeKernel::kInterpolation);
  CHECK(std::abs(eval(gi, 0.0) - 1.0) < 1e-9);
}

TEST_CASE("marker_encode: output stays in its band") {
  const Rotation r{kAlpha, 0.2};
  const MarkerFunction h = marker_function(r, 3);
  const Band band{0.5, 1.5};
  const BandSignal g = marker_encode(r, h, band, {-60, 60});
  CHECK(band_check(g, band, {-0.5, 0.0, 2.0, 2.5}).pass);
}

TEST_CASE("sturmian_window: Fibonacci prefix and balance") {
  const SubshiftWindow w = sturmian_window(kGolden, 0.0, {1, 13});
  CHECK(word_string(w) == "0100101001001");
  CHECK(is_balanced(w.word));
  CHECK_FALSE(w.degenerate);
  CHECK(is_balanced(sturmian_window(kAlpha, 0.3, {-200, 200}).word));
  CHECK_FALSE(is_balanced({1, 1, 0, 0}));
}

TEST_CASE("sturmian_window: slope zero is all zeros and flagged") {
  const SubshiftWindow w = sturmian_window(0.0, 0.0, {0, 20});
  for (auto b : w.word) CHECK(b == 0);
  CHECK(w.degenerate);
}

TEST_CASE("discrete_tiles: equidistant point joins the left tile") {
  const auto tiles = discrete_tiles({0, 10}, {-20, 20});
  REQUIRE(tiles.size() == 2);
  CHECK(tiles[0] == std::pair<std::int64_t, std::int64_t>{-20, 26});
  CHECK(tiles[1] == std::pair<std::int64_t, std::int64_t>{6, 15});
}

TEST_CASE("toy_encode: one marker, one tile") {
  const SubshiftWindow x = sturmian_window(kGolden, 0.1, {-10, 10});
  const DiscreteSignal g = toy_encode(x, {0}, BlockMaps{}, {-5, 5}, {-5, 5});
  for (std::int64_t t = -5; t <= 5; ++t) CHECK(g.at(t) == static_cast<double>(x.at(t)));
  BlockMaps noisy;
  noisy.kind = BlockMaps::Kind::kNoisy;
  const DiscreteSignal h = toy_encode(x, {0}, noisy, {-5, 5}, {-5, 5});
  std::vector<std::uint8_t> block;
  for (std::int64_t t = -5; t <= 5; ++t) block.push_back(x.at(t));
  for (std::int64_t t = -5; t <= 5; ++t) CHECK(h.at(t) == noisy.value(block, static_cast<std::size_t>(t + 5)));
}

TEST_CASE("toy_encode: equal words, equal signals; a flipped bit shows up") {
  SubshiftWindow x = sturmian_window(kGolden, 0.1, {-40, 40});
  const std::vector<std::int64_t> markers{-30, -12, 7, 25};
  const DiscreteSignal a = toy_encode(x, markers, BlockMaps{}, {-20, 20}, {-35, 35});
  CHECK(toy_encode(x, markers, BlockMaps{}, {-20, 20}, {-35, 35}).values == a.values);
  SubshiftWindow y = x;
  y.word[static_cast<std::size_t>(0 - y.window.lo)] ^= 1;
  const DiscreteSignal b = toy_encode(y, markers, BlockMaps{}, {-20, 20}, {-35, 35});
  CHECK(a.at(0) != b.at(0));
}

TEST_CASE("toy_encode: missing block map is reported") {
  const SubshiftWindow x = sturmian_window(kGolden, 0.1, {-10, 10});
  BlockMaps short_maps;
  short_maps.max_length = 4;
  CHECK_THROWS_AS((void)toy_encode(x, {0}, short_maps, {-5, 5}, {-5, 5}), Error);
}

TEST_CASE("toy_encode: shifting word and markers shifts the signal") {
  Rng rng(3);
  const std::vector<std::int64_t> markers{-50, -31, -9, 12, 30, 51};
  for (int i = 0; i < 50; ++i) {
    const SubshiftWindow x = sturmian_window(rng.uniform(0.2, 0.8), rng.uniform(), {-80, 80});
    const std::int64_t k = rng.integer(-5, 5);
    std::vector<std::int64_t> moved = markers;
    for (auto& m : moved) m -= k;
    const DiscreteSignal a = toy_encode(x, markers, BlockMaps{}, {-20, 20}, {-60, 60});
    const DiscreteSignal b = toy_encode(shift_word(x, k), moved, BlockMaps{}, {-20 - k, 20 - k}, {-60 - k, 60 - k});
    CHECK(a.values == b.values);
  }
}

TEST_CASE("word and Bowen distances") {
  const SubshiftWindow x = sturmian_window(kGolden, 0.1, {-20, 20});
  CHECK(word_distance(x, x) == std::ldexp(1.0, -21));
  SubshiftWindow y = x;
  y.word[static_cast<std::size_t>(3 - y.window.lo)] ^= 1;
  CHECK(word_distance(x, y) == 0.125);
  CHECK(word_distance(x, y, 3) == 1.0);
  CHECK(bowen_distance(x, y, 0, 3) == 1.0);
  CHECK(bowen_distance(x, y, -5, 2) == word_distance(x, y, -3));
}

TEST_CASE("find_cylinder_markers: occurrences farther apart than N") {
  const SubshiftWindow y = sturmian_window(kGolden, 0.0, {-200, 200});
  const auto c = find_cylinder_markers(y, 8);
  REQUIRE(c.has_value());
  REQUIRE(c->positions.size() >= 2);
  for (std::size_t i = 1; i < c->positions.size(); ++i) CHECK(c->positions[i] - c->positions[i - 1] > 8);
  CHECK(cylinder_positions(y, c->cylinder) == c->positions);
}

TEST_CASE("toy_verify: identical words pass, random pairs have no violations") {
  const SubshiftWindow y = sturmian_window(kGolden, 0.0, {-200, 200});
  const auto c = find_cylinder_markers(y, 8);
  REQUIRE(c.has_value());
  const SubshiftWindow x = sturmian_window(0.4, 0.3, {-200, 200});
  ToyReport same = toy_verify({{x, x}}, c->positions, BlockMaps{}, ToySetup{});
  CHECK(same.equal_images == 1);
  CHECK(same.violations == 0);
  Rng rng(5);
  std::vector<std::pair<SubshiftWindow, SubshiftWindow>> pairs;
  for (int i = 0; i < 300; ++i) {
    const double slope = rng.uniform(0.2, 0.8);
    const double icpt = rng.uniform();
    const double off = (rng.coin() ? 1.0 : -1.0) * std::pow(10.0, -rng.uniform(0.5, 4.5));
    pairs.emplace_back(sturmian_window(slope, icpt, {-200, 200}), sturmian_window(slope, icpt + off, {-200, 200}));
  }
  for (auto kind : {BlockMaps::Kind::kIdentity, BlockMaps::Kind::kNoisy}) {
    BlockMaps G;
    G.kind = kind;
    const ToyReport r = toy_verify(pairs, c->positions, G, ToySetup{});
    CHECK(r.violations == 0);
    CHECK(r.key_step_failures == 0);
    CHECK(r.tube_failures == 0);
  }
}
