#include <doctest.h>

#include <cmath>

#include "bandembed/bandlimited.hpp"
#include "bandembed/rng.hpp"

using namespace bandembed;

namespace {

BandSignal sinc_sum(std::vector<double> nodes, std::vector<cplx> coeffs, double width) {
  BandSignal s;
  s.nodes = std::move(nodes);
  s.coeffs = std::move(coeffs);
  s.kernel = SincKernel{width};
  return s;
}

double sinc(double w, double t) { return t == 0.0 ? 1.0 : std::sin(kPi * w * t) / (kPi * w * t); }

BandSignal random_signal(Rng& rng) {
  std::vector<double> nodes;
  std::vector<cplx> coeffs;
  for (int k = 0; k < 4; ++k) {
    nodes.push_back(rng.uniform(-6.0, 6.0));
    coeffs.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return sinc_sum(nodes, coeffs, 0.8);
}

}  // namespace

TEST_CASE("eval: single node at the origin") {
  CHECK(eval(sinc_sum({0.0}, {1.0}, 1.0), 0.0) == cplx{1.0, 0.0});
}

TEST_CASE("eval: empty signal is zero everywhere") {
  const BandSignal s = sinc_sum({}, {}, 1.0);
  for (double t : {-3.0, 0.0, 0.25, 7.5}) CHECK(eval(s, t) == cplx{0.0, 0.0});
}

TEST_CASE("eval: two sinc nodes match direct summation") {
  const cplx v = eval(sinc_sum({0.0, 1.0}, {1.0, 1.0}, 1.0), 0.5);
  const double direct = sinc(1.0, 0.5) + sinc(1.0, -0.5);
  CHECK(v.real() == doctest::Approx(direct).epsilon(1e-14));
  CHECK(v.real() == doctest::Approx(4.0 / kPi).epsilon(1e-14));
  CHECK(std::abs(v.imag()) < 1e-15);
}

TEST_CASE("metric_d: identity, symmetry and constant signals") {
  Rng rng(3);
  const BandSignal a = random_signal(rng);
  const BandSignal b = random_signal(rng);
  CHECK(metric_d(a, a) == 0.0);
  CHECK(metric_d(a, b) == metric_d(b, a));
  const BandSignal one = complex_tone(0.0);
  const BandSignal zero = sinc_sum({}, {}, 1.0);
  CHECK(metric_d(one, zero, 30) == doctest::Approx(1.0 - std::ldexp(1.0, -30)).epsilon(1e-15));
}

TEST_CASE("metric_d: pseudometric on random triples") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const BandSignal a = random_signal(rng);
    const BandSignal b = random_signal(rng);
    const BandSignal c = random_signal(rng);
    const double ab = metric_d(a, b, 8, 1.0 / 8.0);
    const double bc = metric_d(b, c, 8, 1.0 / 8.0);
    const double ac = metric_d(a, c, 8, 1.0 / 8.0);
    REQUIRE(ab >= 0.0);
    REQUIRE(ab == metric_d(b, a, 8, 1.0 / 8.0));
    REQUIRE(ac <= ab + bc + 1e-12);
  }
}

TEST_CASE("band_check: tone inside the band has no leakage at outside probes") {
  const Band band{1.0, 2.0};
  const BandCheckReport r = band_check(complex_tone(1.5), band, {0.0, 3.0});
  CHECK(r.pass);
  for (const auto& p : r.probes) CHECK(p.leakage < 1e-3);
}

TEST_CASE("band_check: zero signal leaks nothing") {
  const BandCheckReport r = band_check(sinc_sum({}, {}, 1.0), {1.0, 2.0}, {0.0, 3.0});
  CHECK(r.pass);
  for (const auto& p : r.probes) CHECK(p.leakage == 0.0);
}

TEST_CASE("band_check: tone at the probe frequency fails") {
  const BandCheckReport r = band_check(complex_tone(3.0), {1.0, 2.0}, {3.0});
  CHECK_FALSE(r.pass);
  CHECK(r.probes.at(0).leakage > 0.5);
}

TEST_CASE("band_check: short window yields a diagnostic") {
  BandCheckConfig cfg;
  cfg.half_window = 2.0;
  const BandCheckReport r = band_check(complex_tone(1.5), {1.0, 2.0}, {2.5}, 1e-3, cfg);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("realify: real input unchanged, imaginary constant vanishes") {
  Rng rng(5);
  BandSignal s = random_signal(rng);
  for (auto& c : s.coeffs) c = {c.real(), 0.0};
  const BandSignal r = realify(s);
  for (double t = -4.0; t <= 4.0; t += 0.37) CHECK(eval(r, t) == eval(s, t));
  const BandSignal imag = realify(complex_tone(0.0, {0.0, 1.0}));
  for (double t : {-1.0, 0.0, 0.3}) CHECK(eval(imag, t) == cplx{0.0, 0.0});
}

TEST_CASE("realify: unit tone becomes the cosine") {
  const BandSignal c = realify(complex_tone(1.0));
  CHECK(eval(c, 0.0).real() == doctest::Approx(1.0));
  CHECK(std::abs(eval(c, 0.25).real()) < 1e-15);
  CHECK(eval(c, 0.5).real() == doctest::Approx(-1.0));
  CHECK(eval(c, 0.5).imag() == 0.0);
}

TEST_CASE("sample: sin(2 pi t) on the half-integer lattice is identically zero") {
  const SampleTrack tr = sample(sine_tone(1.0), 0.5, {-200, 200});
  for (cplx v : tr.values) CHECK(v == cplx{0.0, 0.0});
}

TEST_CASE("sample: constants and a slow cosine") {
  const SampleTrack ones = sample(complex_tone(0.0), 0.37, {-5, 5});
  for (cplx v : ones.values) CHECK(v == cplx{1.0, 0.0});
  const SampleTrack c = sample(realify(complex_tone(0.3)), 0.5, {0, 1});
  CHECK(c.values.at(0).real() == doctest::Approx(1.0));
  CHECK(c.values.at(1).real() == doctest::Approx(std::cos(0.3 * kPi)).epsilon(1e-14));
}

TEST_CASE("sample: agrees with direct evaluation") {
  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const BandSignal s = random_signal(rng);
    const double step = rng.uniform(0.1, 1.0);
    const SampleTrack tr = sample(s, step, {-10, 10});
    for (std::int64_t k = -10; k <= 10; ++k) {
      CHECK(tr.values.at(static_cast<std::size_t>(k + 10)) == eval(s, static_cast<double>(k) * step));
    }
  }
}

TEST_CASE("stress: below the critical rate nothing collides") {
  const StressReport r = sampling_injectivity_stress(0.4, 1, 200, 9);
  CHECK(r.hypothesis_holds);
  CHECK(r.violations == 0);
  CHECK(r.min_ratio > 0.0);
}

TEST_CASE("stress: at the boundary the sine witness collides") {
  const StressReport r = sampling_injectivity_stress(1.0, 2, 20, 9);
  CHECK_FALSE(r.hypothesis_holds);
  REQUIRE(r.nyquist_sampled_gap.has_value());
  CHECK(*r.nyquist_sampled_gap == 0.0);
  CHECK(*r.nyquist_continuous_gap > 0.5);
}

TEST_CASE("stress: zero trials give an empty report") {
  const StressReport r = sampling_injectivity_stress(0.4, 1, 0, 1);
  CHECK(r.trials == 0);
  CHECK(r.violations == 0);
}

TEST_CASE("spectrum hull and validation") {
  BandSignal s = sinc_sum({0.0}, {1.0}, 2.0);
  s.carrier = 3.0;
  const Interval h = spectrum_hull(s);
  CHECK(h.lo == doctest::Approx(2.0));
  CHECK(h.hi == doctest::Approx(4.0));
  BandSignal bad = sinc_sum({0.0, 1.0}, {1.0}, 1.0);
  CHECK_THROWS_AS(bad.validate(), Error);
}
