#include "bandembed/common.hpp"

#include <cmath>

#include "bandembed/rng.hpp"

namespace bandembed {

namespace {

// Reduce x to r in [-1, 1) with x = r + 2k; exact in binary floating point.
double reduce_mod2(double x) {
  double r = std::fmod(x, 2.0);
  if (r >= 1.0) r -= 2.0;
  if (r < -1.0) r += 2.0;
  return r;
}

}  // namespace

double sin_pi(double x) {
  const double r = reduce_mod2(x);
  if (r == 0.0 || r == -1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == -0.5) return -1.0;
  return std::sin(kPi * r);
}

double cos_pi(double x) {
  const double r = reduce_mod2(x);
  if (r == 0.0) return 1.0;
  if (r == -1.0) return -1.0;
  if (r == 0.5 || r == -0.5) return 0.0;
  return std::cos(kPi * r);
}

cplx unit_phase(double x) { return {cos_pi(2.0 * x), sin_pi(2.0 * x)}; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace bandembed
