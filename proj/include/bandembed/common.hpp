#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bandembed {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Thrown when a precondition of a library operation is violated.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed range of integers [lo, hi]. Empty when lo > hi.
struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;

  [[nodiscard]] bool empty() const { return lo > hi; }
  [[nodiscard]] std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
  [[nodiscard]] bool contains(std::int64_t k) const { return k >= lo && k <= hi; }
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Positive rational number num/den kept in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

// sin(pi x) and cos(pi x) with exact zeros and units at multiples of 1/2.
double sin_pi(double x);
double cos_pi(double x);

/// e^{2 pi i x}, exact on the quarter lattice.
cplx unit_phase(double x);

/// Floor/ceil of a/b for b > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace bandembed
