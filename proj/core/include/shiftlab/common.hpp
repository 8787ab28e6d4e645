#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shiftlab {

using Scalar = std::complex<double>;

enum class ScalarField { Real, Complex };

std::string to_string(ScalarField field);
ScalarField field_from_string(const std::string& name);

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
// (sqrt 5 - 1) / 2
inline constexpr double kPhi = std::numbers::phi - 1.0;

// Addressing a point or block that does not exist, mixing spaces, composing
// maps with incompatible domains.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters that break the preconditions of a construction.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A finite budget or truncation too small for the request. `achieved` says
// how far the computation got (a depth, a count, ...).
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, long long achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  long long achieved() const { return achieved_; }

 private:
  long long achieved_;
};

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

inline double angle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a - b));
  return std::min(d, kTwoPi - d);
}

}  // namespace shiftlab
