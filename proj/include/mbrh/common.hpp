// Shared scalar/matrix aliases, side tags and error types.
// SPDX-License-Identifier: MIT
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mbrh {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Boundary-value selector. Plus is the limit from the left of an oriented
// contour piece, Minus from the right.
enum class Side { None, Plus, Minus };

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Bad or inconsistent user configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure: ill-conditioning, non-finite values, failed brackets
// (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// File system failures (CLI exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

inline Mat2 sigma1() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}
inline Mat2 sigma2() {
  Mat2 m;
  m << 0, -kI, kI, 0;
  return m;
}
inline Mat2 sigma3() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}
inline Mat2 mat2(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

// A point given as anchor + offset. Evaluations near a branch point or a
// junction use the offset directly, since anchor + offset may round to the
// anchor itself.
struct LocalPoint {
  cplx anchor{};
  cplx offset{};
  cplx z() const { return anchor + offset; }
};

inline LocalPoint at(cplx z) { return LocalPoint{z, cplx{}}; }

}  // namespace mbrh
