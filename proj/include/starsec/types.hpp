#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace starsec {

using cdouble = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// The two half-spaces served by the surface.
enum class Region : int { kReflect = 0, kTransmit = 1 };

inline constexpr std::array<Region, 2> kRegions{Region::kReflect, Region::kTransmit};

constexpr int index(Region k) { return static_cast<int>(k); }
constexpr Region other(Region k) {
  return k == Region::kReflect ? Region::kTransmit : Region::kReflect;
}
inline const char* region_name(Region k) { return k == Region::kReflect ? "r" : "t"; }

/// Fixed-size pair indexed by Region.
template <class T>
struct PerRegion {
  std::array<T, 2> v{};

  T& operator[](Region k) { return v[index(k)]; }
  const T& operator[](Region k) const { return v[index(k)]; }
};

inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kTwoPi = 6.28318530717958647692;

inline double nats_to_bits(double nats) { return nats / kLn2; }

/// Raised when a matrix that must be Hermitian positive definite is not.
class NumericDegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative solver exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps an angle into [0, 2*pi).
inline double wrap_phase(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace starsec
