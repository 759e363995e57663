#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace em1d {

using Complex = std::complex<double>;

using Vec2c = Eigen::Matrix<Complex, 2, 1>;
using Vec6c = Eigen::Matrix<Complex, 6, 1>;
using Mat2c = Eigen::Matrix<Complex, 2, 2>;
using Mat6c = Eigen::Matrix<Complex, 6, 6>;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// Raised when an operation's precondition is violated by its arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails to meet its own acceptance gate
/// (polishing that does not converge, quadrature that does not reach
/// tolerance, an ambiguous branch assignment, a solver blow-up).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

/// O1 = (0 -1; 1 0), the rotation generator coupling transverse components.
inline Mat2c rotation_generator() {
  Mat2c o;
  o << 0.0, -1.0, 1.0, 0.0;
  return o;
}

}  // namespace em1d
