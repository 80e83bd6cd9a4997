#ifndef NCERG_CORE_HPP_
#define NCERG_CORE_HPP_

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ncerg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = std::vector<std::size_t>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the domain of the requested operation
// (non-PSD input to a fractional power, p < 1, root-of-unity rotation, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A weight sequence was read past its materialized horizon.
class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

// Relative tolerances shared by all modules. Order checks compare against
// tol * scale with scale = max(1, operator norms of the inputs).
struct Tolerances {
  double loewner = 1e-9;
  double hermitian = 1e-10;
  double certificate = 1e-8;
  double convergence = 1e-6;
  double unimodular = 1e-9;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace ncerg

#endif  // NCERG_CORE_HPP_
