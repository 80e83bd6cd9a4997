#ifndef NCERG_RANDOM_HPP_
#define NCERG_RANDOM_HPP_

// Seeded random fixtures: vectors, Hermitian/PSD matrices, unitaries.
// All generators draw from a caller-owned engine so runs are reproducible.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ncerg/core.hpp"

namespace ncerg {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline Matrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = gaussian_complex(rng);
  return m;
}

inline Vector random_unit_vector(Rng& rng, std::size_t n) {
  Vector v = ginibre(rng, n, 1).col(0);
  return v / v.norm();
}

inline Matrix random_hermitian(Rng& rng, std::size_t n) {
  const Matrix g = ginibre(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

// Wishart-type PSD matrix with operator norm scaled to `norm`.
inline Matrix random_psd(Rng& rng, std::size_t n, double norm = 1.0, std::size_t rank = 0) {
  const std::size_t r = rank == 0 ? n : rank;
  const Matrix g = ginibre(rng, n, r);
  Matrix p = g * g.adjoint();
  p = 0.5 * (p + p.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(p);
  const double top = es.eigenvalues().maxCoeff();
  return top > 0.0 ? Matrix(p * (norm / top)) : p;
}

// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
inline Matrix random_unitary(Rng& rng, std::size_t n) {
  const Matrix g = ginibre(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    if (a > 0.0) q.col(i) *= d / a;
  }
  return q;
}

inline Matrix random_diagonal_unitary(Rng& rng, std::size_t n) {
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    d(i, i) = std::polar(1.0, uniform(rng, 0.0, 2.0 * M_PI));
  return d;
}

// Kraus family {A_i} scaled so that sum A_i* A_i <= 1 and sum A_i A_i* <= 1,
// i.e. a subunital, trace-nonincreasing positive map.
inline std::vector<Matrix> random_kraus(Rng& rng, std::size_t n, std::size_t count,
                                        double contraction = 1.0) {
  std::vector<Matrix> ops;
  const auto dim = static_cast<Eigen::Index>(n);
  Matrix left = Matrix::Zero(dim, dim);
  Matrix right = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < count; ++k) {
    ops.push_back(ginibre(rng, n, n));
    left += ops.back().adjoint() * ops.back();
    right += ops.back() * ops.back().adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> el(0.5 * (left + left.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> er(0.5 * (right + right.adjoint()));
  const double top = std::max(el.eigenvalues().maxCoeff(), er.eigenvalues().maxCoeff());
  const double s = std::sqrt(contraction / top);
  for (auto& a : ops) a *= s;
  return ops;
}

// Kraus family of a random mixture of unitaries (unital, trace preserving).
inline std::vector<Matrix> random_unitary_mixture(Rng& rng, std::size_t n, std::size_t count) {
  std::vector<double> w(count);
  double total = 0.0;
  for (auto& x : w) total += (x = uniform(rng, 0.1, 1.0));
  std::vector<Matrix> ops;
  for (std::size_t k = 0; k < count; ++k)
    ops.push_back(std::sqrt(w[k] / total) * random_unitary(rng, n));
  return ops;
}

// Random point on the probability simplex.
inline std::vector<double> random_simplex(Rng& rng, std::size_t count) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(count);
  double total = 0.0;
  for (auto& x : w) total += (x = e(rng));
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace ncerg

#endif  // NCERG_RANDOM_HPP_
