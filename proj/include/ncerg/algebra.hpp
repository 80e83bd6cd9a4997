#ifndef NCERG_ALGEBRA_HPP_
#define NCERG_ALGEBRA_HPP_

// Finite-dimensional semifinite algebra M_N(C) with a weighted trace:
// Hermitian operators, Loewner order, functional calculus, spectral
// projections and noncommutative L_p norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ncerg/core.hpp"

namespace ncerg {

// Dimension N and trace weights w_i > 0, tau(x) = sum_i w_i x_ii.
class AlgebraContext {
 public:
  explicit AlgebraContext(std::size_t dim) : dim_(dim), weights_(dim, 1.0) {
    if (dim == 0) throw DomainError("AlgebraContext: dimension must be positive");
  }

  AlgebraContext(std::size_t dim, std::vector<double> weights)
      : dim_(dim), weights_(std::move(weights)) {
    if (dim == 0) throw DomainError("AlgebraContext: dimension must be positive");
    if (weights_.size() != dim_)
      throw DimensionMismatch("AlgebraContext: trace weight count != dim");
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w))
        throw DomainError("AlgebraContext: trace weights must be finite and > 0");
    }
  }

  std::size_t dim() const { return dim_; }
  const std::vector<double>& weights() const { return weights_; }

  bool unit_weights() const {
    return std::all_of(weights_.begin(), weights_.end(),
                       [](double w) { return w == 1.0; });
  }

  double tau_one() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  Complex tau(const Matrix& x) const {
    check(x);
    Complex s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      s += weights_[i] * x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    return s;
  }

  void check(const Matrix& x) const {
    if (x.rows() != static_cast<Eigen::Index>(dim_) ||
        x.cols() != static_cast<Eigen::Index>(dim_)) {
      std::ostringstream os;
      os << "matrix is " << x.rows() << "x" << x.cols()
         << ", algebra dimension is " << dim_;
      throw DimensionMismatch(os.str());
    }
  }

  friend bool operator==(const AlgebraContext& a, const AlgebraContext& b) {
    return a.dim_ == b.dim_ && a.weights_ == b.weights_;
  }

 private:
  std::size_t dim_;
  std::vector<double> weights_;
};

using Context = std::shared_ptr<const AlgebraContext>;

inline Context make_context(std::size_t dim) {
  return std::make_shared<const AlgebraContext>(dim);
}

inline Context make_context(std::size_t dim, std::vector<double> weights) {
  return std::make_shared<const AlgebraContext>(dim, std::move(weights));
}

inline void require_same_context(const Context& a, const Context& b) {
  if (a.get() == b.get()) return;
  if (!a || !b || !(*a == *b))
    throw DimensionMismatch("operands belong to different algebra contexts");
}

// ---------------------------------------------------------------------------
// Dense helpers

inline double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

inline bool is_diagonal(const Matrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (i != j && x(i, j) != Complex(0.0)) return false;
  return true;
}

inline Matrix adjoint(const Matrix& x) { return x.adjoint(); }

inline Matrix hermitian_part(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

// Eigen-decomposition of a Hermitian matrix. Diagonal inputs are passed
// through exactly so that functional calculus is exact on them.
struct SpectralDecomposition {
  RealVector values;
  Matrix vectors;  // columns are orthonormal eigenvectors
};

inline SpectralDecomposition eigh(const Matrix& a) {
  SpectralDecomposition out;
  const Eigen::Index n = a.rows();
  if (is_diagonal(a)) {
    out.values.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.values(i) = a(i, i).real();
    out.vectors = Matrix::Identity(n, n);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  if (es.info() != Eigen::Success) throw Error("eigh: eigendecomposition failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

inline double min_eigenvalue(const Matrix& a) {
  return eigh(a).values.minCoeff();
}

inline double max_eigenvalue(const Matrix& a) {
  return eigh(a).values.maxCoeff();
}

// ---------------------------------------------------------------------------
// HermitianOperator

class HermitianOperator {
 public:
  // Symmetrizes entries within tol * scale of Hermitian, rejects otherwise.
  HermitianOperator(Context ctx, const Matrix& entries,
                    double tol = default_tolerances().hermitian)
      : ctx_(std::move(ctx)) {
    if (!ctx_) throw Error("HermitianOperator: null context");
    ctx_->check(entries);
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol * scale) {
      std::ostringstream os;
      os << "HermitianOperator: matrix is not Hermitian (asymmetry " << asym << ")";
      throw DomainError(os.str());
    }
    entries_ = hermitian_part(entries);
  }

  static HermitianOperator identity(const Context& ctx) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    return HermitianOperator(ctx, Matrix::Identity(n, n));
  }

  static HermitianOperator zero(const Context& ctx) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    return HermitianOperator(ctx, Matrix::Zero(n, n));
  }

  static HermitianOperator diagonal(const Context& ctx, std::span<const double> d) {
    if (d.size() != ctx->dim()) throw DimensionMismatch("diagonal: wrong length");
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()),
                            static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return HermitianOperator(ctx, m);
  }

  const Matrix& matrix() const { return entries_; }
  const Context& context() const { return ctx_; }
  std::size_t dim() const { return ctx_->dim(); }

  double tau() const { return ctx_->tau(entries_).real(); }
  double norm_inf() const { return operator_norm(entries_); }

  HermitianOperator operator+(const HermitianOperator& o) const {
    require_same_context(ctx_, o.ctx_);
    return HermitianOperator(ctx_, entries_ + o.entries_);
  }
  HermitianOperator operator-(const HermitianOperator& o) const {
    require_same_context(ctx_, o.ctx_);
    return HermitianOperator(ctx_, entries_ - o.entries_);
  }
  HermitianOperator operator*(double s) const {
    return HermitianOperator(ctx_, s * entries_);
  }
  friend HermitianOperator operator*(double s, const HermitianOperator& a) {
    return a * s;
  }

 private:
  Context ctx_;
  Matrix entries_;
};

// ---------------------------------------------------------------------------
// Projection

class Projection {
 public:
  Projection(Context ctx, const Matrix& entries,
             double tol = default_tolerances().hermitian)
      : Projection(ctx, validated(ctx, entries, tol), Trusted{}) {}

  // e = V V* for a matrix V with orthonormal columns (possibly zero columns).
  static Projection from_basis(const Context& ctx, const Matrix& basis) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    if (basis.rows() != n) throw DimensionMismatch("from_basis: wrong row count");
    Matrix e = basis.cols() == 0 ? Matrix(Matrix::Zero(n, n))
                                 : Matrix(basis * basis.adjoint());
    return Projection(ctx, hermitian_part(e), Trusted{});
  }

  static Projection identity(const Context& ctx) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    return Projection(ctx, Matrix::Identity(n, n), Trusted{});
  }

  static Projection zero(const Context& ctx) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    return Projection(ctx, Matrix::Zero(n, n), Trusted{});
  }

  const Matrix& matrix() const { return e_; }
  const Context& context() const { return ctx_; }

  Projection complement() const {
    const auto n = e_.rows();
    return Projection(ctx_, Matrix::Identity(n, n) - e_, Trusted{});
  }

  double tau() const { return ctx_->tau(e_).real(); }
  double tau_complement() const { return ctx_->tau_one() - tau(); }

  std::size_t rank() const {
    return static_cast<std::size_t>(std::llround(e_.trace().real()));
  }

  // Orthonormal basis of the range of e.
  Matrix range_basis() const {
    const auto dec = eigh(e_);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < dec.values.size(); ++i)
      if (dec.values(i) > 0.5) cols.push_back(i);
    Matrix v(e_.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k)
      v.col(static_cast<Eigen::Index>(k)) = dec.vectors.col(cols[k]);
    return v;
  }

  Matrix compress(const Matrix& a) const { return e_ * a * e_; }

  bool is_identity(double tol = 1e-12) const {
    return (e_ - Matrix::Identity(e_.rows(), e_.cols())).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  struct Trusted {};
  Projection(Context ctx, Matrix e, Trusted) : ctx_(std::move(ctx)), e_(std::move(e)) {}

  static Matrix validated(const Context& ctx, const Matrix& e, double tol) {
    if (!ctx) throw Error("Projection: null context");
    ctx->check(e);
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw DomainError("Projection: matrix is not Hermitian");
    if ((e * e - e).cwiseAbs().maxCoeff() > std::sqrt(tol))
      throw DomainError("Projection: matrix is not idempotent");
    return hermitian_part(e);
  }

  Context ctx_;
  Matrix e_;
};

// ---------------------------------------------------------------------------
// Loewner order

inline double loewner_scale(const Matrix& a, const Matrix& b) {
  return std::max({1.0, operator_norm(a), operator_norm(b)});
}

// min eigenvalue of (b - a) divided by max(1, |a|, |b|).
inline double loewner_margin(const Matrix& a, const Matrix& b) {
  return min_eigenvalue(b - a) / loewner_scale(a, b);
}

inline bool loewner_leq(const HermitianOperator& a, const HermitianOperator& b,
                        double tol = default_tolerances().loewner) {
  require_same_context(a.context(), b.context());
  return loewner_margin(a.matrix(), b.matrix()) >= -tol;
}

inline bool is_psd(const Matrix& a, double tol = default_tolerances().loewner) {
  return min_eigenvalue(a) >= -tol * std::max(1.0, operator_norm(a));
}

// ---------------------------------------------------------------------------
// Functional calculus

struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  bool contains(double t) const {
    const bool above = lo_closed ? t >= lo : t > lo;
    const bool below = hi_closed ? t <= hi : t < hi;
    return above && below;
  }

  static Interval all() { return {}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }
  static Interval above(double lo) { return {lo, kInf, false, false}; }
  static Interval at_most(double hi) { return {-kInf, hi, false, true}; }
};

class ScalarFunction {
 public:
  // t -> t^p. Integer exponents apply to the whole real line; other
  // exponents require a nonnegative spectrum.
  static ScalarFunction power(double p) {
    const bool integral = std::floor(p) == p;
    std::ostringstream name;
    name << "t^" << p;
    if (integral && p >= 0.0) {
      const int k = static_cast<int>(p);
      return ScalarFunction([k](double t) { return int_pow(t, k); }, false, name.str());
    }
    return ScalarFunction([p](double t) { return std::pow(t, p); }, true, name.str());
  }

  // t -> t^{1/p}
  static ScalarFunction root(double p) {
    if (!(p > 0.0)) throw DomainError("root: exponent must be positive");
    std::ostringstream name;
    name << "t^(1/" << p << ")";
    return ScalarFunction([p](double t) { return std::pow(t, 1.0 / p); }, true, name.str());
  }

  static ScalarFunction indicator(Interval iv) {
    return ScalarFunction([iv](double t) { return iv.contains(t) ? 1.0 : 0.0; }, false,
                          "indicator");
  }

  static ScalarFunction custom(std::function<double(double)> f, bool needs_nonnegative,
                               std::string name = "custom") {
    return ScalarFunction(std::move(f), needs_nonnegative, std::move(name));
  }

  double operator()(double t) const { return f_(t); }
  bool requires_nonnegative() const { return nonneg_; }
  const std::string& name() const { return name_; }

 private:
  ScalarFunction(std::function<double(double)> f, bool nonneg, std::string name)
      : f_(std::move(f)), nonneg_(nonneg), name_(std::move(name)) {}

  static double int_pow(double t, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= t;
    return r;
  }

  std::function<double(double)> f_;
  bool nonneg_;
  std::string name_;
};

// Applies f to a Hermitian matrix given as raw entries. Eigenvalues in
// [-tol*scale, 0) are clamped to 0 when f needs a nonnegative spectrum;
// anything below that is rejected.
inline Matrix apply_function(const Matrix& a, const ScalarFunction& f,
                             double tol = default_tolerances().loewner) {
  const auto dec = eigh(a);
  RealVector fv(dec.values.size());
  const double scale = std::max(1.0, dec.values.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < dec.values.size(); ++i) {
    double t = dec.values(i);
    if (f.requires_nonnegative() && t < 0.0) {
      if (t < -tol * scale) {
        std::ostringstream os;
        os << f.name() << ": eigenvalue " << t << " is negative beyond tolerance";
        throw DomainError(os.str());
      }
      t = 0.0;
    }
    const double v = f(t);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << f.name() << " undefined at eigenvalue " << t;
      throw DomainError(os.str());
    }
    fv(i) = v;
  }
  Matrix out = dec.vectors * fv.asDiagonal() * dec.vectors.adjoint();
  return is_diagonal(a) ? out : hermitian_part(out);
}

inline HermitianOperator func_calc(const HermitianOperator& a, const ScalarFunction& f,
                                   double tol = default_tolerances().loewner) {
  return HermitianOperator(a.context(), apply_function(a.matrix(), f, tol));
}

inline Matrix matrix_power(const Matrix& a, double p,
                           double tol = default_tolerances().loewner) {
  return apply_function(a, ScalarFunction::power(p), tol);
}

// f applied on the compressed algebra e M e: V f(V* a V) V* with V a basis of e.
inline Matrix apply_function_compressed(const Matrix& a, const Projection& e,
                                        const ScalarFunction& f,
                                        double tol = default_tolerances().loewner) {
  const Matrix v = e.range_basis();
  const auto n = a.rows();
  if (v.cols() == 0) return Matrix::Zero(n, n);
  const Matrix b = hermitian_part(v.adjoint() * a * v);
  return hermitian_part(v * apply_function(b, f, tol) * v.adjoint());
}

// ---------------------------------------------------------------------------
// Spectral projections

inline Projection spectral_projection(const Context& ctx, const Matrix& a,
                                      const Interval& iv) {
  ctx->check(a);
  const auto dec = eigh(a);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < dec.values.size(); ++i)
    if (iv.contains(dec.values(i))) cols.push_back(i);
  Matrix v(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    v.col(static_cast<Eigen::Index>(k)) = dec.vectors.col(cols[k]);
  return Projection::from_basis(ctx, v);
}

inline Projection spectral_projection(const HermitianOperator& a, const Interval& iv) {
  return spectral_projection(a.context(), a.matrix(), iv);
}

// Projection onto the intersection of the ranges, read off the null space
// of sum_j e_j^perp.
inline Projection projection_meet(std::span<const Projection> es, double tol = 1e-9) {
  if (es.empty()) throw DomainError("projection_meet: empty list");
  const Context& ctx = es.front().context();
  const auto n = static_cast<Eigen::Index>(ctx->dim());
  Matrix g = Matrix::Zero(n, n);
  for (const auto& e : es) {
    require_same_context(ctx, e.context());
    g += Matrix::Identity(n, n) - e.matrix();
  }
  const auto dec = eigh(g);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < dec.values.size(); ++i)
    if (dec.values(i) <= tol) cols.push_back(i);
  Matrix v(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    v.col(static_cast<Eigen::Index>(k)) = dec.vectors.col(cols[k]);
  return Projection::from_basis(ctx, v);
}

inline Projection projection_meet(std::initializer_list<Projection> es, double tol = 1e-9) {
  std::vector<Projection> v(es);
  return projection_meet(std::span<const Projection>(v), tol);
}

// ---------------------------------------------------------------------------
// Noncommutative L_p norms

// ||x||_p = tau(|x|^p)^{1/p} with |x| = (x* x)^{1/2}; p = inf gives the
// operator norm.
inline double lp_norm(const AlgebraContext& ctx, const Matrix& x, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  ctx.check(x);
  Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  if (std::isinf(p)) return s.size() ? s(0) : 0.0;
  double total = 0.0;
  if (ctx.unit_weights()) {
    for (Eigen::Index j = 0; j < s.size(); ++j) total += std::pow(s(j), p);
  } else {
    // tau(|x|^p) = sum_i w_i sum_j |V_ij|^2 s_j^p
    const Matrix& v = svd.matrixV();
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < s.size(); ++j)
        row += std::norm(v(i, j)) * std::pow(s(j), p);
      total += ctx.weights()[static_cast<std::size_t>(i)] * row;
    }
  }
  return std::pow(total, 1.0 / p);
}

inline double lp_norm(const Context& ctx, const Matrix& x, double p) {
  return lp_norm(*ctx, x, p);
}

inline double lp_norm(const HermitianOperator& x, double p) {
  return lp_norm(*x.context(), x.matrix(), p);
}

// ---------------------------------------------------------------------------
// x = x0 - x1 + i (x2 - x3) with every x_j >= 0 and ||x_j||_p <= ||x||_p.

inline std::array<HermitianOperator, 4> positive_four_split(const Context& ctx,
                                                            const Matrix& x) {
  ctx->check(x);
  const Matrix re = 0.5 * (x + x.adjoint());
  const Matrix im = Complex(0.0, -0.5) * (x - x.adjoint());
  auto parts = [&](const Matrix& h) {
    const auto dec = eigh(h);
    RealVector pos = dec.values.cwiseMax(0.0);
    RealVector neg = (-dec.values).cwiseMax(0.0);
    Matrix p = dec.vectors * pos.asDiagonal() * dec.vectors.adjoint();
    Matrix m = dec.vectors * neg.asDiagonal() * dec.vectors.adjoint();
    return std::pair{HermitianOperator(ctx, hermitian_part(p)),
                     HermitianOperator(ctx, hermitian_part(m))};
  };
  auto [x0, x1] = parts(re);
  auto [x2, x3] = parts(im);
  return {x0, x1, x2, x3};
}

inline Matrix recombine_four(const std::array<HermitianOperator, 4>& parts) {
  return parts[0].matrix() - parts[1].matrix() +
         Complex(0.0, 1.0) * (parts[2].matrix() - parts[3].matrix());
}

}  // namespace ncerg

#endif  // NCERG_ALGEBRA_HPP_
