#ifndef NCERG_DSOP_HPP_
#define NCERG_DSOP_HPP_

// Positive Dunford-Schwartz maps on M_N(C), commuting tuples of them and
// the finite-dimensional Jacobs-de Leeuw-Glicksberg splitting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ncerg/algebra.hpp"
#include "ncerg/random.hpp"
#include "ncerg/report.hpp"

namespace ncerg {

// vec() is column-major: index i + j*N holds x(i, j).
inline Vector vectorize(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvectorize(const Vector& v, Eigen::Index n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

struct KrausRep {
  std::vector<Matrix> ops;
};
struct UnitaryRep {
  Matrix u;
};
// Row-substochastic nonnegative matrix acting on the diagonal:
// Phi(x) = diag(P diag(x)).
struct StochasticRep {
  Eigen::MatrixXd p;
};
// perm[i] is the image of basis index i; Phi(x)_{perm[i], perm[j]} = x_{ij}.
struct PermutationRep {
  std::vector<std::size_t> perm;
};
// N^2 x N^2 matrix acting on vec(x).
struct SuperoperatorRep {
  Matrix l;
};

enum class DSKind { kraus, unitary, stochastic, permutation, superoperator };

inline const char* to_string(DSKind k) {
  switch (k) {
    case DSKind::kraus: return "kraus";
    case DSKind::unitary: return "unitary";
    case DSKind::stochastic: return "stochastic";
    case DSKind::permutation: return "permutation";
    case DSKind::superoperator: return "superoperator";
  }
  return "unknown";
}

class DSMap {
 public:
  using Representation =
      std::variant<KrausRep, UnitaryRep, StochasticRep, PermutationRep, SuperoperatorRep>;

  static DSMap identity(const Context& ctx) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    return DSMap(ctx, UnitaryRep{Matrix::Identity(n, n)});
  }

  static DSMap kraus(const Context& ctx, std::vector<Matrix> ops) {
    if (ops.empty()) throw DomainError("kraus: empty operator list");
    for (const auto& a : ops) ctx->check(a);
    return DSMap(ctx, KrausRep{std::move(ops)});
  }

  static DSMap unitary(const Context& ctx, Matrix u, double tol = 1e-10) {
    ctx->check(u);
    const auto n = u.rows();
    if ((u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol)
      throw DomainError("unitary: matrix is not unitary");
    return DSMap(ctx, UnitaryRep{std::move(u)});
  }

  static DSMap stochastic(const Context& ctx, Eigen::MatrixXd p, double tol = 1e-12) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    if (p.rows() != n || p.cols() != n)
      throw DimensionMismatch("stochastic: matrix size != algebra dimension");
    if (p.minCoeff() < 0.0) throw DomainError("stochastic: negative entry");
    if (p.rowwise().sum().maxCoeff() > 1.0 + tol)
      throw DomainError("stochastic: row sums exceed 1");
    return DSMap(ctx, StochasticRep{std::move(p)});
  }

  static DSMap permutation(const Context& ctx, std::vector<std::size_t> perm) {
    if (perm.size() != ctx->dim())
      throw DimensionMismatch("permutation: length != algebra dimension");
    std::vector<bool> seen(perm.size(), false);
    for (auto i : perm) {
      if (i >= perm.size() || seen[i]) throw DomainError("permutation: not a bijection");
      seen[i] = true;
    }
    return DSMap(ctx, PermutationRep{std::move(perm)});
  }

  static DSMap superoperator(const Context& ctx, Matrix l) {
    const auto n2 = static_cast<Eigen::Index>(ctx->dim() * ctx->dim());
    if (l.rows() != n2 || l.cols() != n2)
      throw DimensionMismatch("superoperator: matrix must be N^2 x N^2");
    return DSMap(ctx, SuperoperatorRep{std::move(l)});
  }

  // Phi(x) = tau(x) / tau(1) * 1.
  static DSMap trace_averaging(const Context& ctx) {
    const auto n = static_cast<Eigen::Index>(ctx->dim());
    Matrix l = Matrix::Zero(n * n, n * n);
    const Vector one = vectorize(Matrix::Identity(n, n));
    const double t1 = ctx->tau_one();
    for (Eigen::Index i = 0; i < n; ++i)
      l.col(i + i * n) = one * (ctx->weights()[static_cast<std::size_t>(i)] / t1);
    return DSMap(ctx, SuperoperatorRep{std::move(l)});
  }

  const Context& context() const { return ctx_; }
  std::size_t dim() const { return ctx_->dim(); }
  const Representation& representation() const { return rep_; }
  DSKind kind() const { return static_cast<DSKind>(rep_.index()); }

  Matrix apply(const Matrix& x) const {
    ctx_->check(x);
    return std::visit([&](const auto& r) { return apply_rep(r, x); }, rep_);
  }

  HermitianOperator apply(const HermitianOperator& x) const {
    require_same_context(ctx_, x.context());
    return HermitianOperator(ctx_, hermitian_part(apply(x.matrix())));
  }

  Matrix apply_power(const Matrix& x, std::size_t k) const {
    Matrix y = x;
    for (std::size_t i = 0; i < k; ++i) y = apply(y);
    return y;
  }

  // Matrix of the map on vec(); cached on first use.
  const Matrix& superoperator_matrix() const {
    if (superop_.size() == 0) {
      if (const auto* s = std::get_if<SuperoperatorRep>(&rep_)) {
        superop_ = s->l;
      } else {
        const auto n = static_cast<Eigen::Index>(ctx_->dim());
        Matrix l(n * n, n * n);
        for (Eigen::Index j = 0; j < n; ++j)
          for (Eigen::Index i = 0; i < n; ++i) {
            Matrix e = Matrix::Zero(n, n);
            e(i, j) = 1.0;
            l.col(i + j * n) = vectorize(apply(e));
          }
        superop_ = std::move(l);
      }
    }
    return superop_;
  }

  // Hilbert-Schmidt adjoint Phi^dagger(y), tr(Phi^dagger(y)* x) = tr(y* Phi(x)).
  Matrix apply_adjoint(const Matrix& y) const {
    ctx_->check(y);
    const auto n = static_cast<Eigen::Index>(ctx_->dim());
    return unvectorize(superoperator_matrix().adjoint() * vectorize(y), n);
  }

 private:
  DSMap(Context ctx, Representation rep) : ctx_(std::move(ctx)), rep_(std::move(rep)) {}

  Matrix apply_rep(const KrausRep& r, const Matrix& x) const {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& a : r.ops) out.noalias() += a * x * a.adjoint();
    return out;
  }
  Matrix apply_rep(const UnitaryRep& r, const Matrix& x) const {
    return r.u * x * r.u.adjoint();
  }
  Matrix apply_rep(const StochasticRep& r, const Matrix& x) const {
    const Vector d = x.diagonal();
    const Vector pd = r.p.cast<Complex>() * d;
    return pd.asDiagonal();
  }
  Matrix apply_rep(const PermutationRep& r, const Matrix& x) const {
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i)
        out(static_cast<Eigen::Index>(r.perm[static_cast<std::size_t>(i)]),
            static_cast<Eigen::Index>(r.perm[static_cast<std::size_t>(j)])) = x(i, j);
    return out;
  }
  Matrix apply_rep(const SuperoperatorRep& r, const Matrix& x) const {
    return unvectorize(r.l * vectorize(x), x.rows());
  }

  Context ctx_;
  Representation rep_;
  mutable Matrix superop_;
};

// ---------------------------------------------------------------------------
// Commuting tuples

class DSTuple {
 public:
  // With `commuting` set the pairwise commutators are checked exactly on the
  // matrix-unit basis (linearity makes that a complete check).
  explicit DSTuple(std::vector<DSMap> maps, bool commuting = true, double tol = 1e-10)
      : maps_(std::move(maps)), commuting_(commuting) {
    if (maps_.empty()) throw DomainError("DSTuple: need at least one map");
    for (const auto& m : maps_) require_same_context(maps_.front().context(), m.context());
    if (commuting_) {
      const double defect = commutator_defect();
      if (defect > tol) {
        std::ostringstream os;
        os << "DSTuple: maps do not commute (defect " << defect << ")";
        throw DomainError(os.str());
      }
    }
  }

  std::size_t d() const { return maps_.size(); }
  const DSMap& operator[](std::size_t i) const { return maps_.at(i); }
  const std::vector<DSMap>& maps() const { return maps_; }
  const Context& context() const { return maps_.front().context(); }
  bool commuting() const { return commuting_; }

  // max over pairs of the largest entry of L_i L_j - L_j L_i.
  double commutator_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < maps_.size(); ++i)
      for (std::size_t j = i + 1; j < maps_.size(); ++j) {
        const Matrix& a = maps_[i].superoperator_matrix();
        const Matrix& b = maps_[j].superoperator_matrix();
        worst = std::max(worst, (a * b - b * a).cwiseAbs().maxCoeff());
      }
    return worst;
  }

 private:
  std::vector<DSMap> maps_;
  bool commuting_;
};

// T_1^{k_1} ... T_d^{k_d}(x); T_d is applied first.
inline Matrix tuple_power(const DSTuple& t, std::span<const std::size_t> k, const Matrix& x) {
  if (k.size() != t.d()) throw DimensionMismatch("tuple_power: exponent length != d");
  Matrix y = x;
  for (std::size_t i = t.d(); i-- > 0;) y = t[i].apply_power(y, k[i]);
  return y;
}

inline Matrix tuple_power(const DSTuple& t, std::span<const long long> k, const Matrix& x) {
  Index ks(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0) throw DomainError("tuple_power: negative exponent");
    ks[i] = static_cast<std::size_t>(k[i]);
  }
  return tuple_power(t, std::span<const std::size_t>(ks), x);
}

inline HermitianOperator tuple_power(const DSTuple& t, const Index& k,
                                     const HermitianOperator& x) {
  return HermitianOperator(x.context(),
                           hermitian_part(tuple_power(t, std::span<const std::size_t>(k),
                                                      x.matrix())));
}

// ---------------------------------------------------------------------------
// Dunford-Schwartz verification

struct DSVerifyOptions {
  double tol = default_tolerances().certificate;
  std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0, kInf};
};

inline CertificateReport verify_ds(const DSMap& phi, std::size_t samples, std::uint64_t seed,
                                   const DSVerifyOptions& opt = {}) {
  if (samples == 0) throw DomainError("verify_ds: samples must be >= 1");
  const Context& ctx = phi.context();
  const std::size_t n = ctx->dim();
  const auto dim = static_cast<Eigen::Index>(n);
  Rng rng(seed);

  double positivity = 0.0;
  auto probe = [&](const Vector& v) {
    const Matrix img = phi.apply(Matrix(v * v.adjoint()));
    const double scale = std::max(1.0, operator_norm(img));
    positivity = std::max(positivity, -min_eigenvalue(img) / scale);
  };
  for (Eigen::Index i = 0; i < dim; ++i) probe(Vector::Unit(dim, i));
  for (std::size_t s = 0; s < samples; ++s) probe(random_unit_vector(rng, n));

  // Phi(1) <= 1 and, by trace duality, Phi^dagger(W) <= W with W = diag(w).
  const Matrix one = Matrix::Identity(dim, dim);
  const Matrix phi1 = phi.apply(one);
  const double linf_exact = std::max(0.0, -loewner_margin(phi1, one));
  Matrix w = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) w(i, i) = ctx->weights()[static_cast<std::size_t>(i)];
  const Matrix dual = phi.apply_adjoint(w);
  const double l1_exact = std::max(0.0, -loewner_margin(hermitian_part(dual), w));

  std::vector<double> norm_violation(opt.p_grid.size(), 0.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const Matrix x = (s % 2 == 0) ? random_hermitian(rng, n) : ginibre(rng, n, n);
    const Matrix y = phi.apply(x);
    for (std::size_t k = 0; k < opt.p_grid.size(); ++k) {
      const double nx = lp_norm(*ctx, x, opt.p_grid[k]);
      const double ny = lp_norm(*ctx, y, opt.p_grid[k]);
      norm_violation[k] = std::max(norm_violation[k], (ny - nx) / std::max(nx, 1e-300));
    }
  }

  double worst = std::max({positivity, linf_exact, l1_exact});
  for (double v : norm_violation) worst = std::max(worst, v);
  CertificateReport rep("dunford_schwartz", 0.0, worst, opt.tol);
  rep.set("positivity_violation", positivity)
      .set("linf_violation", linf_exact)
      .set("l1_violation", l1_exact)
      .set("samples", static_cast<double>(samples))
      .set("seed", static_cast<double>(seed));
  for (std::size_t k = 0; k < opt.p_grid.size(); ++k) {
    std::ostringstream key;
    key << "lp_violation_p" << opt.p_grid[k];
    rep.set(key.str(), std::max(0.0, norm_violation[k]));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Jacobs-de Leeuw-Glicksberg splitting at p = 2

struct EigenMode {
  Matrix vector;  // unit Frobenius norm
  Complex eigenvalue;
};

struct JdlgSplit {
  std::vector<EigenMode> unimodular;
  std::vector<Matrix> flight_basis;  // orthonormal basis of the flight subspace
  std::size_t flight_dim = 0;
  bool defective = false;
  double eigenvector_condition = 1.0;
};

inline JdlgSplit jdlg_split(const DSMap& phi, double tol = default_tolerances().unimodular) {
  const auto n = static_cast<Eigen::Index>(phi.dim());
  const Matrix& l = phi.superoperator_matrix();
  Eigen::ComplexEigenSolver<Matrix> es(l);
  if (es.info() != Eigen::Success) throw Error("jdlg_split: eigen solver failed");
  const Vector& vals = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();

  JdlgSplit out;
  Eigen::JacobiSVD<Matrix> svd(vecs);
  const RealVector& s = svd.singularValues();
  out.eigenvector_condition = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : kInf;
  out.defective = !(out.eigenvector_condition < 1e10);

  std::vector<Complex> unimodular_values;
  std::vector<Eigen::Index> flight_cols;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (std::abs(std::abs(vals(i)) - 1.0) <= tol) {
      Vector v = vecs.col(i);
      v /= v.norm();
      out.unimodular.push_back({unvectorize(v, n), vals(i)});
      unimodular_values.push_back(vals(i));
    } else {
      flight_cols.push_back(i);
    }
  }
  out.flight_dim = flight_cols.size();
  if (out.flight_dim == 0) return out;

  Matrix basis;
  if (!out.defective) {
    Matrix raw(vecs.rows(), static_cast<Eigen::Index>(flight_cols.size()));
    for (std::size_t k = 0; k < flight_cols.size(); ++k)
      raw.col(static_cast<Eigen::Index>(k)) = vecs.col(flight_cols[k]);
    Eigen::HouseholderQR<Matrix> qr(raw);
    basis = qr.householderQ() * Matrix::Identity(raw.rows(), raw.cols());
  } else {
    // Range of prod_{unimodular} (L - lambda) is the flight subspace.
    Matrix q = Matrix::Identity(l.rows(), l.cols());
    for (const auto& lam : unimodular_values)
      q = q * (l - lam * Matrix::Identity(l.rows(), l.cols()));
    Eigen::JacobiSVD<Matrix> qs(q, Eigen::ComputeFullU);
    basis = qs.matrixU().leftCols(static_cast<Eigen::Index>(out.flight_dim));
  }
  for (Eigen::Index k = 0; k < basis.cols(); ++k)
    out.flight_basis.push_back(unvectorize(basis.col(k), n));
  return out;
}

}  // namespace ncerg

#endif  // NCERG_DSOP_HPP_
