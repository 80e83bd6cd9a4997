#ifndef NCERG_MAXIMAL_HPP_
#define NCERG_MAXIMAL_HPP_

// Verification engines for operator inequalities (Hoelder-type, Kadison,
// compression) and projection certificates for maximal inequalities
// (weak type (1,1), weak type (p,p), one-sided equicontinuity).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ncerg/averages.hpp"
#include "ncerg/dsop.hpp"
#include "ncerg/report.hpp"
#include "ncerg/weights.hpp"

namespace ncerg {

// ---------------------------------------------------------------------------
// Exponent pairs

struct ConjugatePair {
  double p;
  double q;
  bool au = false;  // 2/p + 1/q = 1 instead of 1/p + 1/q = 1

  ConjugatePair(double p_, double q_, bool au_ = false) : p(p_), q(q_), au(au_) {
    if (!(p > 1.0) || !(q > 1.0) || std::isinf(p) || std::isinf(q))
      throw DomainError("ConjugatePair: exponents must lie in (1, inf)");
    const double lhs = (au ? 2.0 : 1.0) / p + 1.0 / q;
    if (std::abs(lhs - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "ConjugatePair: " << (au ? "2/p" : "1/p") << " + 1/q = " << lhs << " != 1";
      throw DomainError(os.str());
    }
  }

  static ConjugatePair from_p(double p) { return {p, p / (p - 1.0)}; }
  static ConjugatePair au_from_p(double p) {
    if (!(p > 2.0)) throw DomainError("ConjugatePair: the a.u. variant needs p > 2");
    return {p, p / (p - 2.0), true};
  }
};

// ---------------------------------------------------------------------------
// Loewner-order report helper: achieved = -margin(lhs, rhs), claimed 0.

inline CertificateReport loewner_report(std::string claim, const Matrix& lhs, const Matrix& rhs,
                                        double tol) {
  const double scale = loewner_scale(lhs, rhs);
  const double min_eig = min_eigenvalue(hermitian_part(rhs - lhs));
  CertificateReport rep(std::move(claim), 0.0, -min_eig / scale, tol);
  rep.set("min_eigenvalue", min_eig).set("scale", scale);
  return rep;
}

inline void require_psd(const Matrix& x, const char* what) {
  if ((x - x.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, x.cwiseAbs().maxCoeff()) ||
      !is_psd(hermitian_part(x))) {
    std::ostringstream os;
    os << what << ": input must be positive semidefinite";
    throw DomainError(os.str());
  }
}

inline double mean_power(std::span<const double> a, double q) {
  double s = 0.0;
  for (double v : a) {
    if (v < 0.0) throw DomainError("weights must be nonnegative");
    s += std::pow(v, q);
  }
  return std::pow(s / static_cast<double>(a.size()), 1.0 / q);
}

// Hoelder-type checks compose powers t^p and t^{1/p}; small eigenvalues lose
// most of their digits in that round trip, so the pipeline runs in long double.
namespace extended {

using Real = long double;
using Cplx = std::complex<Real>;
using Mat = Eigen::Matrix<Cplx, Eigen::Dynamic, Eigen::Dynamic>;

inline Mat widen(const Matrix& m) { return m.cast<Cplx>(); }

inline Mat herm(const Mat& m) { return Real(0.5) * (m + m.adjoint()); }

// Eigenvalues at or below `snap` are treated as 0.
inline Mat power(const Mat& a, Real p, Real snap = 0) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(a));
  const auto& v = es.eigenvectors();
  Eigen::Matrix<Real, Eigen::Dynamic, 1> f(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    f(i) = es.eigenvalues()(i) <= snap ? Real(0) : std::pow(es.eigenvalues()(i), p);
  return herm(v * f.cast<Cplx>().asDiagonal() * v.adjoint());
}

inline Real min_eig(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline Real norm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(a), Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
}

// Phi applied through its superoperator matrix on vec (column-major).
inline Mat apply(const DSMap& phi, const Mat& x) {
  const auto n = x.rows();
  const Mat l = phi.superoperator_matrix().cast<Cplx>();
  const Mat v = l * Eigen::Map<const Eigen::Matrix<Cplx, Eigen::Dynamic, 1>>(x.data(), n * n);
  return Eigen::Map<const Mat>(v.data(), n, n);
}

inline CertificateReport order_report(std::string claim, const Mat& lhs, const Mat& rhs,
                                      double tol) {
  const double scale =
      std::max({1.0, static_cast<double>(norm(lhs)), static_cast<double>(norm(rhs))});
  const double m = static_cast<double>(min_eig(rhs - lhs));
  CertificateReport rep(std::move(claim), 0.0, -m / scale, tol);
  rep.set("min_eigenvalue", m).set("scale", scale);
  return rep;
}

}  // namespace extended

// (1/n) sum a_k x_k <= ((1/n) sum a_k^q)^{1/q} ((1/n) sum x_k^p)^{1/p}.
inline CertificateReport holder_scalar_check(std::span<const double> alphas,
                                             std::span<const Matrix> xs, const ConjugatePair& pr,
                                             double tol = default_tolerances().certificate) {
  using namespace extended;
  if (alphas.size() != xs.size() || xs.empty())
    throw DimensionMismatch("holder_scalar_check: need equal nonzero lengths");
  const auto dim = xs.front().rows();
  Mat lhs = Mat::Zero(dim, dim), powsum = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    require_psd(xs[k], "holder_scalar_check");
    if (xs[k].rows() != dim) throw DimensionMismatch("holder_scalar_check: size mismatch");
    const Mat xk = herm(widen(xs[k]));
    lhs += Real(alphas[k]) * xk;
    powsum += power(xk, pr.p);
  }
  const Real n = static_cast<Real>(xs.size());
  lhs /= n;
  const Mat rhs = Real(mean_power(alphas, pr.q)) * power(Mat(powsum / n), Real(1) / pr.p);
  auto rep = order_report("operator_holder", lhs, rhs, tol);
  rep.set("p", pr.p).set("q", pr.q).set("n", static_cast<double>(n));
  return rep;
}

// (1/n) sum a_k S_k(x) <= ((1/n) sum a_k^q)^{1/q} ((1/n) sum S_k(x^p))^{1/p}.
// Also counts how often the pointwise transfer S_k(x)^p <= S_k(x^p) fails.
inline CertificateReport holder_contraction_check(std::span<const double> alphas,
                                                  std::span<const DSMap> maps, const Matrix& x,
                                                  const ConjugatePair& pr,
                                                  double tol = default_tolerances().certificate) {
  using namespace extended;
  if (alphas.size() != maps.size() || maps.empty())
    throw DimensionMismatch("holder_contraction_check: need equal nonzero lengths");
  require_psd(x, "holder_contraction_check");
  const Mat xh = herm(widen(x));
  const Mat xp = power(xh, pr.p);
  const auto dim = x.rows();
  Mat lhs = Mat::Zero(dim, dim), powsum = Mat::Zero(dim, dim);
  std::size_t transfer_failures = 0;
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const Mat sx = herm(apply(maps[k], xh));
    const Mat sxp = herm(apply(maps[k], xp));
    lhs += Real(alphas[k]) * sx;
    powsum += sxp;
    const Mat sxpow = power(sx, pr.p);
    const Real scale = std::max({Real(1), norm(sxpow), norm(sxp)});
    if (min_eig(sxp - sxpow) / scale < -tol) ++transfer_failures;
  }
  const Real n = static_cast<Real>(maps.size());
  lhs /= n;
  const Mat rhs = Real(mean_power(alphas, pr.q)) * power(Mat(powsum / n), Real(1) / pr.p);
  auto rep = order_report("holder_contraction", lhs, rhs, tol);
  rep.set("p", pr.p).set("q", pr.q).set("n", static_cast<double>(n))
      .set("pointwise_transfer_failures", static_cast<double>(transfer_failures));
  return rep;
}

// Phi(x)^2 <= Phi(x^2). Unital maps: any Hermitian x. Subunital maps: x >= 0.
inline CertificateReport kadison_check(const DSMap& phi, const Matrix& x,
                                       double tol = default_tolerances().certificate) {
  const auto n = x.rows();
  const Matrix one = Matrix::Identity(n, n);
  const Matrix phi1 = phi.apply(one);
  const bool unital = (phi1 - one).cwiseAbs().maxCoeff() <= 1e-10;
  if (!unital) {
    if (loewner_margin(phi1, one) < -default_tolerances().loewner)
      throw DomainError("kadison_check: map is not subunital");
    require_psd(x, "kadison_check (non-unital map)");
  } else if ((x - x.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
    throw DomainError("kadison_check: x must be Hermitian");
  }
  const Matrix xh = hermitian_part(x);
  const Matrix fx = hermitian_part(phi.apply(xh));
  auto rep = loewner_report("kadison", fx * fx, hermitian_part(phi.apply(Matrix(xh * xh))), tol);
  rep.set("unital", unital ? 1.0 : 0.0);
  if (!unital) rep.note("subunital map: checked on a positive input");
  return rep;
}

// x <= y but x^3 is not <= y^3 for the fixed 2x2 pair. Passes when the
// failure is reproduced: achieved = min eig(y^3 - x^3) must be negative.
inline CertificateReport convexity_counterexample(double tol = default_tolerances().loewner) {
  Matrix x(2, 2), y(2, 2);
  x << 1, 1, 1, 1;
  y << 3, 1, 1, 1;
  const Matrix x3 = x * x * x, y3 = y * y * y;
  const double scale3 = loewner_scale(x3, y3);
  const double min3 = min_eigenvalue(y3 - x3);
  CertificateReport rep("cube_monotonicity_failure", -tol * scale3, min3, 0.0);
  const double min1 = min_eigenvalue(y - x);
  rep.add_condition("x_leq_y", 0.0, -min1 / loewner_scale(x, y), tol);
  const Matrix x2 = x * x, y2 = y * y;
  rep.set("min_eigenvalue_cube", min3)
      .set("det_cube", (y3 - x3).determinant().real())
      .set("min_eigenvalue_order", min1)
      .set("min_eigenvalue_square", min_eigenvalue(y2 - x2))
      .set("det_square", (y2 - x2).determinant().real());
  rep.note("p = 2 values are informational: squaring is not order preserving either");
  return rep;
}

// e a^{1/p} e <= (e a e)^{1/p}, the right side computed on the compressed
// algebra. t^{1/p} is not Lipschitz at 0, so a kernel eigenvalue carried as
// round-off r would turn into r^{1/p}. Both sides run in long double and
// eigenvalues below 8 dim eps ||a|| (eps of the double inputs) count as kernel.
inline CertificateReport mei_compression_check(const Matrix& a, const Projection& e, double p,
                                               double tol = default_tolerances().certificate) {
  if (!(p >= 1.0)) throw DomainError("mei_compression_check: p must be >= 1");
  require_psd(a, "mei_compression_check");
  using namespace extended;
  const Mat ah = herm(widen(a));
  const Real snap = Real(8 * a.rows()) * Real(std::numeric_limits<double>::epsilon()) * norm(ah);
  const Mat em = widen(e.matrix());
  const Mat lhs = herm(em * power(ah, Real(1) / Real(p), snap) * em);
  const Mat v = widen(e.range_basis());
  Mat rhs = Mat::Zero(ah.rows(), ah.cols());
  if (v.cols() > 0) rhs = herm(v * power(herm(v.adjoint() * ah * v), Real(1) / Real(p), snap) * v.adjoint());
  auto rep = order_report("compression_root", lhs, rhs, tol);
  rep.set("p", p).set("rank_e", static_cast<double>(e.rank()));
  return rep;
}

// ---------------------------------------------------------------------------
// Witness construction utilities

namespace witness {

inline double compressed_norm(const Matrix& b, const Projection& e) {
  return operator_norm(e.matrix() * b * e.matrix());
}

inline double one_sided_norm(const Matrix& b, const Projection& e) {
  return operator_norm(b * e.matrix());
}

inline Projection meet_of_cutoffs(const Context& ctx, const std::vector<Matrix>& ops,
                                  double cutoff) {
  std::vector<Projection> es;
  es.reserve(ops.size());
  for (const auto& a : ops) es.push_back(spectral_projection(ctx, a, Interval::at_most(cutoff)));
  if (es.empty()) return Projection::identity(ctx);
  return projection_meet(es, 1e-12);
}

// e minus the direction e v (normalized).
inline Projection remove_direction(const Context& ctx, const Projection& e, const Vector& v) {
  Vector w = e.matrix() * v;
  const double nw = w.norm();
  if (nw < 1e-14) return e;
  w /= nw;
  const Matrix basis = e.range_basis();
  // project w out of the range basis and re-orthonormalize
  Matrix b = basis - w * (w.adjoint() * basis);
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU);
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 0.5) cols.push_back(i);
  Matrix keep(b.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k)
    keep.col(static_cast<Eigen::Index>(k)) = svd.matrixU().col(cols[k]);
  return Projection::from_basis(ctx, keep);
}

enum class Side { two_sided, one_sided };

inline double sup_norm(const std::vector<Matrix>& ops, const Projection& e, Side side,
                       std::size_t* worst = nullptr) {
  double best = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const double v = side == Side::two_sided ? compressed_norm(ops[i], e)
                                             : one_sided_norm(ops[i], e);
    if (v > best) {
      best = v;
      if (worst) *worst = i;
    }
  }
  return best;
}

// Repeatedly removes the top right-singular direction of the worst
// compressed operator until every norm is <= bound.
inline Projection greedy_deflation(const Context& ctx, const std::vector<Matrix>& ops,
                                   double bound, Side side, Projection start) {
  Projection e = std::move(start);
  for (std::size_t it = 0; it <= ctx->dim(); ++it) {
    std::size_t worst = 0;
    if (sup_norm(ops, e, side, &worst) <= bound * (1.0 + 1e-12)) return e;
    const Matrix m = side == Side::two_sided ? Matrix(e.matrix() * ops[worst] * e.matrix())
                                             : Matrix(ops[worst] * e.matrix());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    e = remove_direction(ctx, e, svd.matrixV().col(0));
  }
  return e;
}

struct Attempt {
  std::string stage;
  double cutoff = 0.0;
  Projection e;
  double trace_complement = 0.0;
  double sup = 0.0;
};

}  // namespace witness

// Records the attempt list on a report: per-stage trace and norm.
inline void record_attempts(CertificateReport& rep, const std::vector<witness::Attempt>& at) {
  for (std::size_t i = 0; i < at.size(); ++i) {
    std::ostringstream key;
    key << "attempt" << i << "_";
    rep.set(key.str() + "trace", at[i].trace_complement).set(key.str() + "sup", at[i].sup);
    rep.note("attempt " + std::to_string(i) + ": " + at[i].stage);
  }
}

struct CertificateOptions {
  double tol = default_tolerances().certificate;
  bool fallback = true;
};

// Picks the first attempt meeting both halves; otherwise the one with the
// smallest trace among those meeting the norm half (or the last attempt).
template <class Make>
witness::Attempt run_attempts(std::vector<witness::Attempt>& log, double trace_bound,
                              double norm_bound, double tol, const Make& stages,
                              std::size_t& chosen) {
  const auto ok = [&](const witness::Attempt& a) {
    return a.trace_complement <= trace_bound + tol * std::max(1.0, trace_bound) &&
           a.sup <= norm_bound + tol * std::max(1.0, norm_bound);
  };
  for (std::size_t s = 0;; ++s) {
    auto a = stages(s);
    if (!a) break;
    log.push_back(*a);
    if (ok(log.back())) {
      chosen = log.size() - 1;
      return log.back();
    }
  }
  std::size_t best = log.size() - 1;
  for (std::size_t i = 0; i < log.size(); ++i)
    if (log[i].sup <= norm_bound + tol * std::max(1.0, norm_bound) &&
        log[i].trace_complement < log[best].trace_complement)
      best = i;
  chosen = best;
  return log[best];
}

// ---------------------------------------------------------------------------
// Weak type (1,1) certificate for the Cesaro averages M_n(T), n <= horizon

inline CertificateReport yeadon_certificate(const DSMap& t, const Matrix& x, double lambda,
                                            std::size_t horizon,
                                            const CertificateOptions& opt = {}) {
  if (!(lambda > 0.0)) throw DomainError("yeadon_certificate: lambda must be > 0");
  if (horizon == 0) throw DomainError("yeadon_certificate: horizon must be >= 1");
  require_psd(x, "yeadon_certificate");
  const Context& ctx = t.context();
  const Matrix xh = hermitian_part(x);
  std::vector<std::size_t> ns(horizon);
  for (std::size_t k = 0; k < horizon; ++k) ns[k] = k + 1;
  std::vector<Matrix> avgs;
  for (auto& r : stream_1d(t, WeightSequence::constant({horizon}, 1.0), xh, ns))
    avgs.push_back(hermitian_part(r.value));

  const double bound = lp_norm(*ctx, xh, 1.0) / lambda;
  const auto make = [&](const std::string& stage, double cutoff, Projection e) {
    witness::Attempt a{stage, cutoff, e, e.tau_complement(),
                       witness::sup_norm(avgs, e, witness::Side::two_sided)};
    return a;
  };
  const std::array<double, 3> grid{1.0, 0.9, 0.75};
  const std::array<double, 5> powers{2, 4, 8, 16, 32};
  const auto stages = [&](std::size_t s) -> std::optional<witness::Attempt> {
    if (s < grid.size()) {
      if (s > 0 && !opt.fallback) return std::nullopt;
      const double c = grid[s] * lambda;
      return make("meet_cutoff", c, witness::meet_of_cutoffs(ctx, avgs, c));
    }
    if (!opt.fallback) return std::nullopt;
    s -= grid.size();
    if (s < powers.size()) {
      // a_n <= H^{1/r} P_r with P_r = ((1/H) sum a_n^r)^{1/r}
      const double r = powers[s];
      Matrix acc = Matrix::Zero(xh.rows(), xh.cols());
      for (const auto& a : avgs) acc += matrix_power(a, r);
      const Matrix pr = matrix_power(Matrix(acc / double(avgs.size())), 1.0 / r);
      const double c = lambda / std::pow(double(avgs.size()), 1.0 / r);
      return make("power_mean_r" + std::to_string(int(r)), c,
                  spectral_projection(ctx, pr, Interval::at_most(c)));
    }
    if (s == powers.size())
      return make("greedy_deflation", lambda,
                  witness::greedy_deflation(ctx, avgs, lambda, witness::Side::two_sided,
                                            Projection::identity(ctx)));
    return std::nullopt;
  };
  std::vector<witness::Attempt> log;
  std::size_t chosen = 0;
  const auto best = run_attempts(log, bound, lambda, opt.tol, stages, chosen);

  CertificateReport rep("yeadon_weak_11", bound, best.trace_complement,
                        opt.tol * std::max(1.0, bound));
  rep.add_condition("sup_norm", lambda, best.sup, opt.tol * std::max(1.0, lambda));
  rep.set_witness(best.e);
  rep.set("lambda", lambda).set("horizon", double(horizon)).set("norm_1", bound * lambda)
      .set("stage", double(chosen))
      .set("first_cutoff_trace", log.front().trace_complement)
      .set("first_cutoff_sup", log.front().sup)
      .set("first_cutoff_pass", log.front().trace_complement <=
                                        bound + opt.tol * std::max(1.0, bound) &&
                                    log.front().sup <= lambda + opt.tol * std::max(1.0, lambda)
                                    ? 1.0
                                    : 0.0);
  record_attempts(rep, log);
  return rep;
}

// ---------------------------------------------------------------------------
// Weak type (p,p) certificate for normalized weighted sector averages

inline double weak_type_constant(double p, double C, std::size_t d, double chi) {
  return std::pow(4.0, 2.0 + 1.0 / p) * std::pow(std::pow(C, double(d)) * chi, 1.0 / p);
}

inline double weak_type_trace_bound(double p, double C, std::size_t d, double chi, double norm_p,
                                    double lambda) {
  return std::pow(weak_type_constant(p, C, d, chi), p) * std::pow(norm_p / lambda, p);
}

inline CertificateReport weak_type_pp_certificate(const DSTuple& t, const WeightSequence& alpha,
                                                  const Matrix& x, double lambda,
                                                  const ConjugatePair& pr, const SectorSpec& sector,
                                                  double chi, const Index& horizon,
                                                  const CertificateOptions& opt = {}) {
  if (pr.au) throw DomainError("weak_type_pp_certificate: needs 1/p + 1/q = 1");
  if (!(lambda > 0.0)) throw DomainError("weak_type_pp_certificate: lambda must be > 0");
  if (!(chi > 0.0)) throw DomainError("weak_type_pp_certificate: chi must be > 0");
  const std::size_t d = t.d();
  if (sector.d != d || alpha.d() != d || horizon.size() != d)
    throw DimensionMismatch("weak_type_pp_certificate: d mismatch");
  if (!alpha.covers(horizon)) throw HorizonExceeded("weak_type_pp_certificate: alpha horizon");
  const Context& ctx = t.context();
  ctx->check(x);

  const double p = pr.p;
  const double norm_p = lp_norm(*ctx, x, p);
  const double bound = weak_type_trace_bound(p, sector.C, d, chi, norm_p, lambda);
  const double seminorm = sector_sup_seminorm(alpha, pr.q, sector);
  const auto indices = sector_indices(sector, horizon);

  auto finish = [&](const witness::Attempt& best, std::size_t chosen,
                    const std::vector<witness::Attempt>& log) {
    CertificateReport rep("weak_type_pp", bound, best.trace_complement,
                          opt.tol * std::max(1.0, bound));
    rep.add_condition("sup_norm", lambda, best.sup, opt.tol * std::max(1.0, lambda));
    rep.set_witness(best.e);
    rep.set("p", p).set("q", pr.q).set("C", sector.C).set("d", double(d)).set("chi", chi)
        .set("lambda", lambda).set("norm_p", norm_p).set("seminorm", seminorm)
        .set("constant", weak_type_constant(p, sector.C, d, chi))
        .set("sector_indices", double(indices.size())).set("stage", double(chosen));
    if (!log.empty()) {
      rep.set("first_cutoff_trace", log.front().trace_complement);
      rep.set("first_cutoff_sup", log.front().sup);
    }
    record_attempts(rep, log);
    return rep;
  };

  if (seminorm == 0.0) {
    // 0/0 := 0: every normalized average vanishes
    witness::Attempt a{"zero_weight", lambda, Projection::identity(ctx), 0.0, 0.0};
    auto rep = finish(a, 0, {});
    rep.note("zero weight sequence: normalized averages are 0 by the 0/0 := 0 convention");
    return rep;
  }

  const auto xs = positive_four_split(ctx, x);
  const auto as = decompose_four_nonneg(alpha);
  // normalized averages of the full input, the objects of the norm half
  std::vector<Matrix> targets;
  const auto orbit_x = std::make_shared<const OrbitTable>(t, x, horizon);
  {
    const WeightedSums sx(orbit_x, alpha);
    for (const auto& n : indices) targets.push_back(sx.average(n) / seminorm);
  }
  // positive pieces A_{j,i,n} = M_n^{alpha_i}(x_j) / |alpha|
  std::array<std::vector<Matrix>, 4> pieces;
  for (std::size_t j = 0; j < 4; ++j) {
    if (xs[j].matrix().cwiseAbs().maxCoeff() == 0.0) continue;
    const auto orbit = std::make_shared<const OrbitTable>(t, xs[j].matrix(), horizon);
    for (std::size_t i = 0; i < 4; ++i) {
      bool nonzero = false;
      for (std::size_t f = 0; f < detail::product(as[i].horizon()) && !nonzero; ++f)
        nonzero = as[i].value_flat(f) != Complex(0.0);
      if (!nonzero) continue;
      const WeightedSums s(orbit, as[i]);
      for (const auto& n : indices) pieces[j].push_back(hermitian_part(s.average(n) / seminorm));
    }
  }
  const auto direct = [&](double lam) {
    std::vector<Projection> ej;
    for (std::size_t j = 0; j < 4; ++j)
      ej.push_back(witness::meet_of_cutoffs(ctx, pieces[j], lam / 16.0));
    return projection_meet(ej, 1e-12);
  };
  const auto make = [&](const std::string& stage, double cutoff, Projection e) {
    return witness::Attempt{stage, cutoff, e, e.tau_complement(),
                            witness::sup_norm(targets, e, witness::Side::two_sided)};
  };
  const auto stages = [&](std::size_t s) -> std::optional<witness::Attempt> {
    switch (s) {
      case 0: return make("direct_meet", lambda / 16.0, direct(lambda));
      case 1: {
        if (!opt.fallback) return std::nullopt;
        if (d != 1) return make("direct_meet_0.9", 0.9 * lambda / 16.0, direct(0.9 * lambda));
        // single-operator chain: meet of 1_{[0, c]}(M_m(T)(x_j^p)), c = lambda^p / (16^p C chi)
        const double c = std::pow(lambda / 16.0, p) / (sector.C * chi);
        std::vector<Projection> ej;
        for (std::size_t j = 0; j < 4; ++j) {
          const Matrix xp = matrix_power(xs[j].matrix(), p);
          std::vector<std::size_t> ms;
          for (const auto& n : indices) ms.push_back(n[0]);
          std::vector<Matrix> avgs;
          for (auto& r : stream_1d(t[0], WeightSequence::constant(horizon, 1.0), xp, ms))
            avgs.push_back(hermitian_part(r.value));
          ej.push_back(witness::meet_of_cutoffs(ctx, avgs, c));
        }
        return make("power_chain_meet", c, projection_meet(ej, 1e-12));
      }
      case 2:
        if (!opt.fallback) return std::nullopt;
        return make("direct_meet_0.9", 0.9 * lambda / 16.0, direct(0.9 * lambda));
      case 3:
        if (!opt.fallback) return std::nullopt;
        return make("direct_meet_0.75", 0.75 * lambda / 16.0, direct(0.75 * lambda));
      case 4:
        if (!opt.fallback) return std::nullopt;
        return make("greedy_deflation", lambda,
                    witness::greedy_deflation(ctx, targets, lambda, witness::Side::two_sided,
                                              Projection::identity(ctx)));
      default: return std::nullopt;
    }
  };
  std::vector<witness::Attempt> log;
  std::size_t chosen = 0;
  const auto best = run_attempts(log, bound, lambda, opt.tol, stages, chosen);
  return finish(best, chosen, log);
}

// ---------------------------------------------------------------------------
// One-sided certificate: sup_n ||M_n^alpha(T)(x) e|| <= |alpha| lambda, from
// the two-sided certificate for x^2 at level |alpha| lambda^2 and Kadison's
// inequality. Requires 2/p + 1/q = 1 and nonnegative weights.

inline CertificateReport uem_one_sided_certificate(const DSMap& t, const WeightSequence& alpha,
                                                   const Matrix& x, double lambda, double p,
                                                   std::size_t horizon,
                                                   const CertificateOptions& opt = {}) {
  const ConjugatePair pr = ConjugatePair::au_from_p(p);
  if (!(lambda > 0.0)) throw DomainError("uem_one_sided_certificate: lambda must be > 0");
  if (alpha.d() != 1) throw DimensionMismatch("uem_one_sided_certificate: d must be 1");
  if (!alpha.covers({horizon})) throw HorizonExceeded("uem_one_sided_certificate: horizon");
  require_psd(x, "uem_one_sided_certificate");
  for (std::size_t f = 0; f < alpha.horizon()[0]; ++f) {
    const Complex a = alpha.value_flat(f);
    if (a.imag() != 0.0 || a.real() < 0.0)
      throw DomainError("uem_one_sided_certificate: weights must be nonnegative");
  }
  const Context& ctx = t.context();
  const Matrix xh = hermitian_part(x);
  const double seminorm = sector_sup_seminorm(alpha, pr.q, SectorSpec(1.0, 1));
  const double norm_p = lp_norm(*ctx, xh, p);
  const double bound = std::pow(4.0, p + 1.0) * std::pow(norm_p / lambda, p);
  const double target = seminorm * lambda;

  std::vector<std::size_t> ns(horizon);
  for (std::size_t k = 0; k < horizon; ++k) ns[k] = k + 1;
  std::vector<Matrix> avg_x, avg_x2;
  for (auto& r : stream_1d(t, alpha, xh, ns)) avg_x.push_back(r.value);
  for (auto& r : stream_1d(t, alpha, Matrix(xh * xh), ns))
    avg_x2.push_back(hermitian_part(r.value));

  const auto make = [&](const std::string& stage, double cutoff, Projection e) {
    return witness::Attempt{stage, cutoff, e, e.tau_complement(),
                            witness::sup_norm(avg_x, e, witness::Side::one_sided)};
  };
  const auto stages = [&](std::size_t s) -> std::optional<witness::Attempt> {
    if (seminorm == 0.0)
      return s == 0 ? std::optional(make("zero_weight", 0.0, Projection::identity(ctx)))
                    : std::nullopt;
    const std::array<double, 3> grid{1.0, 0.9, 0.75};
    if (s < grid.size()) {
      if (s > 0 && !opt.fallback) return std::nullopt;
      const double c = seminorm * std::pow(grid[s] * lambda, 2.0);
      return make("square_meet", c, witness::meet_of_cutoffs(ctx, avg_x2, c));
    }
    if (s == grid.size() && opt.fallback)
      return make("greedy_deflation", target,
                  witness::greedy_deflation(ctx, avg_x, target, witness::Side::one_sided,
                                            Projection::identity(ctx)));
    return std::nullopt;
  };
  std::vector<witness::Attempt> log;
  std::size_t chosen = 0;
  const auto best = run_attempts(log, bound, target, opt.tol, stages, chosen);
  CertificateReport rep("uem_one_sided", bound, best.trace_complement,
                        opt.tol * std::max(1.0, bound));
  rep.add_condition("one_sided_norm", target, best.sup, opt.tol * std::max(1.0, target));
  rep.set_witness(best.e);
  rep.set("p", p).set("q", pr.q).set("lambda", lambda).set("seminorm", seminorm)
      .set("norm_p", norm_p).set("horizon", double(horizon)).set("stage", double(chosen));
  // Kadison-Schwarz step: M(x)^2 <= ||M(1)|| M(x^2), checked on every n
  double ks = 0.0;
  for (std::size_t k = 0; k < avg_x.size(); ++k) {
    const Matrix lhs = avg_x[k].adjoint() * avg_x[k];
    const double m1 = seminorm;  // ||M_n^alpha(1)|| <= (1/n) sum alpha_k <= |alpha|
    ks = std::max(ks, -loewner_margin(lhs, Matrix(m1 * avg_x2[k])));
  }
  rep.set("kadison_schwarz_violation", std::max(0.0, ks));
  if (seminorm == 0.0) rep.note("zero weight sequence: averages vanish");
  record_attempts(rep, log);
  return rep;
}

}  // namespace ncerg

#endif  // NCERG_MAXIMAL_HPP_
