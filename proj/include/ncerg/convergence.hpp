#ifndef NCERG_CONVERGENCE_HPP_
#define NCERG_CONVERGENCE_HPP_

// Finite-horizon convergence diagnostics with projection certificates.
// "Converged" means: over the final quarter of the index sequence the
// compressed distance to the final average stays below tol_conv.

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ncerg/averages.hpp"
#include "ncerg/dsop.hpp"
#include "ncerg/maximal.hpp"
#include "ncerg/report.hpp"
#include "ncerg/weights.hpp"

namespace ncerg {

struct ConvergenceOptions {
  double tol_conv = -1.0;  // < 0: 1e-6 * max(||x||_inf, tiny)
  std::size_t max_tail_samples = 4096;
};

inline double resolve_tol_conv(const ConvergenceOptions& opt, const Matrix& x) {
  if (opt.tol_conv >= 0.0) return opt.tol_conv;
  return 1e-6 * std::max(operator_norm(x), 1e-300);
}

// Positions of the final quarter of a length-K sequence, evenly thinned to
// at most `cap` entries; the last position is always included.
inline std::vector<std::size_t> tail_positions(std::size_t K, std::size_t cap) {
  if (K == 0) return {};
  const std::size_t start = (3 * K) / 4;
  const std::size_t len = K - start;
  std::vector<std::size_t> out;
  if (len <= cap) {
    for (std::size_t i = start; i < K; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t s = 0; s < cap; ++s)
    out.push_back(start + (s * (len - 1)) / (cap - 1));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// |D| spectral cut: e <= 1_{[0,c]}((D* D)^{1/2}) gives ||D e|| <= c.
inline Projection right_cut(const Context& ctx, const Matrix& dm, double c) {
  return spectral_projection(ctx, Matrix(dm.adjoint() * dm), Interval::at_most(c * c));
}

struct BauCertificate {
  double epsilon = 0.0;
  Projection projection;
  Matrix limit;
  std::vector<std::pair<Index, double>> tail_profile;
  double tol_conv = 0.0;
  CertificateReport report;
};

// Recomputes both bounds of a certificate along a separate path (direct
// weighted_average per index, no streaming).
inline CertificateReport reverify_bau(const DSTuple& t, const WeightSequence& a, const Matrix& x,
                                      const BauCertificate& cert) {
  const Matrix& e = cert.projection.matrix();
  double sup = 0.0;
  for (const auto& [n, recorded] : cert.tail_profile) {
    const Matrix m = weighted_average(t, a, x, n).value;
    sup = std::max(sup, operator_norm(Matrix(e * (m - cert.limit) * e)));
  }
  CertificateReport rep("bau_reverification", cert.epsilon, cert.projection.tau_complement(),
                        default_tolerances().certificate * std::max(1.0, cert.epsilon));
  rep.add_condition("tail_oscillation", cert.tol_conv, sup, 1e-12 * std::max(1.0, operator_norm(x)));
  return rep;
}

inline BauCertificate bau_limit_estimate(const DSTuple& t, const WeightSequence& a, const Matrix& x,
                                         const SectorSequence& seq, double epsilon,
                                         const ConvergenceOptions& opt = {}) {
  if (!(epsilon >= 0.0)) throw DomainError("bau_limit_estimate: epsilon must be >= 0");
  if (seq.size() == 0) throw DomainError("bau_limit_estimate: empty sequence");
  const Context& ctx = t.context();
  const double tol = resolve_tol_conv(opt, x);
  const auto avgs = average_stream(t, a, x, seq);
  const Matrix limit = avgs.back().value;
  const auto tail = tail_positions(avgs.size(), opt.max_tail_samples);

  const auto oscillation = [&](const Projection& e) {
    double s = 0.0;
    for (auto i : tail)
      s = std::max(s, witness::compressed_norm(Matrix(avgs[i].value - limit), e));
    return s;
  };
  // identity first, then meets of right cuts of the tail differences
  std::vector<std::pair<std::string, Projection>> candidates;
  candidates.emplace_back("identity", Projection::identity(ctx));
  for (double f : {1.0, 0.5, 0.25}) {
    std::vector<Projection> cuts;
    for (auto i : tail) cuts.push_back(right_cut(ctx, Matrix(avgs[i].value - limit), f * tol));
    candidates.emplace_back("difference_meet", projection_meet(cuts, 1e-12));
  }
  std::size_t chosen = candidates.size() - 1;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (candidates[c].second.tau_complement() <= epsilon * (1 + 1e-12) &&
        oscillation(candidates[c].second) <= tol) {
      chosen = c;
      break;
    }
  const Projection& e = candidates[chosen].second;
  const double osc = oscillation(e);
  std::vector<std::pair<Index, double>> profile;
  for (auto i : tail)
    profile.emplace_back(avgs[i].n, witness::compressed_norm(Matrix(avgs[i].value - limit), e));

  CertificateReport rep("bau_convergence", epsilon, e.tau_complement(),
                        default_tolerances().certificate * std::max(1.0, epsilon));
  rep.add_condition("tail_oscillation", tol, osc, 0.0);
  rep.set_witness(e);
  rep.set("tol_conv", tol).set("tail_samples", double(tail.size()))
      .set("sequence_length", double(seq.size())).set("stage", double(chosen));
  rep.note("witness: " + candidates[chosen].first);
  return BauCertificate{epsilon, e, limit, std::move(profile), tol, std::move(rep)};
}

// ||M^alpha(x) - M^beta(x)|| <= ((1/|n|) sum_{k<n} |alpha_k - beta_k|) ||x||_inf.
inline CertificateReport closure_transfer_check(const DSTuple& t, const Matrix& x,
                                                const WeightSequence& a, const WeightSequence& b,
                                                const SectorSequence& seq) {
  if (a.d() != b.d()) throw DimensionMismatch("closure_transfer_check: weight d differs");
  const double xn = operator_norm(x);
  const auto ma = average_stream(t, a, x, seq);
  const auto mb = average_stream(t, b, x, seq);
  const auto absdiff = a.combine(1.0, b, -1.0).map([](Complex z) { return Complex(std::abs(z)); });
  const auto prefix = absdiff.power_prefix(1.0);
  const double slack = 1e-12 * std::max(1.0, xn);
  double sup_diff = 0.0, sup_bound = 0.0, max_ratio = 0.0, max_excess = 0.0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Index& n = seq[i];
    if (!absdiff.covers(n)) throw HorizonExceeded("closure_transfer_check: weights do not cover sequence");
    const double bound = (*prefix)[absdiff.prefix_flat(n)] / index_volume(n) * xn;
    const double diff = operator_norm(Matrix(ma[i].value - mb[i].value));
    sup_diff = std::max(sup_diff, diff);
    sup_bound = std::max(sup_bound, bound);
    max_excess = std::max(max_excess, diff - bound);
    // ratio only where the bound is above round-off
    if (bound > slack) max_ratio = std::max(max_ratio, diff / bound);
  }
  CertificateReport rep("closure_transfer", sup_bound, sup_diff,
                        default_tolerances().certificate * std::max(1.0, sup_bound));
  rep.add_condition("per_index_excess", 0.0, max_excess, slack);
  rep.set("norm_inf", xn).set("max_ratio", max_ratio);
  return rep;
}

// Limits along two sector sequences agree, and the interleaved sequence is
// Cauchy over its tail.
inline CertificateReport subsequential_uniqueness_check(const DSTuple& t, const WeightSequence& a,
                                                        const Matrix& x, const SectorSequence& sa,
                                                        const SectorSequence& sb,
                                                        const ConvergenceOptions& opt = {}) {
  const double tol = resolve_tol_conv(opt, x);
  const auto merged = SectorSequence::merge(sa, sb);
  const auto ra = average_stream(t, a, x, sa);
  const auto rb = average_stream(t, a, x, sb);
  const auto rm = average_stream(t, a, x, merged);
  if (ra.empty() || rb.empty()) throw DomainError("subsequential_uniqueness_check: empty sequence");
  const double gap = operator_norm(Matrix(ra.back().value - rb.back().value));
  double osc = 0.0;
  for (auto i : tail_positions(rm.size(), opt.max_tail_samples))
    osc = std::max(osc, operator_norm(Matrix(rm[i].value - rm.back().value)));
  CertificateReport rep("subsequential_uniqueness", tol, gap, 0.0);
  rep.add_condition("merged_tail_oscillation", tol, osc, 0.0);
  rep.set("C_merged", merged.sector().C).set("tol_conv", tol)
      .set("merged_length", double(merged.size()));
  return rep;
}

// One projection e with tau(e^perp) <= epsilon making every family member's
// Cesaro sequence e M_n^alpha(T)(x) e Cauchy over the tail.
inline CertificateReport bww_membership_check(const DSMap& t, const Matrix& x,
                                              const std::vector<WeightSequence>& family,
                                              double epsilon, std::size_t horizon,
                                              const ConvergenceOptions& opt = {}) {
  if (family.empty()) throw DomainError("bww_membership_check: empty family");
  if (horizon < 1) throw DomainError("bww_membership_check: horizon must be >= 1");
  const Context& ctx = t.context();
  const double tol = resolve_tol_conv(opt, x);
  const auto pos = tail_positions(horizon, opt.max_tail_samples);
  std::vector<std::size_t> ns;
  for (auto p : pos) ns.push_back(p + 1);
  // differences M_n - M_H per family member over the sampled tail
  std::vector<std::vector<Matrix>> diffs(family.size());
  for (std::size_t f = 0; f < family.size(); ++f) {
    if (family[f].d() != 1) throw DimensionMismatch("bww_membership_check: weights must be d = 1");
    const auto r = stream_1d(t, family[f], x, ns);
    for (const auto& v : r) diffs[f].push_back(v.value - r.back().value);
  }
  const auto worst = [&](const Projection& e) {
    std::pair<std::size_t, std::size_t> at{0, 0};
    double s = -1.0;
    for (std::size_t f = 0; f < family.size(); ++f)
      for (std::size_t i = 0; i < diffs[f].size(); ++i) {
        const double v = witness::compressed_norm(diffs[f][i], e);
        if (v > s) s = v, at = {f, i};
      }
    return std::make_pair(s, at);
  };
  Projection e = Projection::identity(ctx);
  auto [osc, at] = worst(e);
  const double osc_identity = osc;
  std::size_t steps = 0, blocking = at.first;
  while (osc > tol && e.tau_complement() <= epsilon) {
    blocking = at.first;
    // cut the worst difference at cutoffs growing from tol; keep the first that helps
    Projection next = e;
    for (double c = tol; c <= 2.0 * operator_norm(diffs[at.first][at.second]) + tol; c *= 2.0) {
      const Projection cand =
          projection_meet({e, right_cut(ctx, diffs[at.first][at.second], c)}, 1e-12);
      if (witness::compressed_norm(diffs[at.first][at.second], cand) <= tol) next = cand;
      else break;
    }
    if (next.rank() == e.rank()) next = projection_meet({e, right_cut(ctx, diffs[at.first][at.second], tol)}, 1e-12);
    if (next.rank() == e.rank()) break;
    e = next;
    std::tie(osc, at) = worst(e);
    ++steps;
  }
  CertificateReport rep("bww_membership", epsilon, e.tau_complement(),
                        default_tolerances().certificate * std::max(1.0, epsilon));
  rep.add_condition("uniform_tail_oscillation", tol, osc, 0.0);
  rep.set_witness(e);
  rep.set("tol_conv", tol).set("horizon", double(horizon)).set("family_size", double(family.size()))
      .set("worst_member", double(at.first)).set("worst_index", double(ns[at.second]))
      .set("refinement_steps", double(steps)).set("identity_oscillation", osc_identity);
  // single-e re-verification over the whole family
  double recheck = 0.0;
  for (const auto& d : diffs)
    for (const auto& m : d) recheck = std::max(recheck, operator_norm(Matrix(e.matrix() * m * e.matrix())));
  rep.set("reverified_oscillation", recheck);
  if (!rep.pass()) {
    if (e.tau_complement() > epsilon) at.first = blocking;
    rep.set("worst_member", double(at.first));
    std::ostringstream os;
    os << "family member " << at.first << " stays oscillating: " << osc_identity << " > " << tol
       << " at e = 1, no admissible e removes it";
    rep.note(os.str());
  }
  return rep;
}

// Flight vectors v decay: ||Phi^n(v)||_2 eventually below tol.
inline CertificateReport jdlg_flight_decay_check(const DSMap& phi, std::size_t horizon,
                                                 double tol = 1e-8) {
  if (horizon == 0) throw DomainError("jdlg_flight_decay_check: horizon must be >= 1");
  const auto split = jdlg_split(phi);
  double worst_final = 0.0, min_density = 1.0;
  std::size_t worst_settle = 0;
  for (const auto& v : split.flight_basis) {
    const double v0 = v.norm();
    Matrix cur = v;
    std::size_t below = 0, settle = 0;
    for (std::size_t n = 1; n <= horizon; ++n) {
      cur = phi.apply(cur);
      if (cur.norm() <= tol * v0) ++below;
      else settle = n;
    }
    worst_final = std::max(worst_final, cur.norm() / v0);
    min_density = std::min(min_density, double(below) / double(horizon));
    worst_settle = std::max(worst_settle, settle + 1);
  }
  CertificateReport rep("flight_decay", tol, worst_final, 0.0);
  rep.set("flight_dim", double(split.flight_dim)).set("settle_index", double(worst_settle))
      .set("decay_density", split.flight_dim ? min_density : 1.0)
      .set("defective", split.defective ? 1.0 : 0.0);
  if (split.flight_dim == 0) rep.note("flight subspace is trivial");
  return rep;
}

// ---------------------------------------------------------------------------
// Weight fixtures

// alpha_k = mu^k, mu = exp(i theta).
inline WeightSequence rotation_weight(double theta, std::size_t horizon) {
  return WeightSequence({horizon}, [theta](const Index& k) {
    return detail::unimodular_power(theta, static_cast<long double>(k[0]));
  }, false);
}

// alpha_k = conj(omega)^k s_k with s_k = (-1)^{floor(log2(k+1))}: the sign
// flips on dyadic blocks so (1/n) sum s_k keeps oscillating.
inline WeightSequence resonance_weight(Complex omega, std::size_t horizon) {
  const double theta = -std::arg(omega);
  return WeightSequence({horizon}, [theta](const Index& k) {
    const double s = (std::bit_width(k[0] + 1) % 2 == 1) ? 1.0 : -1.0;
    return s * detail::unimodular_power(theta, static_cast<long double>(k[0]));
  }, false);
}

// Exact orbit average (1/m) sum_{k<m} T^k(x) for T^m = id.
inline Matrix orbit_average(const DSMap& t, const Matrix& x, std::size_t m) {
  Matrix s = Matrix::Zero(x.rows(), x.cols()), cur = x;
  for (std::size_t k = 0; k < m; ++k) s += cur, cur = t.apply(cur);
  return s / double(m);
}

}  // namespace ncerg

#endif  // NCERG_CONVERGENCE_HPP_
