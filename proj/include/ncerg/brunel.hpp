#ifndef NCERG_BRUNEL_HPP_
#define NCERG_BRUNEL_HPP_

// Reduction of order: an auxiliary single operator S = sum_n a_n T^n built
// from supplied weights, and a numerically calibrated domination
//   (1/n^d) sum_{k in [0,n)^d} T^k(x) <= (chi / n_d) sum_{j < n_d} S^j(x).

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ncerg/dsop.hpp"
#include "ncerg/random.hpp"
#include "ncerg/report.hpp"
#include "ncerg/weights.hpp"

namespace ncerg {

struct BrunelWeights {
  std::size_t d = 2;
  std::size_t H = 0;  // entries live in [0, H]^d
  std::vector<std::pair<Index, double>> entries;
  double chi = 1.0;
  // n -> n_d; calibrated values take precedence over the rule
  std::map<std::size_t, std::size_t> nd_table;
  std::function<std::size_t(std::size_t)> nd_rule = [](std::size_t n) { return n; };
  double deficit_threshold = 1e-6;

  std::size_t n_d(std::size_t n) const {
    const auto it = nd_table.find(n);
    return it != nd_table.end() ? it->second : nd_rule(n);
  }
  double total() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.second;
    return s;
  }
  double deficit() const { return 1.0 - total(); }

  void validate() const {
    if (d == 0) throw DomainError("BrunelWeights: d must be >= 1");
    if (entries.empty()) throw DomainError("BrunelWeights: no entries");
    for (const auto& [n, a] : entries) {
      if (n.size() != d) throw DimensionMismatch("BrunelWeights: entry index has wrong length");
      for (auto c : n)
        if (c > H) throw DomainError("BrunelWeights: entry outside the truncation radius");
      if (!(a > 0.0)) throw DomainError("BrunelWeights: weights must be > 0");
    }
    const double t = total();
    if (t > 1.0 + 1e-12) throw DomainError("BrunelWeights: weights sum to more than 1");
    if (1.0 - t > deficit_threshold) {
      std::ostringstream os;
      os << "BrunelWeights: truncation deficit " << 1.0 - t << " exceeds threshold "
         << deficit_threshold;
      throw DomainError(os.str());
    }
    if (!(chi > 0.0)) throw DomainError("BrunelWeights: chi must be > 0");
  }

  // Product of geometric(r) laws per axis on [0, H]^d. Renormalized to total
  // mass 1 unless `renormalize` is false (then the tail mass is the deficit).
  static BrunelWeights product_geometric(std::size_t d, std::size_t H, double r = 0.5,
                                         bool renormalize = true) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("product_geometric: ratio must lie in (0,1)");
    BrunelWeights w;
    w.d = d;
    w.H = H;
    Index k(d, 0);
    double total = 0.0;
    do {
      double a = 1.0;
      for (auto c : k) a *= (1.0 - r) * std::pow(r, double(c));
      w.entries.emplace_back(k, a);
      total += a;
    } while (detail::next_in_box(k, Index(d, 0), Index(d, H)));
    if (renormalize)
      for (auto& e : w.entries) e.second /= total;
    return w;
  }

  // Uniform law on [0, side)^d.
  static BrunelWeights uniform_box(std::size_t d, std::size_t side) {
    if (side == 0) throw DomainError("uniform_box: side must be >= 1");
    BrunelWeights w;
    w.d = d;
    w.H = side - 1;
    Index k(d, 0);
    const double a = 1.0 / std::pow(double(side), double(d));
    do w.entries.emplace_back(k, a);
    while (detail::next_in_box(k, Index(d, 0), Index(d, side - 1)));
    return w;
  }

  // Point mass at a single index (k = 0 gives S = identity; d = 1, k = 1 gives S = T).
  static BrunelWeights point_mass(Index k) {
    BrunelWeights w;
    w.d = k.size();
    w.H = k.empty() ? 0 : *std::max_element(k.begin(), k.end());
    w.entries.emplace_back(std::move(k), 1.0);
    return w;
  }
};

namespace detail {

// Superoperators L_i^k for k = 0..H, per axis.
inline std::vector<std::vector<Matrix>> axis_powers(const DSTuple& t, std::size_t H) {
  std::vector<std::vector<Matrix>> pw(t.d());
  for (std::size_t i = 0; i < t.d(); ++i) {
    const Matrix& l = t[i].superoperator_matrix();
    pw[i].push_back(Matrix::Identity(l.rows(), l.cols()));
    for (std::size_t k = 1; k <= H; ++k) pw[i].push_back(l * pw[i].back());
  }
  return pw;
}

// Superoperator of T_1^{k_1} ... T_d^{k_d} (T_d applied first).
inline Matrix tuple_superop(const std::vector<std::vector<Matrix>>& pw, const Index& k) {
  Matrix m = pw[0][k[0]];
  for (std::size_t i = 1; i < k.size(); ++i) m = m * pw[i][k[i]];
  return m;
}

}  // namespace detail

inline DSMap brunel_operator(const DSTuple& t, const BrunelWeights& w) {
  w.validate();
  if (t.d() != w.d) throw DimensionMismatch("brunel_operator: tuple and weight dimension differ");
  if (!t.commuting()) throw DomainError("brunel_operator: tuple must commute");
  const auto pw = detail::axis_powers(t, w.H);
  const auto n2 = static_cast<Eigen::Index>(t.context()->dim() * t.context()->dim());
  Matrix l = Matrix::Zero(n2, n2);
  for (const auto& [k, a] : w.entries) l += a * detail::tuple_superop(pw, k);
  return DSMap::superoperator(t.context(), std::move(l));
}

// Superoperators of both sides at parameter n, with chi factored out of the right.
struct DominationSides {
  Matrix lhs;  // (1/n^d) sum_{k in [0,n)^d} T^k
  Matrix rhs;  // (1/n_d) sum_{j < n_d} S^j
};

inline DominationSides domination_sides(const DSTuple& t, const DSMap& s, std::size_t n,
                                        std::size_t nd) {
  if (n == 0 || nd == 0) throw DomainError("domination: n and n_d must be >= 1");
  const auto n2 = static_cast<Eigen::Index>(t.context()->dim() * t.context()->dim());
  // commuting factors: product of per-axis Cesaro sums
  Matrix lhs = Matrix::Identity(n2, n2);
  for (std::size_t i = 0; i < t.d(); ++i) {
    const Matrix& l = t[i].superoperator_matrix();
    Matrix acc = Matrix::Zero(n2, n2), pk = Matrix::Identity(n2, n2);
    for (std::size_t k = 0; k < n; ++k) acc += pk, pk = l * pk;
    lhs = lhs * (acc / double(n));
  }
  const Matrix& ls = s.superoperator_matrix();
  Matrix rhs = Matrix::Zero(n2, n2), pj = Matrix::Identity(n2, n2);
  for (std::size_t j = 0; j < nd; ++j) rhs += pj, pj = ls * pj;
  return {std::move(lhs), rhs / double(nd)};
}

// Rank-one probes: basis vectors, the real and imaginary pair combinations,
// then `random` random unit vectors.
inline std::vector<Vector> domination_probes(std::size_t n, std::size_t random, std::uint64_t seed) {
  std::vector<Vector> out;
  const auto dim = static_cast<Eigen::Index>(n);
  for (Eigen::Index i = 0; i < dim; ++i) out.push_back(Vector::Unit(dim, i));
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      out.push_back(r * (Vector::Unit(dim, i) + Vector::Unit(dim, j)));
      out.push_back(r * (Vector::Unit(dim, i) + Complex(0, 1) * Vector::Unit(dim, j)));
    }
  Rng rng(seed);
  for (std::size_t k = 0; k < random; ++k) out.push_back(random_unit_vector(rng, n));
  return out;
}

// Min over probes of the normalized margin of chi * rhs(x) - lhs(x).
inline double domination_margin(const DominationSides& sides, double chi,
                                const std::vector<Matrix>& probes,
                                std::size_t* worst = nullptr) {
  double best = 1e300;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto n = probes[i].rows();
    const Matrix l = unvectorize(sides.lhs * vectorize(probes[i]), n);
    const Matrix r = chi * unvectorize(sides.rhs * vectorize(probes[i]), n);
    const double m = loewner_margin(l, r);
    if (m < best) {
      best = m;
      if (worst) *worst = i;
    }
  }
  return best;
}

inline std::vector<Matrix> probe_matrices(const std::vector<Vector>& vs) {
  std::vector<Matrix> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(v * v.adjoint());
  return out;
}

inline CertificateReport domination_check(const DSTuple& t, const BrunelWeights& w, std::size_t n,
                                          std::size_t probes, std::uint64_t seed,
                                          double tol = default_tolerances().certificate) {
  const DSMap s = brunel_operator(t, w);
  const std::size_t nd = w.n_d(n);
  const auto sides = domination_sides(t, s, n, nd);
  const auto ps = probe_matrices(domination_probes(t.context()->dim(), probes, seed));
  std::size_t worst = 0;
  const double m = domination_margin(sides, w.chi, ps, &worst);
  CertificateReport rep("brunel_domination", 0.0, -m, tol);
  rep.set("n", double(n)).set("n_d", double(nd)).set("chi", w.chi).set("d", double(w.d))
      .set("probes", double(ps.size())).set("worst_probe", double(worst))
      .set("deficit", w.deficit());
  return rep;
}

struct BrunelSearchOptions {
  double chi_cap = 1e6;
  double rel_precision = 1e-6;
  double tol = default_tolerances().certificate;
  std::size_t nd_max_factor = 0;  // scan n_d in 1..factor*n; 0 means H (at least 1)
};

// For each n, scans n_d and bisects the minimal chi passing every probe; the
// result carries the max-over-n chi and the per-n n_d table.
inline BrunelWeights search_parameters(const DSTuple& t, BrunelWeights w,
                                       const std::vector<std::size_t>& n_range, std::size_t probes,
                                       std::uint64_t seed, const BrunelSearchOptions& opt = {}) {
  if (n_range.empty()) throw DomainError("search_parameters: empty n range");
  const DSMap s = brunel_operator(t, w);
  const auto ps = probe_matrices(domination_probes(t.context()->dim(), probes, seed));
  const std::size_t factor = opt.nd_max_factor ? opt.nd_max_factor : std::max<std::size_t>(1, w.H);
  const auto feasible = [&](const DominationSides& sd, double chi) {
    return domination_margin(sd, chi, ps) >= -opt.tol;
  };
  double chi_all = 0.0;
  w.nd_table.clear();
  for (std::size_t n : n_range) {
    double best_chi = opt.chi_cap;
    std::size_t best_nd = 0;
    for (std::size_t nd = 1; nd <= factor * n; ++nd) {
      const auto sd = domination_sides(t, s, n, nd);
      // cannot improve on the incumbent
      if (!feasible(sd, best_chi)) continue;
      double lo = 0.0, hi = best_chi;
      if (feasible(sd, 1.0)) hi = std::min(hi, 1.0);
      while (hi - lo > opt.rel_precision * hi) {
        const double mid = 0.5 * (lo + hi);
        (feasible(sd, mid) ? hi : lo) = mid;
      }
      if (hi < best_chi || best_nd == 0) best_chi = hi, best_nd = nd;
    }
    if (best_nd == 0) {
      std::ostringstream os;
      os << "search_parameters: no chi <= " << opt.chi_cap << " dominates at n = " << n
         << " (n_d scanned up to " << factor * n << ")";
      throw DomainError(os.str());
    }
    w.nd_table[n] = best_nd;
    chi_all = std::max(chi_all, best_chi);
  }
  w.chi = chi_all;
  return w;
}

}  // namespace ncerg

#endif  // NCERG_BRUNEL_HPP_
