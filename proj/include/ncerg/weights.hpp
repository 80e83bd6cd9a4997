#ifndef NCERG_WEIGHTS_HPP_
#define NCERG_WEIGHTS_HPP_

// Scalar weight sequences indexed by N_0^d: truncated W_q seminorms, sector
// suprema, trigonometric polynomials, rotation-generated Besicovitch
// sequences and Hartman (twisted Cesaro) estimates.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ncerg/core.hpp"
#include "ncerg/report.hpp"

namespace ncerg {

namespace detail {

inline std::size_t product(const Index& h) {
  std::size_t p = 1;
  for (auto v : h) p *= v;
  return p;
}

// Advances a multi-index over the box [lo, hi]^d (inclusive), last axis
// fastest. Returns false once the box is exhausted.
inline bool next_in_box(Index& n, const Index& lo, const Index& hi) {
  for (std::size_t i = n.size(); i-- > 0;) {
    if (n[i] < hi[i]) {
      ++n[i];
      return true;
    }
    n[i] = lo[i];
  }
  return false;
}

// exp(i * theta * n) with the angle product reduced in long double.
inline Complex unimodular_power(long double theta, long double n) {
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  const long double a = std::fmod(theta * n, two_pi);
  return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

inline long double angle_of(Complex z) {
  return std::atan2(static_cast<long double>(z.imag()), static_cast<long double>(z.real()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sectors N_C^(d) = {n in N^d : n_i <= C n_j for all i, j}

struct SectorSpec {
  double C = 1.0;
  std::size_t d = 1;

  SectorSpec() = default;
  SectorSpec(double c, std::size_t dim) : C(c), d(dim) {
    if (!(c >= 1.0)) throw DomainError("SectorSpec: C must be >= 1");
    if (dim == 0) throw DomainError("SectorSpec: d must be >= 1");
  }

  bool contains(const Index& n) const {
    if (n.size() != d) return false;
    const auto [lo, hi] = std::minmax_element(n.begin(), n.end());
    if (*lo == 0) return false;
    // components are integers; the relative slack only absorbs rounding in C
    return static_cast<double>(*hi) <= C * static_cast<double>(*lo) * (1.0 + 1e-12);
  }
};

// Calls fn(n) for every sector index with 1 <= n_i <= horizon[i], ordered by
// min component, then lexicographically.
template <class Fn>
void for_each_sector_index(const SectorSpec& s, const Index& horizon, Fn&& fn) {
  if (horizon.size() != s.d) throw DimensionMismatch("sector: horizon length != d");
  if (s.d == 1) {
    for (std::size_t k = 1; k <= horizon[0]; ++k) fn(Index{k});
    return;
  }
  const std::size_t top = *std::max_element(horizon.begin(), horizon.end());
  for (std::size_t m = 1; m <= top; ++m) {
    // components range over [m, floor(C m)], at least one equals m
    const auto cap = static_cast<std::size_t>(std::floor(s.C * static_cast<double>(m) *
                                                         (1.0 + 1e-12)));
    Index lo(s.d, m), hi(s.d);
    bool empty = false;
    for (std::size_t i = 0; i < s.d; ++i) {
      hi[i] = std::min(cap, horizon[i]);
      if (hi[i] < m) empty = true;
    }
    if (empty) continue;
    Index n = lo;
    do {
      if (*std::min_element(n.begin(), n.end()) == m) fn(n);
    } while (detail::next_in_box(n, lo, hi));
  }
}

// ---------------------------------------------------------------------------
// WeightSequence

class WeightSequence {
 public:
  using Generator = std::function<Complex(const Index&)>;

  // Materialized values, row-major over the box prod [0, horizon_i).
  WeightSequence(Index horizon, std::vector<Complex> values)
      : horizon_(std::move(horizon)), values_(std::move(values)) {
    validate_horizon();
    if (values_.size() != detail::product(horizon_))
      throw DimensionMismatch("WeightSequence: value count != product of horizons");
    cache_ = std::make_shared<Cache>();
  }

  // Closed-form generator. If `materialize` is set the values are tabulated
  // once; otherwise they are produced on demand.
  WeightSequence(Index horizon, Generator gen, bool materialize = true)
      : horizon_(std::move(horizon)), gen_(std::move(gen)) {
    validate_horizon();
    if (!gen_) throw DomainError("WeightSequence: empty generator");
    if (materialize) values_ = tabulate(horizon_, gen_);
    cache_ = std::make_shared<Cache>();
  }

  // Row-major table of fn over the box prod [0, horizon_i).
  template <class Fn>
  static std::vector<Complex> tabulate(const Index& horizon, Fn&& fn) {
    std::vector<Complex> out(detail::product(horizon));
    Index k(horizon.size(), 0);
    const Index lo(horizon.size(), 0);
    Index hi(horizon.size());
    for (std::size_t i = 0; i < hi.size(); ++i) hi[i] = horizon[i] - 1;
    std::size_t f = 0;
    do out[f++] = fn(k);
    while (detail::next_in_box(k, lo, hi));
    return out;
  }

  static WeightSequence constant(Index horizon, Complex c) {
    return WeightSequence(std::move(horizon), [c](const Index&) { return c; }, false);
  }

  static WeightSequence zero(Index horizon) { return constant(std::move(horizon), 0.0); }

  // d = 1 convenience.
  static WeightSequence from_values(std::vector<Complex> values) {
    const Index h{values.size()};
    return WeightSequence(h, std::move(values));
  }

  std::size_t d() const { return horizon_.size(); }
  const Index& horizon() const { return horizon_; }
  bool materialized() const { return !values_.empty(); }
  bool has_generator() const { return static_cast<bool>(gen_); }

  bool covers(const Index& n) const {
    if (n.size() != d()) return false;
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i] > horizon_[i]) return false;
    return true;
  }

  Complex operator()(const Index& k) const {
    if (k.size() != d()) throw DimensionMismatch("WeightSequence: index length != d");
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i] >= horizon_[i]) {
        std::ostringstream os;
        os << "WeightSequence: index " << k[i] << " on axis " << i << " exceeds horizon "
           << horizon_[i];
        throw HorizonExceeded(os.str());
      }
    if (!values_.empty()) return values_[flat(k)];
    return gen_(k);
  }

  Complex at(std::size_t k) const { return (*this)(Index{k}); }

  // Materialized generator values agree with the generator on sampled indices.
  double generator_defect(std::size_t stride = 97) const {
    if (!gen_ || values_.empty()) return 0.0;
    double worst = 0.0;
    for (std::size_t f = 0; f < values_.size(); f += std::max<std::size_t>(1, stride))
      worst = std::max(worst, std::abs(values_[f] - gen_(unflat(f))));
    return worst;
  }

  // Entrywise map; the result is materialized.
  WeightSequence map(const std::function<Complex(Complex)>& f) const {
    std::vector<Complex> out(detail::product(horizon_));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(value_flat(i));
    return WeightSequence(horizon_, std::move(out));
  }

  // a * this + b * other on the common horizon.
  WeightSequence combine(Complex a, const WeightSequence& other, Complex b) const {
    if (other.d() != d()) throw DimensionMismatch("combine: d differs");
    Index h(d());
    for (std::size_t i = 0; i < d(); ++i) h[i] = std::min(horizon_[i], other.horizon_[i]);
    return WeightSequence(h, tabulate(h, [&](const Index& k) {
                            return a * (*this)(k) + b * other(k);
                          }));
  }

  // Restriction to a smaller horizon box.
  WeightSequence truncated(const Index& h) const {
    if (!covers(h)) throw HorizonExceeded("truncated: new horizon exceeds the old one");
    return WeightSequence(h, tabulate(h, [&](const Index& k) { return (*this)(k); }));
  }

  // Table P of size prod (H_i + 1) with P[n] = sum_{k < n} |alpha_k|^q, cached per q.
  std::shared_ptr<const std::vector<double>> power_prefix(double q) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->prefix.find(q);
    if (it != cache_->prefix.end()) return it->second;
    auto table = std::make_shared<std::vector<double>>(build_prefix(q));
    cache_->prefix.emplace(q, table);
    return table;
  }

  // Flat index into the prefix table for an upper corner n (0 <= n_i <= H_i).
  std::size_t prefix_flat(const Index& n) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < n.size(); ++i) f = f * (horizon_[i] + 1) + n[i];
    return f;
  }

  std::size_t flat(const Index& k) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < k.size(); ++i) f = f * horizon_[i] + k[i];
    return f;
  }

  Index unflat(std::size_t f) const {
    Index k(d());
    for (std::size_t i = d(); i-- > 0;) {
      k[i] = f % horizon_[i];
      f /= horizon_[i];
    }
    return k;
  }

  Complex value_flat(std::size_t f) const {
    return values_.empty() ? gen_(unflat(f)) : values_[f];
  }

 private:
  struct Cache {
    std::mutex mu;
    std::map<double, std::shared_ptr<const std::vector<double>>> prefix;
  };

  void validate_horizon() const {
    if (horizon_.empty()) throw DomainError("WeightSequence: d must be >= 1");
    for (auto h : horizon_)
      if (h == 0) throw DomainError("WeightSequence: horizons must be >= 1");
  }

  std::vector<double> build_prefix(double q) const {
    Index ext(d());
    for (std::size_t i = 0; i < d(); ++i) ext[i] = horizon_[i] + 1;
    std::vector<double> p(detail::product(ext), 0.0);
    const std::size_t total = detail::product(horizon_);
    for (std::size_t f = 0; f < total; ++f) {
      Index k = unflat(f);
      for (auto& v : k) ++v;
      const double a = std::abs(value_flat(f));
      p[prefix_flat(k)] = q == 1.0 ? a : std::pow(a, q);
    }
    // cumulative sums along each axis
    std::size_t stride = 1;
    for (std::size_t ax = d(); ax-- > 0;) {
      const std::size_t len = ext[ax];
      const std::size_t block = stride * len;
      for (std::size_t base = 0; base < p.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off)
          for (std::size_t j = 1; j < len; ++j)
            p[base + off + j * stride] += p[base + off + (j - 1) * stride];
      stride = block;
    }
    return p;
  }

  Index horizon_;
  std::vector<Complex> values_;
  Generator gen_;
  std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Truncated seminorms

inline void check_q(double q) {
  if (!(q >= 1.0) || std::isinf(q)) throw DomainError("seminorm: q must lie in [1, inf)");
}

struct SeminormEstimate {
  double value = 0.0;
  Index argmax;        // index attaining the sup
  Index horizon;       // upper corner of the searched box
  std::size_t count = 0;  // number of indices inspected
};

namespace detail {

inline double q_average(const WeightSequence& a, const std::vector<double>& p, const Index& n,
                        double q) {
  double card = 1.0;
  for (auto v : n) card *= static_cast<double>(v);
  const double m = p[a.prefix_flat(n)] / card;
  return q == 1.0 ? m : std::pow(m, 1.0 / q);
}

}  // namespace detail

// sup over n with min component >= tail_start and n_i <= limit_i of
// ((1/|n|) sum_{k<n} |alpha_k|^q)^{1/q}. An upper-truncation proxy for the limsup.
inline SeminormEstimate wq_seminorm_detail(const WeightSequence& a, double q,
                                           std::size_t tail_start, Index limit = {}) {
  check_q(q);
  if (limit.empty()) limit = a.horizon();
  if (!a.covers(limit)) throw HorizonExceeded("wq_seminorm: limit exceeds horizon");
  const std::size_t start = std::max<std::size_t>(1, tail_start);
  SeminormEstimate out;
  out.horizon = limit;
  for (auto h : limit)
    if (h < start) throw DomainError("wq_seminorm: horizon below tail_start");
  const auto p = a.power_prefix(q);
  const Index lo(a.d(), start);
  Index n = lo;
  do {
    const double v = detail::q_average(a, *p, n, q);
    ++out.count;
    if (v > out.value || out.argmax.empty()) {
      out.value = std::max(out.value, v);
      out.argmax = n;
    }
  } while (detail::next_in_box(n, lo, limit));
  return out;
}

inline double wq_seminorm_estimate(const WeightSequence& a, double q, std::size_t tail_start) {
  return wq_seminorm_detail(a, q, tail_start).value;
}

// Growth diagnostic: compares the estimate on the half box with the full
// box. A bounded sequence has ratio close to 1; ratio > 1.25 flags it as
// not in W_q at this horizon.
struct WqMembership {
  double half_value = 0.0;
  double full_value = 0.0;
  double growth = 1.0;
  bool in_wq = true;
};

inline WqMembership wq_membership(const WeightSequence& a, double q, std::size_t tail_start,
                                  double max_growth = 1.25) {
  Index half(a.d());
  for (std::size_t i = 0; i < a.d(); ++i)
    half[i] = std::max<std::size_t>(std::max<std::size_t>(1, tail_start), a.horizon()[i] / 2);
  WqMembership m;
  m.half_value = wq_seminorm_detail(a, q, tail_start, half).value;
  m.full_value = wq_seminorm_detail(a, q, tail_start).value;
  m.growth = m.half_value > 0.0 ? m.full_value / m.half_value : (m.full_value > 0 ? kInf : 1.0);
  m.in_wq = m.growth <= max_growth;
  return m;
}

// |alpha|_{W_{q,C}}: sup over sector indices within the horizon.
inline SeminormEstimate sector_sup_detail(const WeightSequence& a, double q,
                                          const SectorSpec& s) {
  check_q(q);
  if (s.d != a.d()) throw DimensionMismatch("sector_sup: sector d != sequence d");
  const auto p = a.power_prefix(q);
  SeminormEstimate out;
  out.horizon = a.horizon();
  for_each_sector_index(s, a.horizon(), [&](const Index& n) {
    const double v = detail::q_average(a, *p, n, q);
    ++out.count;
    if (v > out.value || out.argmax.empty()) {
      out.value = std::max(out.value, v);
      out.argmax = n;
    }
  });
  return out;
}

inline double sector_sup_seminorm(const WeightSequence& a, double q, const SectorSpec& s) {
  return sector_sup_detail(a, q, s).value;
}

// Finite-set argument: sector indices with min component < N lie in
// [0, C N]^d. Enumerates a box strictly larger than that cube and counts
// sector members outside it (claimed 0); also reports the max q-average over
// the finite set (within the horizon).
inline CertificateReport finiteness_transfer_check(const WeightSequence& a, double q, double C,
                                                   std::size_t N) {
  check_q(q);
  const SectorSpec s(C, a.d());
  if (N == 0) throw DomainError("finiteness_transfer_check: N must be >= 1");
  const double cube = C * static_cast<double>(N);
  const auto box = static_cast<std::size_t>(std::ceil(2.0 * cube)) + 2;
  const Index lo(a.d(), 1), hi(a.d(), box);
  const auto p = a.power_prefix(q);
  std::size_t outside = 0, members = 0, measured = 0;
  double max_avg = 0.0;
  Index n = lo;
  do {
    if (!s.contains(n)) continue;
    if (*std::min_element(n.begin(), n.end()) >= N) continue;
    ++members;
    for (auto v : n)
      if (static_cast<double>(v) > cube * (1.0 + 1e-12)) {
        ++outside;
        break;
      }
    if (a.covers(n)) {
      ++measured;
      max_avg = std::max(max_avg, detail::q_average(a, *p, n, q));
    }
  } while (detail::next_in_box(n, lo, hi));
  CertificateReport rep("finiteness_transfer", 0.0, static_cast<double>(outside), 0.0);
  rep.set("q", q).set("C", C).set("N", static_cast<double>(N))
      .set("set_size", static_cast<double>(members))
      .set("measured", static_cast<double>(measured))
      .set("max_average", max_avg)
      .set("box", static_cast<double>(box));
  if (measured < members) rep.note("part of the finite set lies beyond the horizon");
  return rep;
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials P(n) = sum_j r_j prod_i lambda_{j,i}^{n_i}

struct TrigTerm {
  Complex coeff;
  std::vector<Complex> freq;  // d unimodular numbers
};

class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(std::size_t d, std::vector<TrigTerm> terms,
                 double tol = default_tolerances().unimodular)
      : d_(d), terms_(std::move(terms)) {
    if (d_ == 0) throw DomainError("TrigPolynomial: d must be >= 1");
    for (const auto& t : terms_) {
      if (t.freq.size() != d_) throw DimensionMismatch("TrigPolynomial: frequency length != d");
      std::vector<long double> ang;
      for (const auto& z : t.freq) {
        if (std::abs(std::abs(z) - 1.0) > tol)
          throw DomainError("TrigPolynomial: frequency is not unimodular");
        ang.push_back(detail::angle_of(z));
      }
      angles_.push_back(std::move(ang));
    }
  }

  std::size_t d() const { return d_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }

  Complex operator()(const Index& n) const {
    if (n.size() != d_) throw DimensionMismatch("trig_eval: index length != d");
    Complex s = 0.0;
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      long double phase = 0.0L;
      for (std::size_t i = 0; i < d_; ++i)
        phase += angles_[j][i] * static_cast<long double>(n[i]);
      s += terms_[j].coeff * detail::unimodular_power(phase, 1.0L);
    }
    return s;
  }

  // Tabulates P on the horizon box as a weight sequence.
  WeightSequence to_sequence(const Index& horizon) const {
    return WeightSequence(horizon,
                          WeightSequence::tabulate(horizon, [this](const Index& k) { return (*this)(k); }));
  }

 private:
  std::size_t d_ = 1;
  std::vector<TrigTerm> terms_;
  std::vector<std::vector<long double>> angles_;
};

inline Complex trig_eval(const TrigPolynomial& p, const Index& n) { return p(n); }

// ---------------------------------------------------------------------------
// Rotation-generated sequences alpha_k = f(mu^k lambda), f(z) = sum_j a_j z^j

struct FourierCoeff {
  std::size_t j;
  Complex a;
};

// Rational-rotation guard: rejects mu = exp(2 pi i t) when t is within tol of
// p/q with q <= max_den. By Legendre's theorem any such p/q is a convergent of
// t once tol < 1/(2 max_den^2), so scanning convergents is complete.
inline void require_irrational_rotation(Complex mu, std::size_t max_den = 1000000,
                                        double tol = 1e-14) {
  if (std::abs(std::abs(mu) - 1.0) > default_tolerances().unimodular)
    throw DomainError("rotation: mu is not unimodular");
  constexpr long double two_pi = 6.283185307179586476925286766559L;
  long double t = detail::angle_of(mu) / two_pi;
  t -= std::floor(t);
  long double x = t;
  long double p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const long double a = std::floor(x);
    const long double p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > static_cast<long double>(max_den)) break;
    if (std::fabs(t - p2 / q2) <= tol) {
      std::ostringstream os;
      os << "rotation: mu is a root of unity within guard (t ~ " << static_cast<long long>(p2)
         << "/" << static_cast<long long>(q2) << ")";
      throw DomainError(os.str());
    }
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const long double frac = x - a;
    if (frac < 1e-30L) break;
    x = 1.0L / frac;
  }
}

// P_lambda(k) = sum_{j <= max_degree} a_j lambda^j (mu^j)^k.
inline TrigPolynomial besicovitch_polynomial(const std::vector<FourierCoeff>& coeffs, Complex mu,
                                             Complex lambda,
                                             std::size_t max_degree = static_cast<std::size_t>(-1)) {
  const long double tm = detail::angle_of(mu), tl = detail::angle_of(lambda);
  std::vector<TrigTerm> terms;
  for (const auto& c : coeffs) {
    if (c.j > max_degree) continue;
    const auto j = static_cast<long double>(c.j);
    terms.push_back({c.a * detail::unimodular_power(tl, j), {detail::unimodular_power(tm, j)}});
  }
  return TrigPolynomial(1, std::move(terms));
}

inline double besicovitch_tail_bound(const std::vector<FourierCoeff>& coeffs,
                                     std::size_t max_degree) {
  double s = 0.0;
  for (const auto& c : coeffs)
    if (c.j > max_degree) s += std::abs(c.a);
  return s;
}

struct BesicovitchFixture {
  WeightSequence alpha;
  TrigPolynomial poly;
};

inline BesicovitchFixture besicovitch_generate(const std::vector<FourierCoeff>& coeffs,
                                               Complex mu, Complex lambda, std::size_t length) {
  require_irrational_rotation(mu);
  if (std::abs(std::abs(lambda) - 1.0) > default_tolerances().unimodular)
    throw DomainError("besicovitch_generate: lambda is not unimodular");
  if (length == 0) throw DomainError("besicovitch_generate: length must be >= 1");
  const long double tm = detail::angle_of(mu), tl = detail::angle_of(lambda);
  std::vector<Complex> values(length);
  for (std::size_t k = 0; k < length; ++k) {
    // z = mu^k lambda on the circle, then f(z) term by term
    const long double zang = std::fmod(tm * static_cast<long double>(k) + tl,
                                       6.283185307179586476925286766559L);
    Complex f = 0.0;
    for (const auto& c : coeffs) f += c.a * detail::unimodular_power(zang, c.j);
    values[k] = f;
  }
  return {WeightSequence::from_values(std::move(values)), besicovitch_polynomial(coeffs, mu, lambda)};
}

// W_q proxy distance between alpha and P sampled on alpha's horizon.
inline double besicovitch_distance(const WeightSequence& a, const TrigPolynomial& p, double q,
                                   std::size_t tail_start) {
  if (p.d() != a.d()) throw DimensionMismatch("besicovitch_distance: d differs");
  const WeightSequence diff(a.horizon(), WeightSequence::tabulate(a.horizon(), [&](const Index& k) {
                              return a(k) - p(k);
                            }));
  return wq_seminorm_estimate(diff, q, tail_start);
}

// ---------------------------------------------------------------------------
// Hartman estimate (d = 1)

struct HartmanEstimate {
  Complex limit;
  double oscillation = 0.0;
  std::size_t horizon = 0;
};

namespace detail {

// Diameter of a planar point set via its convex hull.
inline double diameter(std::vector<Complex> pts) {
  if (pts.size() < 2) return 0.0;
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  auto cross = [](Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j)
      best = std::max(best, std::abs(hull[i] - hull[j]));
  return best;
}

}  // namespace detail

inline HartmanEstimate hartman_estimate(const WeightSequence& a, Complex lambda,
                                        std::size_t horizon = 0) {
  if (a.d() != 1) throw DimensionMismatch("hartman_estimate: requires d = 1");
  if (horizon == 0) horizon = a.horizon()[0];
  if (horizon > a.horizon()[0]) throw HorizonExceeded("hartman_estimate: horizon too large");
  const long double th = detail::angle_of(lambda);
  const std::size_t tail = horizon - horizon / 4;
  std::vector<Complex> tail_values;
  Complex s = 0.0;
  HartmanEstimate out;
  out.horizon = horizon;
  for (std::size_t k = 0; k < horizon; ++k) {
    s += a.at(k) * detail::unimodular_power(th, static_cast<long double>(k));
    const std::size_t n = k + 1;
    if (n >= tail) tail_values.push_back(s / static_cast<double>(n));
  }
  out.limit = s / static_cast<double>(horizon);
  out.oscillation = detail::diameter(std::move(tail_values));
  return out;
}

// ---------------------------------------------------------------------------
// alpha = alpha0 - alpha1 + i (alpha2 - alpha3) with entrywise nonnegative parts

inline std::array<WeightSequence, 4> decompose_four_nonneg(const WeightSequence& a) {
  return {a.map([](Complex z) { return Complex(std::max(z.real(), 0.0)); }),
          a.map([](Complex z) { return Complex(std::max(-z.real(), 0.0)); }),
          a.map([](Complex z) { return Complex(std::max(z.imag(), 0.0)); }),
          a.map([](Complex z) { return Complex(std::max(-z.imag(), 0.0)); })};
}

// Verifies the parts respect |alpha_j|_{W_{q,C}} <= |alpha|_{W_{q,C}}.
inline CertificateReport decomposition_check(const WeightSequence& a, double q,
                                             const SectorSpec& s,
                                             double tol = default_tolerances().certificate) {
  const auto parts = decompose_four_nonneg(a);
  const double whole = sector_sup_seminorm(a, q, s);
  double worst = 0.0, recon = 0.0;
  for (const auto& part : parts) worst = std::max(worst, sector_sup_seminorm(part, q, s));
  for (std::size_t f = 0; f < detail::product(a.horizon()); ++f) {
    const Complex r = parts[0].value_flat(f) - parts[1].value_flat(f) +
                      Complex(0, 1) * (parts[2].value_flat(f) - parts[3].value_flat(f));
    recon = std::max(recon, std::abs(r - a.value_flat(f)));
  }
  CertificateReport rep("four_part_weight_split", whole, worst, tol * std::max(1.0, whole));
  rep.set("q", q).set("C", s.C).set("reconstruction_error", recon);
  return rep;
}

}  // namespace ncerg

#endif  // NCERG_WEIGHTS_HPP_
