#ifndef NCERG_AVERAGES_HPP_
#define NCERG_AVERAGES_HPP_

// Weighted multiparameter ergodic averages
//   M_n^alpha(T)(x) = (1/|n|) sum_{k < n} alpha_k T_1^{k_1} ... T_d^{k_d}(x)
// over sector indices and along sequences in a sector.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "ncerg/dsop.hpp"
#include "ncerg/weights.hpp"

namespace ncerg {

struct AverageResult {
  Index n;
  Matrix value;
  double normalization = 1.0;  // |n|, or |n| * seminorm for normalized averages
};

inline double index_volume(const Index& n) {
  double v = 1.0;
  for (auto c : n) v *= static_cast<double>(c);
  return v;
}

// ---------------------------------------------------------------------------
// Orbit table Y[k] = T^k(x) on the box k < horizon, computed with one map
// application per entry: Y[k] = T_i(Y[k - e_i]) for the first axis i with
// k_i > 0. That respects the order T_1^{k_1} ... T_d^{k_d} even for
// non-commuting tuples.

class OrbitTable {
 public:
  OrbitTable(const DSTuple& t, const Matrix& x, Index horizon)
      : horizon_(std::move(horizon)), n_(x.rows()) {
    if (horizon_.size() != t.d()) throw DimensionMismatch("OrbitTable: horizon length != d");
    t.context()->check(x);
    for (auto h : horizon_)
      if (h == 0) throw DomainError("OrbitTable: horizon must be >= 1");
    const std::size_t total = detail::product(horizon_);
    orbit_.resize(total);
    orbit_[0] = x;
    for (std::size_t f = 1; f < total; ++f) {
      const Index k = unflat(f);
      std::size_t axis = 0;
      while (k[axis] == 0) ++axis;
      Index prev = k;
      --prev[axis];
      orbit_[f] = t[axis].apply(orbit_[flat(prev)]);
    }
  }

  const Index& horizon() const { return horizon_; }
  const Matrix& operator[](const Index& k) const { return orbit_.at(flat(k)); }
  const Matrix& at_flat(std::size_t f) const { return orbit_[f]; }
  std::size_t size() const { return orbit_.size(); }
  Eigen::Index dim() const { return n_; }

  std::size_t flat(const Index& k) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < k.size(); ++i) f = f * horizon_[i] + k[i];
    return f;
  }
  Index unflat(std::size_t f) const {
    Index k(horizon_.size());
    for (std::size_t i = horizon_.size(); i-- > 0;) {
      k[i] = f % horizon_[i];
      f /= horizon_[i];
    }
    return k;
  }

 private:
  Index horizon_;
  Eigen::Index n_;
  std::vector<Matrix> orbit_;
};

// Summed-area table S[n] = sum_{k < n} alpha_k Y[k], so every box average is
// a single lookup.
class WeightedSums {
 public:
  WeightedSums(std::shared_ptr<const OrbitTable> orbit, const WeightSequence& alpha)
      : orbit_(std::move(orbit)) {
    const Index& h = orbit_->horizon();
    if (alpha.d() != h.size()) throw DimensionMismatch("WeightedSums: weight d != tuple d");
    if (!alpha.covers(h)) throw HorizonExceeded("WeightedSums: weights do not cover horizon");
    ext_.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) ext_[i] = h[i] + 1;
    const auto n = orbit_->dim();
    sums_.assign(detail::product(ext_), Matrix::Zero(n, n));
    for (std::size_t f = 0; f < orbit_->size(); ++f) {
      Index k = orbit_->unflat(f);
      const Complex a = alpha(k);
      for (auto& v : k) ++v;
      if (a != Complex(0.0)) sums_[ext_flat(k)] = a * orbit_->at_flat(f);
    }
    std::size_t stride = 1;
    for (std::size_t ax = h.size(); ax-- > 0;) {
      const std::size_t len = ext_[ax], block = stride * len;
      for (std::size_t base = 0; base < sums_.size(); base += block)
        for (std::size_t off = 0; off < stride; ++off)
          for (std::size_t j = 1; j < len; ++j)
            sums_[base + off + j * stride] += sums_[base + off + (j - 1) * stride];
      stride = block;
    }
  }

  const Matrix& sum(const Index& n) const {
    for (std::size_t i = 0; i < n.size(); ++i)
      if (n[i] >= ext_[i]) throw HorizonExceeded("WeightedSums: index beyond horizon");
    return sums_[ext_flat(n)];
  }

  Matrix average(const Index& n) const {
    for (auto c : n)
      if (c == 0) throw DomainError("average: index components must be >= 1");
    return sum(n) / index_volume(n);
  }

  const Index& horizon() const { return orbit_->horizon(); }

 private:
  std::size_t ext_flat(const Index& n) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < n.size(); ++i) f = f * ext_[i] + n[i];
    return f;
  }

  std::shared_ptr<const OrbitTable> orbit_;
  Index ext_;
  std::vector<Matrix> sums_;
};

// ---------------------------------------------------------------------------
// Single-index averages

inline void check_average_index(const DSTuple& t, const WeightSequence& a, const Index& n) {
  if (n.size() != t.d() || a.d() != t.d())
    throw DimensionMismatch("weighted_average: index/weight length != d");
  for (auto c : n)
    if (c == 0) throw DomainError("weighted_average: index components must be >= 1");
  if (!a.covers(n)) throw HorizonExceeded("weighted_average: weights do not cover n");
}

inline AverageResult weighted_average(const DSTuple& t, const WeightSequence& a, const Matrix& x,
                                      const Index& n) {
  check_average_index(t, a, n);
  const auto orbit = std::make_shared<const OrbitTable>(t, x, n);
  Matrix s = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t f = 0; f < orbit->size(); ++f) s += a(orbit->unflat(f)) * orbit->at_flat(f);
  const double vol = index_volume(n);
  return {n, s / vol, vol};
}

inline AverageResult unweighted_average(const DSTuple& t, const Matrix& x, const Index& n) {
  return weighted_average(t, WeightSequence::constant(n, 1.0), x, n);
}

// Average divided by |alpha|_{W_{q,C}}; 0/0 := 0 when the seminorm vanishes.
inline AverageResult normalized_weighted_average(const DSTuple& t, const WeightSequence& a,
                                                 const Matrix& x, const Index& n, double q,
                                                 double C) {
  const double s = sector_sup_seminorm(a, q, SectorSpec(C, t.d()));
  AverageResult r = weighted_average(t, a, x, n);
  if (s == 0.0) {
    r.value.setZero();
    return r;
  }
  r.value /= s;
  r.normalization *= s;
  return r;
}

// ---------------------------------------------------------------------------
// Sector index lists and sequences

inline std::vector<Index> sector_indices(const SectorSpec& s, const Index& horizon) {
  std::vector<Index> out;
  for_each_sector_index(s, horizon, [&](const Index& n) { out.push_back(n); });
  return out;
}

inline std::vector<Index> sector_indices(const SectorSpec& s, std::size_t horizon) {
  return sector_indices(s, Index(s.d, horizon));
}

class SectorSequence {
 public:
  SectorSequence(std::vector<Index> indices, SectorSpec sector, bool tending = true)
      : indices_(std::move(indices)), sector_(sector), tending_(tending) {
    for (const auto& n : indices_) {
      if (!sector_.contains(n)) {
        std::ostringstream os;
        os << "SectorSequence: index (";
        for (std::size_t i = 0; i < n.size(); ++i) os << (i ? "," : "") << n[i];
        os << ") is outside the sector C=" << sector_.C;
        throw DomainError(os.str());
      }
    }
    if (tending_) {
      for (std::size_t k = 1; k < indices_.size(); ++k)
        if (min_component(indices_[k]) < min_component(indices_[k - 1]))
          throw DomainError("SectorSequence: min component must be nondecreasing");
    }
  }

  const std::vector<Index>& indices() const { return indices_; }
  const SectorSpec& sector() const { return sector_; }
  bool tending() const { return tending_; }
  std::size_t size() const { return indices_.size(); }
  const Index& operator[](std::size_t k) const { return indices_.at(k); }

  // Componentwise max over the sequence.
  Index bounding_box() const {
    Index box(sector_.d, 0);
    for (const auto& n : indices_)
      for (std::size_t i = 0; i < n.size(); ++i) box[i] = std::max(box[i], n[i]);
    return box;
  }

  static std::size_t min_component(const Index& n) {
    return *std::min_element(n.begin(), n.end());
  }

  // (s k, ..., s k) for k = 1..count.
  static SectorSequence diagonal(std::size_t d, std::size_t count, std::size_t step = 1) {
    std::vector<Index> v;
    for (std::size_t k = 1; k <= count; ++k) v.emplace_back(d, k * step);
    return SectorSequence(std::move(v), SectorSpec(1.0, d));
  }

  // Alternates the diagonal point (b, ..., b) with (b, floor(C b), b, ...),
  // b = step * (m/2 + 1). Stays in N_C and tends to infinity.
  static SectorSequence staircase(std::size_t d, double C, std::size_t count,
                                  std::size_t step = 1) {
    std::vector<Index> v;
    for (std::size_t m = 0; m < count; ++m) {
      const std::size_t b = step * (m / 2 + 1);
      Index n(d, b);
      if (m % 2 == 1)
        for (std::size_t i = 1; i < d; i += 2)
          n[i] = static_cast<std::size_t>(std::floor(C * static_cast<double>(b)));
      v.push_back(std::move(n));
    }
    return SectorSequence(std::move(v), SectorSpec(C, d));
  }

  // d = 1: first, first + stride, ...
  static SectorSequence arithmetic(std::size_t first, std::size_t stride, std::size_t count) {
    std::vector<Index> v;
    for (std::size_t k = 0; k < count; ++k) v.push_back({first + k * stride});
    return SectorSequence(std::move(v), SectorSpec(1.0, 1));
  }
  static SectorSequence evens(std::size_t count) { return arithmetic(2, 2, count); }
  static SectorSequence odds(std::size_t count) { return arithmetic(1, 2, count); }

  // Interleaves a and b as (a_0, b_0, a_1, b_1, ...); sector constant is the
  // larger one. Tending is dropped when the interleaving breaks monotonicity.
  static SectorSequence merge(const SectorSequence& a, const SectorSequence& b) {
    if (a.sector().d != b.sector().d) throw DimensionMismatch("merge: d differs");
    std::vector<Index> v;
    const std::size_t len = std::max(a.size(), b.size());
    for (std::size_t k = 0; k < len; ++k) {
      if (k < a.size()) v.push_back(a[k]);
      if (k < b.size()) v.push_back(b[k]);
    }
    bool mono = true;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (min_component(v[k]) < min_component(v[k - 1])) mono = false;
    return SectorSequence(std::move(v), SectorSpec(std::max(a.sector().C, b.sector().C),
                                                   a.sector().d),
                          mono);
  }

 private:
  std::vector<Index> indices_;
  SectorSpec sector_;
  bool tending_;
};

// ---------------------------------------------------------------------------
// Streams

// d = 1: one sweep k = 0..max n, keeping T^k(x) and the running sum; memory
// stays O(N^2) so very long horizons are affordable.
inline std::vector<AverageResult> stream_1d(const DSMap& t, const WeightSequence& a,
                                            const Matrix& x, const std::vector<std::size_t>& ns) {
  std::vector<std::size_t> order(ns.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return ns[i] < ns[j]; });
  std::vector<AverageResult> out(ns.size());
  Matrix cur = x;
  Matrix sum = Matrix::Zero(x.rows(), x.cols());
  std::size_t k = 0;
  for (std::size_t idx : order) {
    const std::size_t n = ns[idx];
    if (n == 0) throw DomainError("stream: index components must be >= 1");
    if (n > a.horizon()[0]) throw HorizonExceeded("stream: weights do not cover n");
    while (k < n) {
      const Complex w = a.at(k);
      if (w != Complex(0.0)) sum.noalias() += w * cur;
      cur = t.apply(cur);
      ++k;
    }
    out[idx] = {Index{n}, sum / static_cast<double>(n), static_cast<double>(n)};
  }
  return out;
}

inline std::vector<AverageResult> average_stream(const DSTuple& t, const WeightSequence& a,
                                                 const Matrix& x, const SectorSequence& seq) {
  if (seq.sector().d != t.d() || a.d() != t.d())
    throw DimensionMismatch("average_stream: sequence/weight d != tuple d");
  if (seq.size() == 0) return {};
  if (t.d() == 1) {
    std::vector<std::size_t> ns;
    for (const auto& n : seq.indices()) ns.push_back(n[0]);
    return stream_1d(t[0], a, x, ns);
  }
  const Index box = seq.bounding_box();
  if (!a.covers(box)) throw HorizonExceeded("average_stream: weights do not cover sequence");
  const auto orbit = std::make_shared<const OrbitTable>(t, x, box);
  const WeightedSums sums(orbit, a);
  std::vector<AverageResult> out;
  out.reserve(seq.size());
  for (const auto& n : seq.indices()) out.push_back({n, sums.average(n), index_volume(n)});
  return out;
}

}  // namespace ncerg

#endif  // NCERG_AVERAGES_HPP_
