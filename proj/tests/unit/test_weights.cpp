#include <gtest/gtest.h>

#include <cmath>

#include "ncerg/random.hpp"
#include "ncerg/weights.hpp"

namespace ncerg {
namespace {

constexpr double kTwoPi = 6.283185307179586;

// Direct nested-loop q-average; independent of the prefix tables.
double brute_average(const WeightSequence& a, const Index& n, double q) {
  double s = 0.0, card = 1.0;
  for (auto v : n) card *= static_cast<double>(v);
  Index k(n.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t ax) {
    if (ax == n.size()) {
      s += std::pow(std::abs(a(k)), q);
      return;
    }
    for (std::size_t i = 0; i < n[ax]; ++i) k[ax] = i, rec(ax + 1);
  };
  rec(0);
  return std::pow(s / card, 1.0 / q);
}

TEST(WeightSequence, GeneratorAndMaterializedAgree) {
  auto gen = [](const Index& k) { return Complex(std::cos(0.3 * k[0]), 0.1 * k[1]); };
  WeightSequence a({7, 5}, gen, true);
  EXPECT_TRUE(a.materialized());
  EXPECT_EQ(a.generator_defect(1), 0.0);
  EXPECT_EQ(a({3, 4}), gen({3, 4}));
  EXPECT_THROW(a({7, 0}), HorizonExceeded);
  EXPECT_THROW(a({1}), DimensionMismatch);
}

TEST(WqSeminorm, SpecExamples) {
  for (double q : {1.0, 1.5, 2.0, 4.0})
    EXPECT_NEAR(wq_seminorm_estimate(WeightSequence::constant({200}, 1.0), q, 1), 1.0, 1e-14);
  std::vector<Complex> alt(300);
  for (std::size_t k = 0; k < alt.size(); ++k) alt[k] = (k % 2 == 0) ? 1.0 : -1.0;
  EXPECT_NEAR(wq_seminorm_estimate(WeightSequence::from_values(alt), 2.0, 1), 1.0, 1e-14);
  EXPECT_THROW(wq_seminorm_estimate(WeightSequence::constant({5}, 1.0), 0.5, 1), DomainError);
}

TEST(WqSeminorm, LinearGrowthIsFlaggedAndMatchesPowerSum) {
  const double q = 2.0;
  const std::size_t h = 400;
  const WeightSequence lin({h}, [](const Index& k) { return Complex(double(k[0])); });
  // sup is attained at n = h: (sum_{k<h} k^2 / h)^{1/2} = ((h-1)(2h-1)/6)^{1/2}
  const double closed = std::sqrt((h - 1.0) * (2.0 * h - 1.0) / 6.0);
  EXPECT_NEAR(wq_seminorm_estimate(lin, q, 1), closed, 1e-9 * closed);
  const auto m = wq_membership(lin, q, 1);
  EXPECT_FALSE(m.in_wq);
  EXPECT_NEAR(m.growth, 2.0, 0.01);
  EXPECT_TRUE(wq_membership(WeightSequence::constant({h}, 3.0), q, 1).in_wq);
}

TEST(WqSeminorm, MatchesBruteForceInTwoDims) {
  Rng rng(1);
  std::vector<Complex> v(12 * 9);
  for (auto& z : v) z = gaussian_complex(rng);
  const WeightSequence a({12, 9}, v);
  for (double q : {1.0, 2.5}) {
    double brute = 0.0;
    for (std::size_t i = 3; i <= 12; ++i)
      for (std::size_t j = 3; j <= 9; ++j) brute = std::max(brute, brute_average(a, {i, j}, q));
    EXPECT_NEAR(wq_seminorm_estimate(a, q, 3), brute, 1e-12);
  }
}

TEST(SectorSupSeminorm, SpecExamples) {
  EXPECT_NEAR(sector_sup_seminorm(WeightSequence::constant({50}, 0.7), 2.0, SectorSpec(1, 1)),
              0.7, 1e-14);
  std::vector<Complex> v(40, 0.0);
  v[0] = 2.0;
  const auto s1 = sector_sup_detail(WeightSequence::from_values(v), 1.0, SectorSpec(1, 1));
  EXPECT_DOUBLE_EQ(s1.value, 2.0);
  EXPECT_EQ(s1.argmax, (Index{1}));

  const WeightSequence delta({10, 10}, [](const Index& k) {
    return (k[0] == 0 && k[1] == 0) ? Complex(1.0) : Complex(0.0);
  });
  const auto s2 = sector_sup_detail(delta, 2.0, SectorSpec(1, 2));
  EXPECT_DOUBLE_EQ(s2.value, 1.0);
  EXPECT_EQ(s2.argmax, (Index{1, 1}));
}

TEST(SectorSupSeminorm, MonotoneInQAndDominatesTail) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<Complex> v(15 * 15);
    for (auto& z : v) z = gaussian_complex(rng) * uniform(rng, 0, 3);
    const WeightSequence a({15, 15}, v);
    const SectorSpec s(uniform(rng, 1, 3), 2);
    const double r = uniform(rng, 1, 3), sq = r + uniform(rng, 0.1, 2);
    EXPECT_LE(sector_sup_seminorm(a, r, s), sector_sup_seminorm(a, sq, s) * (1 + 1e-12));
    // homogeneity and triangle inequality
    const double c = uniform(rng, 0.1, 5);
    EXPECT_NEAR(sector_sup_seminorm(a.map([c](Complex z) { return c * z; }), r, s),
                c * sector_sup_seminorm(a, r, s), 1e-10 * c);
    std::vector<Complex> w(v.size());
    for (auto& z : w) z = gaussian_complex(rng);
    const WeightSequence b({15, 15}, w);
    EXPECT_LE(sector_sup_seminorm(a.combine(1.0, b, 1.0), r, s),
              sector_sup_seminorm(a, r, s) + sector_sup_seminorm(b, r, s) + 1e-12);
  }
}

TEST(SectorIndices, EnumerationMatchesDefinition) {
  const SectorSpec s(2.0, 2);
  EXPECT_TRUE(s.contains({2, 3}));
  EXPECT_FALSE(s.contains({1, 3}));
  std::vector<Index> got;
  for_each_sector_index(s, {9, 9}, [&](const Index& n) { got.push_back(n); });
  std::size_t brute = 0;
  for (std::size_t i = 1; i <= 9; ++i)
    for (std::size_t j = 1; j <= 9; ++j)
      if (std::max(i, j) <= 2 * std::min(i, j)) ++brute;
  EXPECT_EQ(got.size(), brute);
  for (std::size_t k = 1; k < got.size(); ++k) {
    const auto a = *std::min_element(got[k - 1].begin(), got[k - 1].end());
    const auto b = *std::min_element(got[k].begin(), got[k].end());
    EXPECT_TRUE(a < b || (a == b && got[k - 1] < got[k]));
  }
}

TEST(FinitenessTransfer, SpecExamples) {
  const auto one = WeightSequence::constant({20}, 1.0);
  const auto r1 = finiteness_transfer_check(one, 2.0, 1.0, 6);
  EXPECT_TRUE(r1.pass());
  EXPECT_EQ(r1.get("set_size"), 5.0);  // {1..5}

  const auto two = WeightSequence::constant({10, 10}, 1.0);
  const auto r2 = finiteness_transfer_check(two, 1.0, 2.0, 3);
  EXPECT_TRUE(r2.pass());
  // brute count of A_3 for C = 2: min component in {1, 2}
  std::size_t count = 0;
  for (std::size_t i = 1; i <= 20; ++i)
    for (std::size_t j = 1; j <= 20; ++j)
      if (std::min(i, j) < 3 && std::max(i, j) <= 2 * std::min(i, j)) ++count;
  EXPECT_EQ(r2.get("set_size"), static_cast<double>(count));
  EXPECT_FALSE(SectorSpec(2.0, 2).contains({1, 3}));
}

TEST(TrigPolynomial, SpecExamples) {
  const TrigPolynomial one(1, {{1.0, {1.0}}});
  for (std::size_t n : {0u, 5u, 1000u}) EXPECT_EQ(one({n}), Complex(1.0));
  const Complex mu = std::polar(1.0, 0.7);
  const TrigPolynomial pm(1, {{1.0, {mu}}});
  EXPECT_LT(std::abs(pm({3}) - mu * mu * mu), 1e-15);
  const TrigPolynomial two(1, {{2.0, {std::polar(1.0, 0.2)}}, {-1.0, {std::polar(1.0, 1.3)}}});
  EXPECT_LT(std::abs(two({0}) - 1.0), 1e-15);
  EXPECT_THROW(TrigPolynomial(1, {{1.0, {2.0}}}), DomainError);
  const TrigPolynomial d2(2, {{1.0, {mu, std::conj(mu)}}});
  EXPECT_LT(std::abs(d2({4, 4}) - 1.0), 1e-14);
}

TEST(RotationGuard, RejectsRootsOfUnity) {
  EXPECT_THROW(require_irrational_rotation(1.0), DomainError);
  EXPECT_THROW(require_irrational_rotation(std::polar(1.0, kTwoPi * 3.0 / 7.0)), DomainError);
  EXPECT_THROW(require_irrational_rotation(std::polar(1.0, kTwoPi * 12345.0 / 999983.0)),
               DomainError);
  EXPECT_NO_THROW(require_irrational_rotation(std::polar(1.0, kTwoPi * (std::sqrt(2.0) - 1))));
  EXPECT_NO_THROW(require_irrational_rotation(std::polar(1.0, kTwoPi * (std::sqrt(5.0) - 2))));
  EXPECT_THROW(require_irrational_rotation(1.1), DomainError);
}

TEST(Besicovitch, SpecExamples) {
  const Complex mu = std::polar(1.0, kTwoPi * (std::sqrt(2.0) - 1.0));
  const Complex lam = std::polar(1.0, 0.4);
  const auto f1 = besicovitch_generate({{1, 1.0}}, mu, lam, 500);
  for (std::size_t k = 0; k < 500; k += 37) {
    EXPECT_LT(std::abs(f1.alpha.at(k) - lam * std::pow(mu, double(k))), 1e-12);
  }
  EXPECT_LT(besicovitch_distance(f1.alpha, f1.poly, 2.0, 1), 1e-12);

  const auto f0 = besicovitch_generate({{0, 1.0}}, mu, lam, 100);
  for (std::size_t k = 0; k < 100; ++k) EXPECT_LT(std::abs(f0.alpha.at(k) - 1.0), 1e-15);

  const auto f12 = besicovitch_generate({{1, 1.0}, {2, 1.0}}, mu, 1.0, 1000);
  for (std::size_t k = 0; k < 1000; ++k) {
    const Complex z = std::pow(mu, double(k));
    EXPECT_LT(std::abs(f12.alpha.at(k) - (z + z * z)), 1e-10);
    EXPECT_LT(std::abs(f12.alpha.at(k) - trig_eval(f12.poly, {k})), 1e-11);
  }
  EXPECT_THROW(besicovitch_generate({{1, 1.0}}, std::polar(1.0, kTwoPi / 5), 1.0, 10),
               DomainError);
}

TEST(Besicovitch, DistanceSpecExamplesAndTailBound) {
  const auto zero = WeightSequence::zero({300});
  const TrigPolynomial one(1, {{1.0, {1.0}}});
  for (double q : {1.0, 2.0, 3.0}) EXPECT_NEAR(besicovitch_distance(zero, one, q, 1), 1.0, 1e-14);

  Rng rng(3);
  const Complex mu = std::polar(1.0, kTwoPi * (std::sqrt(3.0) - 1.0));
  std::vector<FourierCoeff> coeffs;
  for (std::size_t j = 0; j <= 8; ++j) coeffs.push_back({j, gaussian_complex(rng) / double(1 + j * j)});
  const auto fx = besicovitch_generate(coeffs, mu, std::polar(1.0, 1.1), 2000);
  EXPECT_LT(besicovitch_distance(fx.alpha, fx.poly, 2.0, 1), 1e-12);
  for (std::size_t J = 0; J < 8; ++J) {
    const auto trunc = besicovitch_polynomial(coeffs, mu, std::polar(1.0, 1.1), J);
    const double dist = besicovitch_distance(fx.alpha, trunc, 2.0, 1);
    EXPECT_LE(dist, besicovitch_tail_bound(coeffs, J) * (1 + 1e-12));
    EXPECT_GT(dist, 0.0);
  }
}

TEST(Hartman, SpecExamples) {
  const auto one = WeightSequence::constant({1000}, 1.0);
  const auto h1 = hartman_estimate(one, 1.0);
  EXPECT_LT(std::abs(h1.limit - 1.0), 1e-14);
  EXPECT_LT(h1.oscillation, 1e-13);

  const Complex mu = std::polar(1.0, kTwoPi * (std::sqrt(2.0) - 1.0));
  const auto rot = besicovitch_generate({{1, 1.0}}, mu, 1.0, 4000).alpha;
  EXPECT_LT(std::abs(hartman_estimate(rot, std::conj(mu)).limit - 1.0), 1e-10);

  const Complex lam = std::polar(1.0, 2.0);
  for (std::size_t n : {100u, 1000u, 4000u}) {
    const auto h = hartman_estimate(rot, lam, n);
    EXPECT_LE(std::abs(h.limit), 2.0 / (double(n) * std::abs(1.0 - mu * lam)) + 1e-12);
  }
}

TEST(Hartman, OscillationDecaysLikeOneOverN) {
  const Complex mu = std::polar(1.0, kTwoPi * (std::sqrt(5.0) - 2.0));
  const TrigPolynomial p(1, {{1.0, {mu}}, {0.5, {mu * mu}}});
  const auto a = p.to_sequence({8000});
  const Complex lam = std::polar(1.0, 0.9);
  const double o1 = hartman_estimate(a, lam, 2000).oscillation;
  const double o2 = hartman_estimate(a, lam, 8000).oscillation;
  EXPECT_LT(o2, o1);
  // geometric-sum bound on the tail: |c_n| <= sum_j 2|r_j| / (n |1 - lambda_j lam|)
  const double bound = 2 * (2.0 / std::abs(1.0 - mu * lam) + 1.0 / std::abs(1.0 - mu * mu * lam)) /
                       (0.75 * 8000);
  EXPECT_LE(o2, bound);
}

TEST(DecomposeFour, SpecExamples) {
  const auto pos = WeightSequence::constant({20}, 2.0);
  auto parts = decompose_four_nonneg(pos);
  EXPECT_EQ(parts[0].at(3), Complex(2.0));
  for (int j = 1; j < 4; ++j) EXPECT_EQ(parts[j].at(3), Complex(0.0));

  parts = decompose_four_nonneg(WeightSequence::constant({20}, -1.0));
  EXPECT_EQ(parts[1].at(0), Complex(1.0));
  EXPECT_EQ(parts[0].at(0), Complex(0.0));

  const WeightSequence alt({30}, [](const Index& k) {
    return Complex(0, k[0] % 2 == 0 ? 1.0 : -1.0);
  });
  parts = decompose_four_nonneg(alt);
  for (std::size_t k = 0; k < 30; ++k) {
    EXPECT_EQ(parts[2].at(k), Complex(k % 2 == 0 ? 1.0 : 0.0));
    EXPECT_EQ(parts[3].at(k), Complex(k % 2 == 0 ? 0.0 : 1.0));
  }
  EXPECT_TRUE(decomposition_check(alt, 2.0, SectorSpec(1, 1)).pass());
}

TEST(DecomposeFour, RandomComplexSequences) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<Complex> v(10 * 10);
    for (auto& z : v) z = gaussian_complex(rng);
    const auto rep = decomposition_check(WeightSequence({10, 10}, v), uniform(rng, 1, 4),
                                         SectorSpec(uniform(rng, 1, 3), 2));
    EXPECT_TRUE(rep.pass());
    EXPECT_LT(rep.get("reconstruction_error"), 1e-15);
  }
}

}  // namespace
}  // namespace ncerg
