#include <gtest/gtest.h>

#include <cmath>

#include "ncerg/algebra.hpp"
#include "ncerg/random.hpp"

namespace ncerg {
namespace {

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()),
                          static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(AlgebraContext, RejectsNonPositiveWeights) {
  EXPECT_THROW(AlgebraContext(2, {1.0, 0.0}), DomainError);
  EXPECT_THROW(AlgebraContext(2, {1.0}), DimensionMismatch);
  EXPECT_THROW(AlgebraContext(0), DomainError);
  EXPECT_DOUBLE_EQ(AlgebraContext(3, {1.0, 2.0, 0.5}).tau_one(), 3.5);
}

TEST(AlgebraContext, TraceIsFaithfulOnRandomPsd) {
  Rng rng(7);
  auto ctx = make_context(4, {0.5, 1.0, 2.0, 3.0});
  for (int t = 0; t < 200; ++t) {
    const Matrix p = random_psd(rng, 4, uniform(rng, 1e-3, 10.0), uniform_index(rng, 1, 4));
    EXPECT_GT(ctx->tau(p).real(), 0.0);
  }
  EXPECT_EQ(ctx->tau(Matrix::Zero(4, 4)).real(), 0.0);
}

TEST(HermitianOperator, SymmetrizesWithinToleranceAndRejectsOtherwise) {
  auto ctx = make_context(2);
  Matrix almost = m2(1.0, 2.0, 2.0 + 1e-13, 1.0);
  HermitianOperator h(ctx, almost);
  EXPECT_EQ(h.matrix()(0, 1), h.matrix()(1, 0));
  EXPECT_THROW(HermitianOperator(ctx, m2(0.0, 1.0, 0.0, 0.0)), DomainError);
  EXPECT_THROW(HermitianOperator(ctx, Matrix::Identity(3, 3)), DimensionMismatch);
}

TEST(LoewnerLeq, SpecExamples) {
  auto ctx = make_context(2);
  EXPECT_TRUE(loewner_leq(HermitianOperator(ctx, diag({1, 1})),
                          HermitianOperator(ctx, diag({3, 1}))));
  HermitianOperator x(ctx, m2(1, 1, 1, 1));
  HermitianOperator y(ctx, m2(3, 1, 1, 1));
  EXPECT_TRUE(loewner_leq(x, y));
  const auto cube = ScalarFunction::power(3);
  const auto x3 = func_calc(x, cube);
  const auto y3 = func_calc(y, cube);
  EXPECT_LT(max_abs(x3.matrix() - m2(4, 4, 4, 4)), 1e-12);
  EXPECT_LT(max_abs(y3.matrix() - m2(34, 14, 14, 6)), 1e-12);
  EXPECT_FALSE(loewner_leq(x3, y3));
  EXPECT_NEAR((y3.matrix() - x3.matrix()).determinant().real(), -40.0, 1e-9);
}

TEST(LoewnerLeq, DimensionMismatchThrows) {
  HermitianOperator a(make_context(2), diag({1, 1}));
  HermitianOperator b(make_context(3), diag({1, 1, 1}));
  EXPECT_THROW(loewner_leq(a, b), DimensionMismatch);
}

TEST(LoewnerLeq, PartialOrderOnSamples) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = uniform_index(rng, 2, 5);
    auto ctx = make_context(n);
    HermitianOperator a(ctx, random_hermitian(rng, n));
    HermitianOperator b = a + HermitianOperator(ctx, random_psd(rng, n, uniform(rng, 0.1, 2)));
    HermitianOperator c = b + HermitianOperator(ctx, random_psd(rng, n, uniform(rng, 0.1, 2)));
    EXPECT_TRUE(loewner_leq(a, a));
    EXPECT_TRUE(loewner_leq(a, b));
    EXPECT_TRUE(loewner_leq(b, c));
    EXPECT_TRUE(loewner_leq(a, c));
    // antisymmetry: a <= b and b <= a only when a == b up to tolerance
    if (loewner_leq(b, a)) EXPECT_LT(max_abs(a.matrix() - b.matrix()), 1e-6);
  }
}

TEST(FuncCalc, SpecExamples) {
  auto ctx = make_context(2);
  const auto r = func_calc(HermitianOperator(ctx, diag({4, 9})), ScalarFunction::root(2));
  EXPECT_EQ(r.matrix(), diag({2, 3}));
  for (double p : {0.5, 1.0, 2.0, 3.7}) {
    const auto id = func_calc(HermitianOperator::identity(ctx), ScalarFunction::power(p));
    EXPECT_LT(max_abs(id.matrix() - Matrix::Identity(2, 2)), 1e-15);
  }
  const auto c = func_calc(HermitianOperator(ctx, m2(1, 1, 1, 1)), ScalarFunction::power(3));
  EXPECT_LT(max_abs(c.matrix() - m2(4, 4, 4, 4)), 1e-12);
}

TEST(FuncCalc, ClampsRoundoffButRejectsGenuineNegatives) {
  auto ctx = make_context(2);
  const auto clamped =
      func_calc(HermitianOperator(ctx, diag({-1e-12, 4})), ScalarFunction::root(2));
  EXPECT_EQ(clamped.matrix(), diag({0, 2}));
  EXPECT_THROW(func_calc(HermitianOperator(ctx, diag({-0.1, 4})), ScalarFunction::root(2)),
               DomainError);
  EXPECT_THROW(func_calc(HermitianOperator(ctx, diag({0.0, 4})), ScalarFunction::power(-1.5)),
               DomainError);
  // integer powers are defined on the whole line
  EXPECT_EQ(func_calc(HermitianOperator(ctx, diag({-2, 1})), ScalarFunction::power(3)).matrix(),
            diag({-8, 1}));
}

TEST(FuncCalc, RootIsOperatorMonotone) {
  Rng rng(3);
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = uniform_index(rng, 2, 5);
      auto ctx = make_context(n);
      HermitianOperator a(ctx, random_psd(rng, n, uniform(rng, 0.1, 3)));
      HermitianOperator b = a + HermitianOperator(ctx, random_psd(rng, n, uniform(rng, 0, 3)));
      EXPECT_TRUE(loewner_leq(func_calc(a, ScalarFunction::root(p)),
                              func_calc(b, ScalarFunction::root(p)), 1e-8));
    }
  }
}

TEST(SpectralProjection, SpecExamples) {
  auto ctx = make_context(2);
  const auto e1 = spectral_projection(HermitianOperator(ctx, diag({0.5, 2})), Interval::above(1));
  EXPECT_EQ(e1.matrix(), diag({0, 1}));
  Rng rng(5);
  const auto all = spectral_projection(HermitianOperator(ctx, random_hermitian(rng, 2)),
                                       Interval::all());
  EXPECT_LT(max_abs(all.matrix() - Matrix::Identity(2, 2)), 1e-12);
  HermitianOperator a(ctx, m2(1, 1, 1, 1));
  const auto e2 = spectral_projection(a, Interval::above(1));
  EXPECT_LT(max_abs(e2.matrix() - m2(0.5, 0.5, 0.5, 0.5)), 1e-12);
  EXPECT_LT(max_abs(e2.matrix() * a.matrix() - a.matrix() * e2.matrix()), 1e-12);
}

TEST(SpectralProjection, TauChebyshev) {
  Rng rng(13);
  auto ctx = make_context(5, {1.0, 1.0, 1.0, 1.0, 1.0});
  for (int t = 0; t < 300; ++t) {
    HermitianOperator a(ctx, random_psd(rng, 5, uniform(rng, 0.1, 5)));
    const double lam = uniform(rng, 0.01, 5);
    const auto e = spectral_projection(a, Interval::above(lam));
    EXPECT_LE(e.tau(), a.tau() / lam + 1e-12);
  }
}

TEST(LpNorm, SpecExamples) {
  auto ctx = make_context(2);
  EXPECT_NEAR(lp_norm(*ctx, diag({3, 4}), 1.0), 7.0, 1e-14);
  EXPECT_NEAR(lp_norm(*ctx, diag({3, 4}), kInf), 4.0, 1e-14);
  EXPECT_NEAR(lp_norm(*ctx, m2(0, 1, 0, 0), 2.0), 1.0, 1e-14);
  EXPECT_THROW(lp_norm(*ctx, diag({3, 4}), 0.5), DomainError);
}

TEST(LpNorm, AgreesWithEigenvalueSumOnDiagonal) {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = uniform_index(rng, 1, 6);
    std::vector<double> w(n), d(n);
    for (auto& v : w) v = uniform(rng, 0.1, 3);
    for (auto& v : d) v = uniform(rng, -4, 4);
    auto ctx = make_context(n, w);
    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    const double p = uniform(rng, 1.0, 6.0);
    double brute = 0.0;
    for (std::size_t i = 0; i < n; ++i) brute += w[i] * std::pow(std::abs(d[i]), p);
    EXPECT_NEAR(lp_norm(*ctx, x, p), std::pow(brute, 1.0 / p), 1e-11 * (1 + brute));
  }
}

TEST(PositiveFourSplit, SpecExamples) {
  auto ctx = make_context(2);
  Rng rng(19);
  const Matrix p = random_psd(rng, 2);
  auto s = positive_four_split(ctx, p);
  EXPECT_LT(max_abs(s[0].matrix() - p), 1e-12);
  for (int j = 1; j < 4; ++j) EXPECT_LT(max_abs(s[j].matrix()), 1e-12);

  s = positive_four_split(ctx, diag({1, -2}));
  EXPECT_EQ(s[0].matrix(), diag({1, 0}));
  EXPECT_EQ(s[1].matrix(), diag({0, 2}));
  EXPECT_EQ(max_abs(s[2].matrix()), 0.0);
  EXPECT_EQ(max_abs(s[3].matrix()), 0.0);

  s = positive_four_split(ctx, Complex(0, 1) * Matrix::Identity(2, 2));
  EXPECT_EQ(max_abs(s[0].matrix()), 0.0);
  EXPECT_EQ(s[2].matrix(), diag({1, 1}));
}

TEST(PositiveFourSplit, ReconstructsAndRespectsNorms) {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = uniform_index(rng, 1, 5);
    auto ctx = make_context(n);
    const Matrix x = ginibre(rng, n, n);
    const auto s = positive_four_split(ctx, x);
    EXPECT_LT(max_abs(recombine_four(s) - x), 1e-10);
    const double p = uniform(rng, 1.0, 5.0);
    for (const auto& part : s) {
      EXPECT_TRUE(is_psd(part.matrix()));
      EXPECT_LE(lp_norm(part, p), lp_norm(*ctx, x, p) * (1 + 1e-12));
    }
  }
}

TEST(ProjectionMeet, SpecExamples) {
  auto ctx = make_context(3);
  Projection a(ctx, diag({1, 1, 0}));
  Projection b(ctx, diag({0, 1, 1}));
  EXPECT_EQ(projection_meet({a, b}).matrix(), diag({0, 1, 0}));
  EXPECT_EQ(projection_meet({a, Projection::identity(ctx)}).matrix(), a.matrix());
  EXPECT_EQ(max_abs(projection_meet({a, a.complement()}).matrix()), 0.0);
  EXPECT_THROW(projection_meet(std::span<const Projection>{}), DomainError);
}

TEST(ProjectionMeet, MeetIsBelowEachOperand) {
  Rng rng(29);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = uniform_index(rng, 2, 6);
    auto ctx = make_context(n);
    std::vector<Projection> es;
    const Matrix u = random_unitary(rng, n);
    for (int k = 0; k < 3; ++k) {
      // projections diagonal in a shared basis, so the meet is nontrivial
      Matrix d = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (Eigen::Index i = 0; i < d.rows(); ++i) d(i, i) = uniform(rng) < 0.7 ? 1.0 : 0.0;
      es.emplace_back(ctx, u * d * u.adjoint());
    }
    const auto e = projection_meet(es);
    for (const auto& ej : es) {
      EXPECT_LT(max_abs(ej.matrix() * e.matrix() - e.matrix()), 1e-9);
    }
  }
}

TEST(Projection, ComplementTraceBookkeeping) {
  auto ctx = make_context(3, {0.5, 2.0, 1.5});
  Projection e(ctx, diag({1, 0, 1}));
  EXPECT_DOUBLE_EQ(e.tau(), 2.0);
  EXPECT_DOUBLE_EQ(e.tau() + e.complement().tau(), ctx->tau_one());
  EXPECT_THROW(Projection(ctx, diag({0.5, 0, 1})), DomainError);
}

}  // namespace
}  // namespace ncerg
