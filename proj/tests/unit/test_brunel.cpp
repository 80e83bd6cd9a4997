#include <gtest/gtest.h>

#include "ncerg/brunel.hpp"

namespace ncerg {
namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

DSTuple commuting_unitaries(Rng& rng, const Context& ctx, std::size_t d) {
  const std::size_t n = ctx->dim();
  const Matrix w = random_unitary(rng, n);
  std::vector<DSMap> maps;
  for (std::size_t i = 0; i < d; ++i)
    maps.push_back(DSMap::unitary(ctx, Matrix(w * random_diagonal_unitary(rng, n) * w.adjoint())));
  return DSTuple(maps);
}

TEST(BrunelWeights, GeneratorsAndValidation) {
  const auto g = BrunelWeights::product_geometric(2, 8);
  EXPECT_EQ(g.entries.size(), 81u);
  EXPECT_NEAR(g.total(), 1.0, 1e-14);
  const auto raw = BrunelWeights::product_geometric(2, 8, 0.5, false);
  // (1 - 2^-9)^2
  EXPECT_NEAR(raw.total(), std::pow(1.0 - std::pow(2.0, -9), 2), 1e-14);
  EXPECT_THROW(raw.validate(), DomainError);
  EXPECT_NEAR(BrunelWeights::uniform_box(2, 2).total(), 1.0, 1e-15);

  BrunelWeights bad = BrunelWeights::uniform_box(2, 2);
  bad.entries[0].second = 0.0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = BrunelWeights::uniform_box(2, 2);
  bad.entries[0].second += 0.1;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(BrunelOperator, SpecExamples) {
  Rng rng(1);
  auto ctx = make_context(3);
  const auto t = commuting_unitaries(rng, ctx, 2);
  const Matrix x = random_hermitian(rng, 3);
  EXPECT_LT(max_abs(brunel_operator(t, BrunelWeights::point_mass({0, 0})).apply(x) - x), 1e-14);

  const DSTuple ids({DSMap::identity(ctx), DSMap::identity(ctx)});
  EXPECT_LT(max_abs(brunel_operator(ids, BrunelWeights::uniform_box(2, 2)).apply(x) - x), 1e-14);

  // direct summation oracle
  const auto w = BrunelWeights::product_geometric(2, 8);
  const DSMap s = brunel_operator(t, w);
  const Matrix p = random_psd(rng, 3);
  Matrix direct = Matrix::Zero(3, 3);
  for (const auto& [k, a] : w.entries)
    direct += a * tuple_power(t, std::span<const std::size_t>(k), p);
  EXPECT_LT(max_abs(s.apply(p) - direct), 1e-12);
  EXPECT_LE(s.apply(p).trace().real(), p.trace().real() + 1e-12);
  EXPECT_TRUE(verify_ds(s, 20, 7).pass());
}

TEST(BrunelOperator, RejectsMismatch) {
  Rng rng(2);
  auto ctx = make_context(2);
  const auto t = commuting_unitaries(rng, ctx, 2);
  EXPECT_THROW(brunel_operator(t, BrunelWeights::uniform_box(3, 2)), DimensionMismatch);
  DSTuple nc({DSMap::unitary(ctx, random_unitary(rng, 2)), DSMap::unitary(ctx, random_unitary(rng, 2))},
             false);
  EXPECT_THROW(brunel_operator(nc, BrunelWeights::uniform_box(2, 2)), DomainError);
}

TEST(Domination, SpecExamples) {
  Rng rng(3);
  auto ctx = make_context(3);
  // d = 1 with S = T, chi = 1, n_d = n: both sides coincide
  const DSTuple one({DSMap::unitary(ctx, random_unitary(rng, 3))});
  const auto rep1 = domination_check(one, BrunelWeights::point_mass({1}), 5, 10, 1);
  EXPECT_TRUE(rep1.pass());
  EXPECT_NEAR(rep1.achieved(), 0.0, 1e-12);

  // identities: LHS = x, RHS = chi x
  const DSTuple ids({DSMap::identity(ctx), DSMap::identity(ctx)});
  auto w = BrunelWeights::uniform_box(2, 2);
  for (double chi : {1.0, 2.0}) {
    w.chi = chi;
    EXPECT_TRUE(domination_check(ids, w, 4, 10, 2).pass());
  }
  w.chi = 0.5;
  const auto fail = domination_check(ids, w, 4, 10, 2);
  EXPECT_FALSE(fail.pass());
  EXPECT_NEAR(fail.achieved(), 0.5, 1e-12);
}

TEST(Domination, MarginIsHomogeneousInProbes) {
  Rng rng(4);
  auto ctx = make_context(3);
  const auto t = commuting_unitaries(rng, ctx, 2);
  const DSMap s = brunel_operator(t, BrunelWeights::product_geometric(2, 4));
  const auto sides = domination_sides(t, s, 3, 2);
  const Vector v = random_unit_vector(rng, 3);
  const Matrix p = v * v.adjoint();
  // raw min eigenvalue scales linearly; the normalized margin is invariant once norms exceed 1
  auto raw = [&](const Matrix& x) {
    const Matrix l = unvectorize(sides.lhs * vectorize(x), 3);
    const Matrix r = 3.0 * unvectorize(sides.rhs * vectorize(x), 3);
    return min_eigenvalue(r - l);
  };
  EXPECT_NEAR(raw(Matrix(7.0 * p)), 7.0 * raw(p), 1e-12);
}

TEST(SearchParameters, CalibratesAndCertifies) {
  Rng rng(5);
  auto ctx = make_context(3);
  const DSTuple ids({DSMap::identity(ctx), DSMap::identity(ctx)});
  const auto wi = search_parameters(ids, BrunelWeights::uniform_box(2, 2), {1, 2, 3}, 10, 3);
  EXPECT_NEAR(wi.chi, 1.0, 1e-5);

  const DSTuple perm({DSMap::permutation(ctx, {1, 2, 0}), DSMap::permutation(ctx, {2, 0, 1})});
  const auto w = search_parameters(perm, BrunelWeights::product_geometric(2, 4), {1, 2, 3, 4}, 20, 4);
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    EXPECT_TRUE(domination_check(perm, w, n, 1000, 99).pass());
  }
  auto below = w;
  below.chi = w.chi * (1 - 1e-3);
  bool some_fail = false;
  for (std::size_t n : {1u, 2u, 3u, 4u}) some_fail |= !domination_check(perm, below, n, 20, 4).pass();
  EXPECT_TRUE(some_fail);
}

TEST(SearchParameters, ConvexityOverProbes) {
  Rng rng(6);
  auto ctx = make_context(3);
  const auto t = commuting_unitaries(rng, ctx, 2);
  const auto w = search_parameters(t, BrunelWeights::product_geometric(2, 3), {2}, 30, 5);
  const DSMap s = brunel_operator(t, w);
  const auto sides = domination_sides(t, s, 2, w.n_d(2));
  // positive combinations of rank-one probes
  for (int k = 0; k < 20; ++k) {
    const Matrix x = random_psd(rng, 3);
    const Matrix l = unvectorize(sides.lhs * vectorize(x), 3);
    const Matrix r = w.chi * unvectorize(sides.rhs * vectorize(x), 3);
    EXPECT_GE(loewner_margin(l, r), -1e-6);
  }
}

TEST(SearchParameters, InfeasibleReportsError) {
  Rng rng(7);
  auto ctx = make_context(3);
  const DSTuple perm({DSMap::permutation(ctx, {1, 2, 0}), DSMap::permutation(ctx, {1, 2, 0})});
  auto w = BrunelWeights::product_geometric(2, 2);
  for (auto& e : w.entries) e.second *= 1e-12;
  w.deficit_threshold = 1.0;
  BrunelSearchOptions opt;
  opt.chi_cap = 1e3;
  EXPECT_THROW(search_parameters(perm, w, {3}, 5, 1, opt), DomainError);
}

}  // namespace
}  // namespace ncerg
