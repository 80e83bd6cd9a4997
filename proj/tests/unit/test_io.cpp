#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ncerg/io.hpp"

namespace ncerg {
namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("ncerg_io_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

TEST(IoMatrix, RealComplexAndShortcuts) {
  const Matrix m = parse_matrix(Json::parse("[[1, [0, 2]], [[0, -2], 3.5]]"));
  EXPECT_EQ(m(0, 0), Complex(1, 0));
  EXPECT_EQ(m(0, 1), Complex(0, 2));
  EXPECT_EQ(m(1, 0), Complex(0, -2));
  EXPECT_EQ(m(1, 1), Complex(3.5, 0));
  const Matrix d = parse_matrix(Json::parse(R"({"diag": [1, 2, [0, 1]]})"));
  EXPECT_EQ(d(2, 2), Complex(0, 1));
  EXPECT_EQ(d(0, 1), Complex(0, 0));
  EXPECT_TRUE(parse_matrix(Json::parse(R"({"identity": 3})")).isIdentity());
  // round trip
  EXPECT_EQ(parse_matrix(matrix_json(m)), m);
}

TEST(IoMatrix, Malformed) {
  EXPECT_THROW(parse_matrix(Json::parse("[[1, 2], [3]]")), ConfigError);
  EXPECT_THROW(parse_matrix(Json::parse("[]")), ConfigError);
  EXPECT_THROW(parse_matrix(Json::parse(R"([["a"]])")), ConfigError);
  Loader ld;
  EXPECT_THROW(ld.matrix(Json::parse("[[1, 2, 3], [4, 5, 6]]")), ConfigError);
  ld.algebra(Json::parse(R"({"dim": 2})"));
  EXPECT_THROW(ld.matrix(Json::parse("[[1, 0, 0], [0, 1, 0], [0, 0, 1]]")), DimensionMismatch);
}

TEST(IoMaps, EveryKindMatchesDirectConstruction) {
  Loader ld;
  ld.algebra(Json::parse(R"({"dim": 3})"));
  const auto ctx = ld.context();
  const Matrix x = parse_matrix(Json::parse("[[1, 2, 0], [2, 0, [0, 1]], [0, [0, -1], 4]]"));

  const DSMap perm = ld.map(Json::parse(R"({"kind": "permutation", "perm": [1, 2, 0]})"));
  EXPECT_LT((perm.apply(x) - DSMap::permutation(ctx, {1, 2, 0}).apply(x)).norm(), 1e-15);
  const DSMap cyc = ld.map(Json::parse(R"({"kind": "cyclic", "order": 3})"));
  EXPECT_LT((cyc.apply(x) - perm.apply(x)).norm(), 1e-15);

  const DSMap id = ld.map(Json::parse(R"({"type": "identity"})"));
  EXPECT_LT((id.apply(x) - x).norm(), 1e-15);
  const DSMap avg = ld.map(Json::parse(R"({"kind": "trace_averaging"})"));
  EXPECT_LT((avg.apply(x) - (5.0 / 3.0) * Matrix::Identity(3, 3)).norm(), 1e-14);

  const DSMap u = ld.map(Json::parse(R"({"kind": "unitary", "matrix": [[0, 1, 0], [1, 0, 0], [0, 0, [0, 1]]]})"));
  Matrix um = Matrix::Zero(3, 3);
  um(0, 1) = um(1, 0) = 1.0;
  um(2, 2) = Complex(0, 1);
  EXPECT_LT((u.apply(x) - um * x * um.adjoint()).norm(), 1e-14);

  const DSMap st = ld.map(Json::parse(R"({"kind": "stochastic", "matrix": [[0.5, 0.5, 0], [0.5, 0.5, 0], [0, 0, 1]]})"));
  const Matrix sx = st.apply(x);
  EXPECT_NEAR(sx(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(sx(2, 2).real(), 4.0, 1e-15);
  EXPECT_EQ(sx(0, 1), Complex(0, 0));

  const DSMap kr = ld.map(Json::parse(R"({"kind": "kraus", "ops": [{"diag": [0.6, 0.6, 0.6]}, {"diag": [0.8, 0.8, 0.8]}]})"));
  EXPECT_LT((kr.apply(x) - x).norm(), 1e-14);

  const DSMap so = ld.map(Json{{"kind", "superoperator"}, {"matrix", matrix_json(perm.superoperator_matrix())}});
  EXPECT_LT((so.apply(x) - perm.apply(x)).norm(), 1e-15);
}

TEST(IoMaps, RandomMapsNeedSeedsAndAreReproducible) {
  Loader ld;
  ld.algebra(Json::parse(R"({"dim": 3})"));
  EXPECT_THROW(ld.map(Json::parse(R"({"kind": "random_kraus"})")), ConfigError);
  const auto spec = Json::parse(R"({"kind": "random_kraus", "seed": 4, "count": 2})");
  const Matrix x = Matrix::Identity(3, 3);
  EXPECT_EQ(ld.map(spec).apply(x), ld.map(spec).apply(x));
  EXPECT_THROW(ld.map(Json::parse(R"({"kind": "bogus"})")), ConfigError);
  EXPECT_THROW(ld.map(Json::parse(R"({"perm": [0]})")), ConfigError);
}

TEST(IoMaps, ContextInferredFromFirstOperator) {
  Loader ld;
  EXPECT_FALSE(ld.has_context());
  EXPECT_THROW(ld.map(Json::parse(R"({"kind": "identity"})")), ConfigError);
  ld.map(Json::parse(R"({"kind": "permutation", "perm": [1, 0]})"));
  ASSERT_TRUE(ld.has_context());
  EXPECT_EQ(ld.context()->dim(), 2u);
  EXPECT_NO_THROW(ld.map(Json::parse(R"({"kind": "identity"})")));
}

TEST(IoTuple, CommutingFlagIsChecked) {
  Loader ld;
  const auto ok = ld.tuple(Json::parse(
      R"({"maps": [{"kind": "permutation", "perm": [1, 2, 0]}, {"kind": "permutation", "perm": [2, 0, 1]}]})"));
  EXPECT_EQ(ok.d(), 2u);
  EXPECT_THROW(ld.tuple(Json::parse(
                   R"({"maps": [{"kind": "permutation", "perm": [1, 0, 2]}, {"kind": "permutation", "perm": [0, 2, 1]}]})")),
               DomainError);
  EXPECT_NO_THROW(ld.tuple(Json::parse(
      R"({"commuting": false, "maps": [{"kind": "permutation", "perm": [1, 0, 2]}, {"kind": "permutation", "perm": [0, 2, 1]}]})")));
}

TEST(IoWeights, ValuesAndGenerators) {
  Loader ld;
  const auto v = ld.weights(Json::parse(R"({"horizon": [2, 2], "values": [1, 2, 3, [0, 4]], "order": "row-major"})"));
  EXPECT_EQ(v.horizon(), (Index{2, 2}));
  // row-major: last index fastest
  EXPECT_EQ(v(Index{0, 1}), Complex(2, 0));
  EXPECT_EQ(v(Index{1, 1}), Complex(0, 4));
  EXPECT_THROW(ld.weights(Json::parse(R"({"values": [1], "order": "column-major"})")), ConfigError);

  const auto c = ld.weights(Json::parse(R"({"kind": "constant", "value": [0, 1]})"), Index{5});
  EXPECT_EQ(c.at(4), Complex(0, 1));
  const auto z = ld.weights(Json::parse(R"({"kind": "zero", "horizon": 3})"));
  EXPECT_EQ(z.at(2), Complex(0, 0));
  const auto lin = ld.weights(Json::parse(R"({"kind": "linear"})"), Index{3, 3});
  EXPECT_EQ(lin(Index{2, 1}), Complex(3, 0));

  const auto rot = ld.weights(Json::parse(R"({"kind": "rotation", "mu": {"turns": 0.25}})"), Index{8});
  EXPECT_NEAR(std::abs(rot.at(1) - Complex(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rot.at(2) - Complex(-1, 0)), 0.0, 1e-15);

  const auto res = ld.weights(Json::parse(R"({"kind": "resonance", "omega": {"angle": 0.0}})"), Index{4});
  EXPECT_EQ(res.at(0), Complex(1, 0));
  EXPECT_EQ(res.at(1), Complex(-1, 0));

  const auto tr = ld.weights(
      Json::parse(R"({"kind": "trig", "d": 2, "terms": [{"coeff": 2, "freq": [{"turns": 0.5}, {"turns": 0}]}]})"),
      Index{3, 3});
  EXPECT_NEAR(std::abs(tr(Index{1, 2}) - Complex(-2, 0)), 0.0, 1e-14);

  EXPECT_THROW(ld.weights(Json::parse(R"({"kind": "constant"})")), ConfigError);
  EXPECT_THROW(ld.weights(Json::parse(R"({"kind": "random"})"), Index{3}), ConfigError);
  EXPECT_THROW(ld.weights(Json::parse(R"({"kind": "nope"})"), Index{3}), ConfigError);
}

TEST(IoWeights, RotationWithCoefficientsIsBesicovitch) {
  Loader ld;
  const auto j = Json::parse(R"({"kind": "rotation", "mu": {"turns": 0.41421356237309503},
                                  "lambda": {"turns": 0.1}, "coeffs": [[0, 1], [2, 0, 0.5]]})");
  const auto s = ld.weights(j, Index{50});
  const auto fix = besicovitch_generate({{0, 1.0}, {2, Complex(0, 0.5)}}, std::polar(1.0, kTwoPi * 0.41421356237309503),
                                        std::polar(1.0, kTwoPi * 0.1), 50);
  for (std::size_t k = 0; k < 50; ++k) EXPECT_NEAR(std::abs(s.at(k) - fix.alpha.at(k)), 0.0, 1e-14);
  // rational rotation is rejected
  EXPECT_THROW(ld.weights(Json::parse(R"({"kind": "rotation", "mu": {"turns": 0.25}, "coeffs": [[1, 1]]})"),
                          Index{10}),
               DomainError);
}

TEST(IoBrunel, EntriesFormatAndGenerators) {
  Loader ld;
  const auto w = ld.brunel(Json::parse(R"({"d": 2, "H": 1, "entries": [[[0, 0], 0.5], [[1, 0], 0.25], [[0, 1], 0.25]]})"));
  EXPECT_EQ(w.d, 2u);
  EXPECT_EQ(w.entries.size(), 3u);
  EXPECT_NEAR(w.total(), 1.0, 1e-15);
  EXPECT_THROW(ld.brunel(Json::parse(R"({"d": 2, "H": 1, "entries": [[[0, 0], 0.5]]})")), DomainError);
  EXPECT_THROW(ld.brunel(Json::parse(R"({"d": 2, "H": 1, "entries": [[[0, 3], 1.0]]})")), DomainError);
  const auto g = ld.brunel(Json::parse(R"({"kind": "uniform_box", "d": 2, "side": 3, "chi": 2.0, "nd": {"4": 7}})"));
  EXPECT_EQ(g.entries.size(), 9u);
  EXPECT_EQ(g.chi, 2.0);
  EXPECT_EQ(g.n_d(4), 7u);
  EXPECT_EQ(g.n_d(5), 5u);
}

TEST(IoSequence, Kinds) {
  const auto a = Loader::sequence(Json::parse(R"({"kind": "arithmetic", "first": 2, "stride": 3, "count": 4})"));
  EXPECT_EQ(a.indices().back(), (Index{11}));
  const auto s = Loader::sequence(Json::parse(R"({"kind": "staircase", "d": 2, "C": 2, "count": 5})"));
  EXPECT_EQ(s.sector().C, 2.0);
  const auto e = Loader::sequence(Json::parse(R"({"kind": "explicit", "indices": [[1, 1], [2, 3]], "C": 3})"));
  EXPECT_EQ(e.size(), 2u);
  EXPECT_THROW(Loader::sequence(Json::parse(R"({"kind": "spiral"})")), ConfigError);
}

TEST(IoFiles, PathsResolveAgainstBaseDir) {
  const auto dir = temp_dir("paths");
  std::ofstream(dir / "x.json") << "[[2, 0], [0, 1]]";
  std::ofstream(dir / "bad.json") << "[[2, 0], [0, 1]";
  Loader ld(dir);
  EXPECT_EQ(ld.matrix(Json("x.json"))(0, 0), Complex(2, 0));
  EXPECT_THROW(ld.matrix(Json("missing.json")), ConfigError);
  EXPECT_THROW(ld.matrix(Json("bad.json")), ConfigError);
}

TEST(IoReport, FixedFieldOrderAndNonFinite) {
  const auto ctx = make_context(2);
  CertificateReport r("demo", 1.0, 0.5, 1e-8);
  r.add_condition("side", 2.0, kInf, 0.0).set("zeta", 1.0).set("alpha", 2.0).note("hello");
  r.set_witness(Projection::identity(ctx));
  const auto j = report_json(r, "cfg", "cmd");
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"config", "command", "claim", "pass", "claimed_bound", "achieved",
                                            "tolerance", "margin", "conditions", "witness", "metadata", "notes"}));
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_TRUE(j["conditions"][0]["achieved"].is_null());
  EXPECT_EQ(j["witness"]["rank"], 2);
  EXPECT_EQ(j["metadata"].begin().key(), "alpha");
  // identical input, identical bytes
  EXPECT_EQ(j.dump(), report_json(r, "cfg", "cmd").dump());
}

TEST(IoCsv, TailProfileAndAverages) {
  const auto dir = temp_dir("csv");
  write_tail_csv(dir / "sub" / "tail.csv", {{Index{3}, 0.5}, {Index{2, 4}, 0.25}});
  std::ifstream in(dir / "sub" / "tail.csv");
  std::string l1, l2, l3;
  std::getline(in, l1), std::getline(in, l2), std::getline(in, l3);
  EXPECT_EQ(l1, "index,compressed_distance");
  EXPECT_EQ(l2, "3,0.5");
  EXPECT_EQ(l3, "2;4,0.25");

  const auto ctx = make_context(2);
  const Matrix m = Matrix::Identity(2, 2) * 3.0;
  write_average_csv(dir / "avg.csv", ctx, {{Index{1, 2}, m, 2.0}}, 2.0);
  std::ifstream a(dir / "avg.csv");
  std::getline(a, l1), std::getline(a, l2);
  EXPECT_EQ(l1, "n1,n2,norm_inf,norm_p,normalization");
  EXPECT_EQ(l2.substr(0, 6), "1,2,3,");
}

}  // namespace
}  // namespace ncerg
