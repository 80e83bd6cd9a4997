#ifndef NCERG_IO_HPP_
#define NCERG_IO_HPP_

// JSON readers for matrices, maps, tuples and weights; JSON writers for
// reports. Inputs are either inline JSON or a path (string) resolved
// against a base directory.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncerg/averages.hpp"
#include "ncerg/brunel.hpp"
#include "ncerg/convergence.hpp"
#include "ncerg/dsop.hpp"
#include "ncerg/random.hpp"
#include "ncerg/report.hpp"
#include "ncerg/weights.hpp"

namespace ncerg {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Malformed or inconsistent input (maps to exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("JSON parse error in " + p.string() + ": " + e.what());
  }
}

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unimodular number from {"turns": t} (angle 2 pi t), {"angle": a} or [re, im].
inline Complex parse_unimodular(const Json& j) {
  if (j.is_object()) {
    if (j.contains("turns")) return std::polar(1.0, kTwoPi * j.at("turns").get<double>());
    if (j.contains("angle")) return std::polar(1.0, j.at("angle").get<double>());
    throw ConfigError("unimodular number needs 'turns' or 'angle'");
  }
  if (j.is_number()) return std::polar(1.0, kTwoPi * j.get<double>());
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("cannot parse unimodular number: " + j.dump());
}

inline Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re"))
    return {j.at("re").get<double>(), j.value("im", 0.0)};
  throw ConfigError("cannot parse complex number: " + j.dump());
}

// Object discriminator: "kind", with "type" accepted as an alias.
inline std::string kind_of(const Json& j) {
  if (!j.is_object()) throw ConfigError("expected an object: " + j.dump());
  if (j.contains("kind")) return j.at("kind").get<std::string>();
  if (j.contains("type")) return j.at("type").get<std::string>();
  throw ConfigError("object needs a 'kind' field: " + j.dump());
}

inline Json complex_json(Complex z) {
  return z.imag() == 0.0 ? Json(z.real()) : Json::array({z.real(), z.imag()});
}

// Matrix: array of rows, entries real or [re, im]; or {"rows": ...};
// or {"diag": [...]}; or {"identity": n}.
inline Matrix parse_matrix(const Json& j) {
  if (j.is_object()) {
    if (j.contains("rows")) return parse_matrix(j.at("rows"));
    if (j.contains("matrix")) return parse_matrix(j.at("matrix"));
    if (j.contains("diag")) {
      const auto& d = j.at("diag");
      Matrix m = Matrix::Zero(Eigen::Index(d.size()), Eigen::Index(d.size()));
      for (std::size_t i = 0; i < d.size(); ++i) m(Eigen::Index(i), Eigen::Index(i)) = parse_complex(d[i]);
      return m;
    }
    if (j.contains("identity")) {
      const auto n = j.at("identity").get<Eigen::Index>();
      return Matrix::Identity(n, n);
    }
    throw ConfigError("matrix object needs 'rows', 'diag' or 'identity'");
  }
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a nonempty array of rows");
  const auto rows = Eigen::Index(j.size());
  const auto cols = Eigen::Index(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = j[std::size_t(i)];
    if (!r.is_array() || Eigen::Index(r.size()) != cols)
      throw ConfigError("matrix rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = parse_complex(r[std::size_t(c)]);
  }
  return m;
}

inline Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) r.push_back(complex_json(m(i, c)));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Index parse_index(const Json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) return {j.get<std::size_t>()};
  if (!j.is_array()) throw ConfigError("index must be an integer or an array: " + j.dump());
  Index out;
  for (const auto& v : j) out.push_back(v.get<std::size_t>());
  return out;
}

// Resolves inputs: a string is a file path (relative to base_dir), anything
// else is inline JSON. Holds the algebra context shared by all inputs.
class Loader {
 public:
  explicit Loader(std::filesystem::path base_dir = ".") : base_(std::move(base_dir)) {}

  Json resolve(const Json& j) const {
    if (j.is_string()) {
      std::filesystem::path p(j.get<std::string>());
      if (p.is_relative()) p = base_ / p;
      return read_json_file(p);
    }
    return j;
  }

  void set_context(Context ctx) { ctx_ = std::move(ctx); }
  bool has_context() const { return ctx_ != nullptr; }
  const Context& context() const {
    if (!ctx_) throw ConfigError("no algebra: supply inputs.algebra or a matrix input first");
    return ctx_;
  }

  // {"dim": n, "weights": [...]} (weights optional).
  Context algebra(const Json& raw) {
    const Json j = resolve(raw);
    const auto n = j.at("dim").get<std::size_t>();
    ctx_ = j.contains("weights") ? make_context(n, j.at("weights").get<std::vector<double>>())
                                 : make_context(n);
    return ctx_;
  }

  Matrix matrix(const Json& raw) {
    const Matrix m = parse_matrix(resolve(raw));
    if (m.rows() != m.cols()) throw ConfigError("matrix input must be square");
    if (!ctx_) ctx_ = make_context(std::size_t(m.rows()));
    ctx_->check(m);
    return m;
  }

  std::vector<Matrix> matrices(const Json& raw) {
    const Json j = resolve(raw);
    if (!j.is_array()) throw ConfigError("expected a list of matrices");
    std::vector<Matrix> out;
    for (const auto& m : j) out.push_back(matrix(m));
    return out;
  }

  // {"kind": identity|unitary|kraus|permutation|cyclic|stochastic|superoperator|
  //  trace_averaging|random_unitary|unitary_mixture|random_kraus, ...}
  DSMap map(const Json& raw) {
    const Json j = resolve(raw);
    const std::string type = kind_of(j);
    if (!ctx_ && j.contains("dim")) ctx_ = make_context(j.at("dim").get<std::size_t>());
    if (type == "unitary") {
      const Matrix u = parse_matrix(j.at("matrix"));
      if (!ctx_) ctx_ = make_context(std::size_t(u.rows()));
      return DSMap::unitary(ctx_, u);
    }
    if (type == "kraus") {
      std::vector<Matrix> ops;
      for (const auto& m : j.at("ops")) ops.push_back(parse_matrix(m));
      if (ops.empty()) throw ConfigError("kraus map needs ops");
      if (!ctx_) ctx_ = make_context(std::size_t(ops.front().rows()));
      return DSMap::kraus(ctx_, std::move(ops));
    }
    if (type == "permutation") {
      auto perm = j.at("perm").get<std::vector<std::size_t>>();
      if (!ctx_) ctx_ = make_context(perm.size());
      return DSMap::permutation(ctx_, std::move(perm));
    }
    if (type == "cyclic") {
      const auto m = j.at("order").get<std::size_t>();
      std::vector<std::size_t> perm(m);
      for (std::size_t i = 0; i < m; ++i) perm[i] = (i + 1) % m;
      if (!ctx_) ctx_ = make_context(m);
      return DSMap::permutation(ctx_, std::move(perm));
    }
    if (type == "stochastic") {
      const Matrix p = parse_matrix(j.at("matrix"));
      if (!ctx_) ctx_ = make_context(std::size_t(p.rows()));
      return DSMap::stochastic(ctx_, p.real());
    }
    if (type == "superoperator") {
      const Matrix l = parse_matrix(j.at("matrix"));
      if (!ctx_) {
        const auto n = std::size_t(std::lround(std::sqrt(double(l.rows()))));
        ctx_ = make_context(n);
      }
      return DSMap::superoperator(ctx_, l);
    }
    const Context& ctx = context();
    if (type == "identity") return DSMap::identity(ctx);
    if (type == "trace_averaging") return DSMap::trace_averaging(ctx);
    if (type == "random_unitary" || type == "unitary_mixture" || type == "random_kraus") {
      if (!j.contains("seed")) throw ConfigError(type + " needs a seed");
      Rng rng(j.at("seed").get<std::uint64_t>());
      const std::size_t n = ctx->dim();
      if (type == "random_unitary") return DSMap::unitary(ctx, random_unitary(rng, n));
      const auto count = j.value("count", std::size_t(2));
      if (type == "unitary_mixture") return DSMap::kraus(ctx, random_unitary_mixture(rng, n, count));
      return DSMap::kraus(ctx, random_kraus(rng, n, count, j.value("contraction", 1.0)));
    }
    throw ConfigError("unknown map type '" + type + "'");
  }

  // {"maps": [...], "commuting": true} or a bare list of maps.
  DSTuple tuple(const Json& raw) {
    const Json j = resolve(raw);
    const Json& list = j.is_array() ? j : j.at("maps");
    std::vector<DSMap> maps;
    for (const auto& m : list) maps.push_back(map(m));
    const bool commuting = j.is_object() ? j.value("commuting", true) : true;
    return DSTuple(std::move(maps), commuting);
  }

  // Weight sequences: {"horizon": [..], "values": [...]} (flat, row-major) or
  // {"kind": constant|zero|rotation|resonance|trig|besicovitch|random|linear, ...}.
  // A rotation with "coeffs" is the Besicovitch generator f(mu^k lambda).
  WeightSequence weights(const Json& raw, std::optional<Index> default_horizon = std::nullopt) {
    const Json j = resolve(raw);
    Index h;
    if (j.contains("horizon")) h = parse_index(j.at("horizon"));
    else if (default_horizon) h = *default_horizon;
    if (j.contains("order") && j.at("order") != "row-major")
      throw ConfigError("only row-major value order is supported");
    if (j.contains("values")) {
      std::vector<Complex> v;
      for (const auto& z : j.at("values")) v.push_back(parse_complex(z));
      // explicit values carry their own horizon
      Index own = j.contains("horizon") ? parse_index(j.at("horizon")) : Index{v.size()};
      return WeightSequence(std::move(own), std::move(v));
    }
    std::string g = j.contains("kind") ? j.at("kind").get<std::string>() : j.value("generator", std::string());
    if (g == "rotation" && j.contains("coeffs")) g = "besicovitch";
    if (h.empty()) throw ConfigError("weight sequence needs a horizon");
    if (g == "constant") return WeightSequence::constant(h, parse_complex(j.value("value", Json(1.0))));
    if (g == "zero") return WeightSequence::zero(h);
    if (g == "linear") {
      return WeightSequence(h, [](const Index& k) {
        double s = 0.0;
        for (auto c : k) s += double(c);
        return Complex(s);
      });
    }
    if (g == "rotation") {
      if (h.size() != 1) throw ConfigError("rotation weight is d = 1");
      return rotation_weight(std::arg(parse_unimodular(j.at("mu"))), h[0]);
    }
    if (g == "resonance") {
      if (h.size() != 1) throw ConfigError("resonance weight is d = 1");
      return resonance_weight(parse_unimodular(j.at("omega")), h[0]);
    }
    if (g == "trig") return trig(j).to_sequence(h);
    if (g == "besicovitch") {
      if (h.size() != 1) throw ConfigError("besicovitch weight is d = 1");
      return besicovitch_generate(fourier_coeffs(j.at("coeffs")), parse_unimodular(j.at("mu")),
                                  parse_unimodular(j.value("lambda", Json(0.0))), h[0])
          .alpha;
    }
    if (g == "random") {
      if (!j.contains("seed")) throw ConfigError("random weight needs a seed");
      Rng rng(j.at("seed").get<std::uint64_t>());
      const std::string dist = j.value("dist", std::string("gaussian"));
      std::vector<Complex> v(detail::product(h));
      for (auto& z : v) z = dist == "uniform" ? Complex(uniform(rng, j.value("lo", 0.0), j.value("hi", 1.0)))
                                              : gaussian_complex(rng);
      return WeightSequence(h, std::move(v));
    }
    throw ConfigError("unknown weight generator '" + g + "'");
  }

  static TrigPolynomial trig(const Json& j) {
    const auto d = j.at("d").get<std::size_t>();
    std::vector<TrigTerm> terms;
    for (const auto& t : j.at("terms")) {
      TrigTerm term{parse_complex(t.at("coeff")), {}};
      for (const auto& f : t.at("freq")) term.freq.push_back(parse_unimodular(f));
      terms.push_back(std::move(term));
    }
    return TrigPolynomial(d, std::move(terms));
  }

  // [[j, re, im], ...] or [{"j": .., "a": ..}, ...]
  static std::vector<FourierCoeff> fourier_coeffs(const Json& j) {
    std::vector<FourierCoeff> out;
    for (const auto& c : j) {
      if (c.is_array()) {
        if (c.size() < 2) throw ConfigError("fourier coefficient needs [j, re, im]");
        out.push_back({c[0].get<std::size_t>(), {c[1].get<double>(), c.size() > 2 ? c[2].get<double>() : 0.0}});
      } else {
        out.push_back({c.at("j").get<std::size_t>(), parse_complex(c.at("a"))});
      }
    }
    return out;
  }

  // { "d": d, "H": H, "entries": [[n-vector, value], ...] } or
  // {"generator": product_geometric|uniform_box, ...}
  BrunelWeights brunel(const Json& raw) const {
    const Json j = resolve(raw);
    BrunelWeights w;
    if (j.contains("generator") || j.contains("kind")) {
      const std::string g = j.contains("kind") ? j.at("kind").get<std::string>() : j.at("generator").get<std::string>();
      if (g == "product_geometric")
        w = BrunelWeights::product_geometric(j.at("d").get<std::size_t>(), j.at("H").get<std::size_t>(),
                                             j.value("ratio", 0.5), j.value("renormalize", true));
      else if (g == "uniform_box")
        w = BrunelWeights::uniform_box(j.at("d").get<std::size_t>(), j.at("side").get<std::size_t>());
      else throw ConfigError("unknown Brunel weight generator '" + g + "'");
    } else {
      w.d = j.at("d").get<std::size_t>();
      w.H = j.at("H").get<std::size_t>();
      for (const auto& e : j.at("entries")) w.entries.emplace_back(parse_index(e.at(0)), e.at(1).get<double>());
    }
    if (j.contains("chi")) w.chi = j.at("chi").get<double>();
    if (j.contains("deficit_threshold")) w.deficit_threshold = j.at("deficit_threshold").get<double>();
    if (j.contains("nd"))
      for (const auto& [k, v] : j.at("nd").items()) w.nd_table[std::stoul(k)] = v.get<std::size_t>();
    w.validate();
    return w;
  }

  // {"kind": arithmetic|diagonal|staircase|evens|odds|explicit, ...}
  static SectorSequence sequence(const Json& j) {
    const std::string type = kind_of(j);
    if (type == "arithmetic")
      return SectorSequence::arithmetic(j.at("first").get<std::size_t>(), j.value("stride", std::size_t(1)),
                                        j.at("count").get<std::size_t>());
    if (type == "diagonal")
      return SectorSequence::diagonal(j.at("d").get<std::size_t>(), j.at("count").get<std::size_t>(),
                                      j.value("step", std::size_t(1)));
    if (type == "staircase")
      return SectorSequence::staircase(j.at("d").get<std::size_t>(), j.at("C").get<double>(),
                                       j.at("count").get<std::size_t>(), j.value("step", std::size_t(1)));
    if (type == "evens") return SectorSequence::evens(j.at("count").get<std::size_t>());
    if (type == "odds") return SectorSequence::odds(j.at("count").get<std::size_t>());
    if (type == "explicit") {
      std::vector<Index> idx;
      for (const auto& n : j.at("indices")) idx.push_back(parse_index(n));
      if (idx.empty()) throw ConfigError("explicit sequence is empty");
      return SectorSequence(std::move(idx), SectorSpec(j.value("C", 1.0), idx.front().size()),
                            j.value("tending", true));
    }
    throw ConfigError("unknown sequence type '" + type + "'");
  }

 private:
  std::filesystem::path base_;
  Context ctx_;
};

// ---------------------------------------------------------------------------
// Report serialization (fixed field order; non-finite numbers become null)

inline OrderedJson number_json(double v) {
  if (!std::isfinite(v)) return OrderedJson(nullptr);
  return OrderedJson(v);
}

inline OrderedJson report_json(const CertificateReport& r, const std::string& config_name,
                               const std::string& command) {
  OrderedJson j;
  j["config"] = config_name;
  j["command"] = command;
  j["claim"] = r.claim();
  j["pass"] = r.pass();
  j["claimed_bound"] = number_json(r.claimed_bound());
  j["achieved"] = number_json(r.achieved());
  j["tolerance"] = number_json(r.tolerance());
  j["margin"] = number_json(r.margin());
  OrderedJson conds = OrderedJson::array();
  for (const auto& c : r.conditions()) {
    OrderedJson cj;
    cj["name"] = c.name;
    cj["holds"] = c.holds();
    cj["claimed_bound"] = number_json(c.claimed_bound);
    cj["achieved"] = number_json(c.achieved);
    cj["tolerance"] = number_json(c.tolerance);
    conds.push_back(std::move(cj));
  }
  j["conditions"] = std::move(conds);
  if (r.witness()) {
    OrderedJson w;
    w["rank"] = r.witness()->rank();
    w["tau_complement"] = number_json(r.witness()->tau_complement());
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  OrderedJson meta = OrderedJson::object();
  for (const auto& [k, v] : r.metadata()) meta[k] = number_json(v);  // std::map: sorted keys
  j["metadata"] = std::move(meta);
  j["notes"] = r.notes();
  return j;
}

inline void write_tail_csv(const std::filesystem::path& p,
                           const std::vector<std::pair<Index, double>>& profile) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << "index,compressed_distance\n";
  out.precision(17);
  for (const auto& [n, v] : profile) {
    for (std::size_t i = 0; i < n.size(); ++i) out << (i ? ";" : "") << n[i];
    out << "," << v << "\n";
  }
}

// Averages along a sequence: n_1..n_d, norm_inf, norm_p, normalization.
inline void write_average_csv(const std::filesystem::path& p, const Context& ctx,
                              const std::vector<AverageResult>& rows, double norm_p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  if (rows.empty()) return;
  for (std::size_t i = 0; i < rows.front().n.size(); ++i) out << "n" << i + 1 << ",";
  out << "norm_inf,norm_p,normalization\n";
  out.precision(17);
  for (const auto& r : rows) {
    for (auto c : r.n) out << c << ",";
    out << operator_norm(r.value) << "," << lp_norm(ctx, r.value, norm_p) << "," << r.normalization << "\n";
  }
}

}  // namespace ncerg

#endif  // NCERG_IO_HPP_
