#ifndef NCERG_RUNNER_HPP_
#define NCERG_RUNNER_HPP_

// Experiment runner: a config names a command, its inputs and params; the
// runner maps it to a module operation and collects JSON-lines reports.
// Exit codes: 0 all pass, 1 some check failed, 2 parse or validation error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ncerg/invariants.hpp"
#include "ncerg/io.hpp"
#include "ncerg/maximal.hpp"

namespace ncerg {

struct ExperimentConfig {
  std::string name;
  std::string command;
  Json inputs = Json::object();
  Json params = Json::object();
  std::string output;  // optional JSON-lines path for this config alone
  std::filesystem::path base_dir = ".";

  static ExperimentConfig from_json(const Json& j, const std::filesystem::path& base = ".") {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    c.command = j.at("command").get<std::string>();
    c.name = j.value("name", c.command);
    if (j.contains("inputs")) c.inputs = j.at("inputs");
    if (j.contains("params")) c.params = j.at("params");
    if (!c.inputs.is_object() || !c.params.is_object())
      throw ConfigError(c.name + ": inputs and params must be objects");
    c.output = j.value("output", std::string());
    c.base_dir = base;
    return c;
  }
};

inline const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds{
      "verify-ds", "holder", "counterexample", "yeadon", "weak-type", "uem", "brunel",
      "bau",       "bww",    "besicovitch",    "hartman", "seminorm", "invariants"};
  return cmds;
}

// Accepts one config object, {"configs": [...]} or a bare array. Entries may
// be inline objects or paths to config files.
inline std::vector<ExperimentConfig> load_configs(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::vector<ExperimentConfig> out;
  const auto add = [&](const Json& e) {
    if (e.is_string()) {
      std::filesystem::path p(e.get<std::string>());
      if (p.is_relative()) p = base / p;
      for (auto& c : load_configs(p)) out.push_back(std::move(c));
    } else {
      out.push_back(ExperimentConfig::from_json(e, base));
    }
  };
  try {
    if (j.is_array()) for (const auto& e : j) add(e);
    else if (j.is_object() && j.contains("configs")) for (const auto& e : j.at("configs")) add(e);
    else add(j);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return out;
}

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

// NCERG_TOL_OVERRIDE, if set, replaces the certificate tolerance.
inline std::optional<double> tol_from_env(std::ostream* warn = &std::cerr) {
  const char* v = std::getenv("NCERG_TOL_OVERRIDE");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const double t = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(t >= 0.0)) throw ConfigError(std::string("NCERG_TOL_OVERRIDE is not a tolerance: ") + v);
  if (warn) *warn << "warning: NCERG_TOL_OVERRIDE=" << v << " replaces the certificate tolerance\n";
  return t;
}

struct RunResult {
  std::string name;
  std::string command;
  int exit_code = 0;
  std::string error;
  std::vector<OrderedJson> reports;
  double worst_margin = kInf;
};

inline RunResult run_experiment(const ExperimentConfig& c, const RunOverrides& ov);

namespace run_detail {

class Params {
 public:
  Params(const Json& j, const RunOverrides& ov) : j_(j), ov_(ov) {}

  bool has(const char* k) const { return j_.contains(k); }
  template <class T>
  T get(const char* k) const {
    if (!j_.contains(k)) throw ConfigError(std::string("missing param '") + k + "'");
    try {
      return j_.at(k).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("param '") + k + "': " + e.what());
    }
  }
  template <class T>
  T get(const char* k, T fallback) const {
    return j_.contains(k) ? get<T>(k) : fallback;
  }
  const Json& raw(const char* k) const {
    if (!j_.contains(k)) throw ConfigError(std::string("missing param '") + k + "'");
    return j_.at(k);
  }
  std::uint64_t seed() const {
    if (ov_.seed) return *ov_.seed;
    if (!j_.contains("seed")) throw ConfigError("randomized check needs a seed (params.seed or --seed)");
    return get<std::uint64_t>("seed");
  }
  double tol(double fallback = default_tolerances().certificate) const {
    if (ov_.tol) return *ov_.tol;
    return get<double>("tol", fallback);
  }
  Index index(const char* k) const { return parse_index(raw(k)); }

  ConjugatePair pair() const {
    const double p = get<double>("p");
    const bool au = get<bool>("au", false);
    if (!has("q")) return au ? ConjugatePair::au_from_p(p) : ConjugatePair::from_p(p);
    return ConjugatePair(p, get<double>("q"), au);
  }

 private:
  const Json& j_;
  const RunOverrides& ov_;
};

inline const Json& input(const ExperimentConfig& c, const char* k) {
  if (!c.inputs.contains(k)) throw ConfigError(std::string("missing input '") + k + "'");
  return c.inputs.at(k);
}

inline std::filesystem::path out_path(const ExperimentConfig& c, const std::string& p) {
  std::filesystem::path q(p);
  return q.is_relative() ? c.base_dir / q : q;
}

// Single map from inputs.map, else the first map of inputs.tuple.
inline DSMap single_map(Loader& ld, const ExperimentConfig& c) {
  if (c.inputs.contains("map")) return ld.map(c.inputs.at("map"));
  if (c.inputs.contains("tuple")) return ld.tuple(c.inputs.at("tuple"))[0];
  throw ConfigError("missing input 'map'");
}

inline DSTuple tuple_input(Loader& ld, const ExperimentConfig& c) {
  if (c.inputs.contains("tuple")) return ld.tuple(c.inputs.at("tuple"));
  if (c.inputs.contains("map")) return DSTuple({ld.map(c.inputs.at("map"))});
  throw ConfigError("missing input 'tuple'");
}

// Reads the algebra (if given) before any operator.
inline Loader make_loader(const ExperimentConfig& c) {
  Loader ld(c.base_dir);
  if (c.inputs.contains("algebra")) ld.algebra(c.inputs.at("algebra"));
  return ld;
}

inline std::vector<CertificateReport> cmd_verify_ds(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  std::vector<DSMap> maps;
  if (c.inputs.contains("maps")) {
    for (const auto& m : ld.resolve(c.inputs.at("maps"))) maps.push_back(ld.map(m));
  } else {
    maps.push_back(single_map(ld, c));
  }
  DSVerifyOptions opt;
  opt.tol = pr.tol();
  if (pr.has("p_grid")) opt.p_grid = pr.get<std::vector<double>>("p_grid");
  const std::uint64_t seed = pr.seed();
  std::vector<CertificateReport> out;
  for (std::size_t i = 0; i < maps.size(); ++i)
    out.push_back(verify_ds(maps[i], pr.get<std::size_t>("samples", 64), seed + i, opt).set("map_index", double(i)));
  return out;
}

inline std::vector<CertificateReport> cmd_holder(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const std::string mode = pr.get<std::string>("mode", "contraction");
  const double tol = pr.tol();
  if (mode == "kadison") {
    const DSMap phi = single_map(ld, c);
    return {kadison_check(phi, ld.matrix(input(c, "x")), tol)};
  }
  if (mode == "mei") {
    const Matrix a = ld.matrix(input(c, "x"));
    const Projection e(ld.context(), ld.matrix(input(c, "projection")));
    return {mei_compression_check(a, e, pr.get<double>("p"), tol)};
  }
  const ConjugatePair pair = pr.pair();
  if (mode == "scalar") {
    const auto xs = ld.matrices(input(c, "xs"));
    const auto alphas = pr.get<std::vector<double>>("alphas");
    return {holder_scalar_check(alphas, xs, pair, tol)};
  }
  if (mode != "contraction") throw ConfigError("holder: unknown mode '" + mode + "'");
  const Matrix x = ld.matrix(input(c, "x"));
  std::vector<DSMap> maps;
  for (const auto& m : ld.resolve(input(c, "maps"))) maps.push_back(ld.map(m));
  std::vector<double> alphas = pr.get<std::vector<double>>("alphas", std::vector<double>(maps.size(), 1.0 / double(maps.size())));
  if (alphas.size() != maps.size()) throw ConfigError("holder: alphas and maps differ in length");
  return {holder_contraction_check(alphas, maps, x, pair, tol)};
}

inline CertificateOptions cert_options(const Params& pr) {
  CertificateOptions o;
  o.tol = pr.tol();
  o.fallback = pr.get<bool>("fallback", true);
  return o;
}

inline std::vector<CertificateReport> cmd_yeadon(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const Matrix x = ld.matrix(input(c, "x"));
  const DSMap t = single_map(ld, c);
  return {yeadon_certificate(t, x, pr.get<double>("lambda"), pr.get<std::size_t>("horizon"), cert_options(pr))};
}

// chi: params.chi; else 1 for d = 1; else from a Brunel weight input, optionally calibrated.
inline double resolve_chi(Loader& ld, const ExperimentConfig& c, const Params& pr, const DSTuple& t) {
  if (pr.has("chi")) return pr.get<double>("chi");
  if (t.d() == 1) return 1.0;
  if (!c.inputs.contains("brunel")) throw ConfigError("weak-type with d >= 2 needs params.chi or inputs.brunel");
  BrunelWeights w = ld.brunel(c.inputs.at("brunel"));
  if (pr.has("calibrate")) {
    const Json& cal = pr.raw("calibrate");
    w = search_parameters(t, w, cal.at("n").get<std::vector<std::size_t>>(), cal.value("probes", std::size_t(64)),
                          cal.contains("seed") ? cal.at("seed").get<std::uint64_t>() : pr.seed());
  }
  return w.chi;
}

inline std::vector<CertificateReport> cmd_weak_type(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const DSTuple t = tuple_input(ld, c);
  const Matrix x = ld.matrix(input(c, "x"));
  const Index horizon = pr.index("horizon");
  const WeightSequence alpha = ld.weights(input(c, "alpha"), horizon);
  const SectorSpec sector(pr.get<double>("C", 1.0), t.d());
  const double chi = resolve_chi(ld, c, pr, t);
  auto rep = weak_type_pp_certificate(t, alpha, x, pr.get<double>("lambda"), pr.pair(), sector, chi, horizon,
                                      cert_options(pr));
  if (pr.has("csv")) {
    std::vector<AverageResult> rows;
    for (const auto& n : sector_indices(sector, horizon)) rows.push_back(weighted_average(t, alpha, x, n));
    write_average_csv(out_path(c, pr.get<std::string>("csv")), ld.context(), rows, pr.get<double>("p"));
  }
  return {rep};
}

inline std::vector<CertificateReport> cmd_uem(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const DSMap t = single_map(ld, c);
  const Matrix x = ld.matrix(input(c, "x"));
  const std::size_t h = pr.get<std::size_t>("horizon");
  const WeightSequence alpha = ld.weights(input(c, "alpha"), Index{h});
  return {uem_one_sided_certificate(t, alpha, x, pr.get<double>("lambda"), pr.get<double>("p"), h, cert_options(pr))};
}

inline std::vector<CertificateReport> cmd_brunel(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const DSTuple t = tuple_input(ld, c);
  BrunelWeights w = ld.brunel(input(c, "weights"));
  const auto ns = pr.get<std::vector<std::size_t>>("n");
  const std::size_t probes = pr.get<std::size_t>("probes", 64);
  const std::uint64_t seed = pr.seed();
  const double tol = pr.tol();
  std::vector<CertificateReport> out;
  // S itself must be Dunford-Schwartz
  out.push_back(verify_ds(brunel_operator(t, w), pr.get<std::size_t>("ds_samples", 32), seed));
  if (pr.get<bool>("search", false)) {
    BrunelSearchOptions so;
    so.tol = tol;
    so.chi_cap = pr.get<double>("chi_cap", so.chi_cap);
    w = search_parameters(t, w, ns, probes, seed, so);
  }
  // fresh probes for the check itself
  for (std::size_t n : ns) out.push_back(domination_check(t, w, n, probes, seed + 1, tol));
  return out;
}

inline ConvergenceOptions conv_options(const Params& pr) {
  ConvergenceOptions o;
  o.tol_conv = pr.get<double>("tol_conv", -1.0);
  o.max_tail_samples = pr.get<std::size_t>("max_tail_samples", o.max_tail_samples);
  return o;
}

inline std::vector<CertificateReport> cmd_bau(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const DSTuple t = tuple_input(ld, c);
  const Matrix x = ld.matrix(input(c, "x"));
  const SectorSequence seq = Loader::sequence(ld.resolve(input(c, "sequence")));
  const WeightSequence alpha = ld.weights(input(c, "alpha"), seq.bounding_box());
  const auto cert = bau_limit_estimate(t, alpha, x, seq, pr.get<double>("epsilon", 0.0), conv_options(pr));
  CertificateReport rep = cert.report;
  // optional closed-form limit: explicit matrix, or the orbit average of order m
  std::optional<Matrix> expected;
  if (c.inputs.contains("expected")) expected = ld.matrix(c.inputs.at("expected"));
  if (pr.has("orbit_order")) {
    if (t.d() != 1) throw ConfigError("bau: orbit_order needs d = 1");
    expected = orbit_average(t[0], x, pr.get<std::size_t>("orbit_order"));
  }
  if (expected)
    rep.add_condition("expected_limit", 0.0, operator_norm(Matrix(cert.limit - *expected)),
                      pr.get<double>("expected_tol", 1e-10));
  if (pr.has("csv")) write_tail_csv(out_path(c, pr.get<std::string>("csv")), cert.tail_profile);
  std::vector<CertificateReport> out{rep};
  if (pr.get<bool>("reverify", true)) out.push_back(reverify_bau(t, alpha, x, cert));
  return out;
}

inline std::vector<CertificateReport> cmd_bww(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const DSMap t = single_map(ld, c);
  const Matrix x = ld.matrix(input(c, "x"));
  const std::size_t h = pr.get<std::size_t>("horizon");
  std::vector<WeightSequence> fam;
  for (const auto& w : ld.resolve(input(c, "family"))) fam.push_back(ld.weights(w, Index{h}));
  return {bww_membership_check(t, x, fam, pr.get<double>("epsilon", 0.0), h, conv_options(pr))};
}

inline std::vector<CertificateReport> cmd_besicovitch(const ExperimentConfig&, const Params& pr) {
  const auto coeffs = Loader::fourier_coeffs(pr.raw("coeffs"));
  const Complex mu = parse_unimodular(pr.raw("mu"));
  const Complex lambda = pr.has("lambda") ? parse_unimodular(pr.raw("lambda")) : Complex(1.0);
  const std::size_t len = pr.get<std::size_t>("length");
  const double q = pr.get<double>("q", 2.0);
  const std::size_t ts = pr.get<std::size_t>("tail_start", 1);
  const auto fix = besicovitch_generate(coeffs, mu, lambda, len);
  std::vector<CertificateReport> out;
  CertificateReport exact("besicovitch_identity", 0.0, besicovitch_distance(fix.alpha, fix.poly, q, ts),
                          pr.tol(1e-10));
  exact.set("length", double(len)).set("q", q).set("terms", double(coeffs.size()));
  out.push_back(exact);
  if (pr.has("max_degree")) {
    const auto deg = pr.get<std::size_t>("max_degree");
    const double bound = besicovitch_tail_bound(coeffs, deg);
    const auto trunc = besicovitch_polynomial(coeffs, mu, lambda, deg);
    CertificateReport r("besicovitch_truncation", bound, besicovitch_distance(fix.alpha, trunc, q, ts),
                        1e-12 * std::max(1.0, bound));
    r.set("max_degree", double(deg)).set("tail_bound", bound);
    out.push_back(r);
  }
  return out;
}

inline std::vector<CertificateReport> cmd_hartman(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const std::size_t h = pr.get<std::size_t>("horizon");
  const WeightSequence a = ld.weights(input(c, "alpha"), Index{h});
  const auto est = hartman_estimate(a, parse_unimodular(pr.raw("lambda")), h);
  CertificateReport r("hartman_oscillation", pr.get<double>("bound"), est.oscillation, 0.0);
  r.set("limit_re", est.limit.real()).set("limit_im", est.limit.imag()).set("horizon", double(est.horizon));
  if (pr.has("expected_limit"))
    r.add_condition("expected_limit", 0.0, std::abs(est.limit - parse_complex(pr.raw("expected_limit"))),
                    pr.get<double>("expected_tol", 1e-8));
  return {r};
}

inline std::vector<CertificateReport> cmd_seminorm(const ExperimentConfig& c, const Params& pr) {
  Loader ld = make_loader(c);
  const Index h = pr.index("horizon");
  const WeightSequence a = ld.weights(input(c, "alpha"), h);
  const double q = pr.get<double>("q");
  const std::size_t ts = pr.get<std::size_t>("tail_start", 1);
  const auto m = wq_membership(a, q, ts, pr.get<double>("max_growth", 1.25));
  CertificateReport r("wq_membership", pr.get<double>("max_growth", 1.25), m.growth, 0.0);
  r.set("half_value", m.half_value).set("full_value", m.full_value).set("q", q).set("tail_start", double(ts));
  if (pr.has("C")) r.set("sector_seminorm", sector_sup_seminorm(a, q, SectorSpec(pr.get<double>("C"), a.d())));
  if (pr.has("expected"))
    r.add_condition("expected_value", 0.0, std::abs(m.full_value - pr.get<double>("expected")),
                    pr.get<double>("expected_tol", 1e-8));
  return {r};
}

// Same config and seed twice: the report lines must match byte for byte.
inline CertificateReport determinism_check(std::uint64_t seed) {
  const Json cfg = Json::parse(R"({
    "name": "determinism_probe", "command": "verify-ds",
    "inputs": {"algebra": {"dim": 3}, "map": {"kind": "random_kraus", "seed": 11, "count": 3}},
    "params": {"samples": 24}})");
  const auto c = ExperimentConfig::from_json(cfg);
  RunOverrides ov;
  ov.seed = seed;
  const auto a = run_experiment(c, ov), b = run_experiment(c, ov);
  std::size_t differing = a.reports.size() == b.reports.size() ? 0 : 1;
  for (std::size_t i = 0; i < std::min(a.reports.size(), b.reports.size()); ++i)
    if (a.reports[i].dump() != b.reports[i].dump()) ++differing;
  CertificateReport r("cli.determinism", 0.0, double(differing), 0.0);
  r.set("lines", double(a.reports.size()));
  return r;
}

inline std::vector<CertificateReport> cmd_invariants(const ExperimentConfig&, const Params& pr) {
  invariants::SuiteOptions o;
  o.seed = pr.seed();
  o.trials = pr.get<std::size_t>("trials", o.trials);
  std::vector<std::string> suites;
  if (pr.has("suites")) suites = pr.get<std::vector<std::string>>("suites");
  else if (pr.has("suite") && pr.get<std::string>("suite") != "all") suites = {pr.get<std::string>("suite")};
  else {
    suites = invariants::suite_names();
    suites.push_back("cli");
  }
  std::vector<CertificateReport> out;
  for (const auto& s : suites) {
    if (s == "cli") {
      out.push_back(determinism_check(o.seed));
      continue;
    }
    for (auto& r : invariants::run_suite(s, o)) out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<CertificateReport> dispatch(const ExperimentConfig& c, const Params& pr) {
  const std::string& k = c.command;
  if (k == "verify-ds") return cmd_verify_ds(c, pr);
  if (k == "holder") return cmd_holder(c, pr);
  if (k == "counterexample") return {convexity_counterexample(pr.tol(default_tolerances().loewner))};
  if (k == "yeadon") return cmd_yeadon(c, pr);
  if (k == "weak-type") return cmd_weak_type(c, pr);
  if (k == "uem") return cmd_uem(c, pr);
  if (k == "brunel") return cmd_brunel(c, pr);
  if (k == "bau") return cmd_bau(c, pr);
  if (k == "bww") return cmd_bww(c, pr);
  if (k == "besicovitch") return cmd_besicovitch(c, pr);
  if (k == "hartman") return cmd_hartman(c, pr);
  if (k == "seminorm") return cmd_seminorm(c, pr);
  if (k == "invariants") return cmd_invariants(c, pr);
  throw ConfigError("unknown command '" + k + "'");
}

inline OrderedJson error_json(const ExperimentConfig& c, const std::string& msg) {
  OrderedJson j;
  j["config"] = c.name;
  j["command"] = c.command;
  j["error"] = msg;
  return j;
}

}  // namespace run_detail

// The header is the only line carrying a timestamp.
inline OrderedJson report_header(std::size_t configs) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  OrderedJson h;
  h["header"] = "ncerg-report";
  h["format"] = 1;
  h["timestamp"] = ts.str();
  h["configs"] = configs;
  return h;
}

inline void write_jsonl(const std::filesystem::path& p, const std::vector<OrderedJson>& lines) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << report_header(1).dump() << "\n";
  for (const auto& l : lines) out << l.dump() << "\n";
}

inline RunResult run_experiment(const ExperimentConfig& c, const RunOverrides& ov = {}) {
  RunResult res;
  res.name = c.name;
  res.command = c.command;
  try {
    const run_detail::Params pr(c.params, ov);
    // "expect": "fail" turns a deliberate negative fixture into a pass of the run
    const bool expect_fail = pr.get<std::string>("expect", "pass") == "fail";
    const auto reps = run_detail::dispatch(c, pr);
    bool all = true;
    for (const auto& r : reps) {
      OrderedJson j = report_json(r, c.name, c.command);
      if (expect_fail) j["expected"] = "fail";
      res.reports.push_back(std::move(j));
      all = all && r.pass();
      res.worst_margin = std::min(res.worst_margin, r.margin());
    }
    res.exit_code = (expect_fail ? !all : all) ? 0 : 1;
    if (expect_fail) res.worst_margin = -res.worst_margin;
  } catch (const Error& e) {
    res.exit_code = 2;
    res.error = e.what();
  } catch (const Json::exception& e) {
    res.exit_code = 2;
    res.error = std::string("JSON: ") + e.what();
  } catch (const std::invalid_argument& e) {
    res.exit_code = 2;
    res.error = e.what();
  }
  if (res.exit_code == 2) res.reports = {run_detail::error_json(c, res.error)};
  if (!c.output.empty()) write_jsonl(run_detail::out_path(c, c.output), res.reports);
  return res;
}

struct BatchSummary {
  std::size_t count = 0, pass = 0, fail = 0, errors = 0;
  double worst_margin = kInf;
  std::vector<std::string> failing;
  int exit_code = 0;
  std::vector<RunResult> results;

  OrderedJson to_json() const {
    OrderedJson j;
    j["summary"] = true;
    j["count"] = count;
    j["pass"] = pass;
    j["fail"] = fail;
    j["errors"] = errors;
    j["worst_margin"] = number_json(count ? worst_margin : kInf);
    j["failing"] = failing;
    j["exit_code"] = exit_code;
    return j;
  }
};

// Configs run on `jobs` threads; results keep config order.
inline BatchSummary batch(const std::vector<ExperimentConfig>& configs, std::size_t jobs = 1,
                          const RunOverrides& ov = {}) {
  BatchSummary s;
  s.count = configs.size();
  s.results.resize(configs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) s.results[i] = run_experiment(configs[i], ov);
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, configs.size()));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& r : s.results) {
    if (r.exit_code == 0) ++s.pass;
    else {
      (r.exit_code == 2 ? s.errors : s.fail) += 1;
      s.failing.push_back(r.name);
    }
    s.exit_code = std::max(s.exit_code, r.exit_code);
    s.worst_margin = std::min(s.worst_margin, r.worst_margin);
  }
  return s;
}

// Header, every report line, then the summary line.
inline void write_batch_jsonl(std::ostream& out, const BatchSummary& s) {
  out << report_header(s.count).dump() << "\n";
  for (const auto& r : s.results)
    for (const auto& l : r.reports) out << l.dump() << "\n";
  out << s.to_json().dump() << "\n";
}

}  // namespace ncerg

#endif  // NCERG_RUNNER_HPP_
