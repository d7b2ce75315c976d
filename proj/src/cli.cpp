#include "rseq/cli.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "rseq/balayage.hpp"
#include "rseq/verify.hpp"

namespace rseq::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string interval_text(double l, double r) { return "[" + format_double(l) + ", " + format_double(r) + "]"; }

const std::vector<std::string> kSigmaKinds{"arcsine", "constant", "point_mass", "chebyshev", "legendre"};
const std::vector<std::string> kTopKeys{"preset", "F", "sigma", "grid", "hp", "tolerances",
                                        "balayage", "positivity", "threads", "output"};

// Reads typed fields and records every problem instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> violations;

  void unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) return;
    for (const auto& [k, v] : obj.items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        violations.push_back("unknown key '" + where + k + "'");
  }

  const nlohmann::json* object(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key)) return nullptr;
    if (!doc[key].is_object()) {
      violations.push_back("'" + key + "' must be an object");
      return nullptr;
    }
    return &doc[key];
  }

  template <class T>
  void number(const nlohmann::json* obj, const std::string& key, const std::string& name, T& out) {
    if (!obj || !obj->contains(key)) return;
    const auto& v = (*obj)[key];
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        violations.push_back("'" + name + "' must be an integer");
        return;
      }
      if (std::is_unsigned_v<T> && v.get<long long>() < 0) {
        violations.push_back("'" + name + "' must be non-negative");
        return;
      }
      out = v.get<T>();
    } else {
      if (!v.is_number()) {
        violations.push_back("'" + name + "' must be a number");
        return;
      }
      out = v.get<T>();
    }
  }
};

void validate(const RunConfig& c, std::vector<std::string>& v) {
  if (c.F.empty()) v.push_back("'F' must list at least one interval");
  for (std::size_t i = 0; i < c.F.size(); ++i) {
    const auto& I = c.F[i];
    if (!std::isfinite(I.left) || !std::isfinite(I.right) || !(I.left < I.right)) {
      v.push_back("F component " + std::to_string(i) + " " + interval_text(I.left, I.right) +
                  " must satisfy left < right");
      continue;
    }
    const double gap = I.left > 1.0 ? I.left - 1.0 : (I.right < -1.0 ? -1.0 - I.right : 0.0);
    if (gap < kMinGapToE)
      v.push_back("disjointness invariant violated: F component " + interval_text(I.left, I.right) +
                  " meets E = [-1, 1] (gap must be >= " + format_double(kMinGapToE) + ")");
    if (i > 0 && !(c.F[i - 1].right < I.left))
      v.push_back("F components must be sorted and pairwise disjoint: " +
                  interval_text(c.F[i - 1].left, c.F[i - 1].right) + " and " + interval_text(I.left, I.right));
  }
  if (c.grid.nodes < 8) v.push_back("'grid.nodes' must be >= 8");
  if (!(c.grid.grading >= 1.0 && c.grid.grading <= 2.0)) v.push_back("'grid.grading' must lie in [1, 2]");
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    if (c.n_list[i] < 0) v.push_back("'hp.n_list' entries must be >= 0");
    if (i > 0 && c.n_list[i] <= c.n_list[i - 1]) v.push_back("'hp.n_list' must be strictly increasing");
  }
  if (c.precision_bits < 64 || c.precision_bits > kMaxPrecisionBits)
    v.push_back("'hp.precision_bits' must lie in [64, " + std::to_string(kMaxPrecisionBits) + "]");
  if (!(c.tolerance_scale > 0.0) || !std::isfinite(c.tolerance_scale))
    v.push_back("'tolerances.scale' must be positive");
  if (!(std::abs(c.balayage_point) > 1.0)) v.push_back("'balayage.point' must satisfy |a| > 1");
  if (c.samples < 1) v.push_back("'positivity.samples' must be >= 1");
  if (c.threads < 1) v.push_back("'threads' must be >= 1");
  if (c.output.empty()) v.push_back("'output' must be a non-empty path");

  const auto& s = c.sigma;
  if (std::find(kSigmaKinds.begin(), kSigmaKinds.end(), s.kind) == kSigmaKinds.end()) {
    v.push_back("'sigma.kind' must be one of " + join(kSigmaKinds, ", "));
  } else if (s.kind == "point_mass") {
    if (!(std::abs(s.atom) > 1.0 + kMinGapToE)) v.push_back("'sigma.atom' must lie outside E = [-1, 1]");
  } else if (s.kind == "chebyshev" || s.kind == "legendre") {
    if (s.density.empty()) {
      v.push_back("'sigma.density' (polynomial coefficients) is required for kind " + s.kind);
    } else {
      bool positive = true;
      for (const auto& I : c.F)
        for (int k = 0; k <= 64 && std::isfinite(I.left) && std::isfinite(I.right); ++k) {
          const double t = I.left + (I.right - I.left) * k / 64.0;
          double p = 0.0;
          for (std::size_t j = s.density.size(); j-- > 0;) p = p * t + s.density[j];
          positive = positive && p > 0.0;
        }
      if (!positive) v.push_back("'sigma.density' must be strictly positive on F");
    }
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("invalid configuration:\n  - " + join(violations, "\n  - ")),
      violations_(std::move(violations)) {}

std::vector<std::string> preset_names() { return {"f23-arcsine", "f23-constant", "symmetric-arcsine"}; }

nlohmann::json preset(const std::string& name) {
  nlohmann::json j;
  if (name == "f23-arcsine") {
    j["F"] = {{2.0, 3.0}};
    j["sigma"] = {{"kind", "arcsine"}};
  } else if (name == "f23-constant") {
    j["F"] = {{2.0, 3.0}};
    j["sigma"] = {{"kind", "constant"}};
  } else if (name == "symmetric-arcsine") {
    j["F"] = {{-3.0, -2.0}, {2.0, 3.0}};
    j["sigma"] = {{"kind", "arcsine"}};
  } else {
    throw ConfigError({"unknown preset '" + name + "' (available: " + join(preset_names(), ", ") + ")"});
  }
  j["grid"] = {{"nodes", 400}, {"grading", 2.0}};
  j["hp"] = {{"n_list", {5, 10, 20, 40}}, {"precision_bits", kDefaultPrecisionBits}};
  j["output"] = "out/" + name;
  return j;
}

RunConfig parse_config(const nlohmann::json& input) {
  if (!input.is_object()) throw ConfigError({"configuration must be a JSON object"});
  nlohmann::json doc = input;
  RunConfig c;
  Reader rd;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) throw ConfigError({"'preset' must be a string"});
    c.preset = doc["preset"].get<std::string>();
    nlohmann::json base = preset(c.preset);
    nlohmann::json patch = doc;
    patch.erase("preset");
    base.merge_patch(patch);
    doc = std::move(base);
  }
  rd.unknown_keys(doc, kTopKeys, "");

  if (!doc.contains("F")) {
    rd.violations.push_back("'F' is required");
  } else if (!doc["F"].is_array()) {
    rd.violations.push_back("'F' must be an array of [left, right] pairs");
  } else {
    for (const auto& p : doc["F"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        rd.violations.push_back("'F' entries must be [left, right] number pairs");
        continue;
      }
      c.F.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }

  if (const auto* s = rd.object(doc, "sigma")) {
    rd.unknown_keys(*s, {"kind", "atom", "density"}, "sigma.");
    if (s->contains("kind")) {
      if ((*s)["kind"].is_string()) c.sigma.kind = (*s)["kind"].get<std::string>();
      else rd.violations.push_back("'sigma.kind' must be a string");
    }
    rd.number(s, "atom", "sigma.atom", c.sigma.atom);
    if (s->contains("density")) {
      const auto& d = (*s)["density"];
      if (!d.is_array() || !std::all_of(d.begin(), d.end(), [](const auto& x) { return x.is_number(); }))
        rd.violations.push_back("'sigma.density' must be an array of polynomial coefficients");
      else
        for (const auto& x : d) c.sigma.density.push_back(x.template get<double>());
    }
  }
  if (const auto* g = rd.object(doc, "grid")) {
    rd.unknown_keys(*g, {"nodes", "grading"}, "grid.");
    rd.number(g, "nodes", "grid.nodes", c.grid.nodes);
    rd.number(g, "grading", "grid.grading", c.grid.grading);
  }
  if (const auto* h = rd.object(doc, "hp")) {
    rd.unknown_keys(*h, {"n_list", "precision_bits"}, "hp.");
    if (h->contains("n_list")) {
      const auto& l = (*h)["n_list"];
      if (!l.is_array() || !std::all_of(l.begin(), l.end(), [](const auto& x) { return x.is_number_integer(); })) {
        rd.violations.push_back("'hp.n_list' must be an array of integers");
      } else {
        c.n_list.clear();
        for (const auto& x : l) c.n_list.push_back(x.template get<int>());
      }
    }
    rd.number(h, "precision_bits", "hp.precision_bits", c.precision_bits);
  }
  if (const auto* t = rd.object(doc, "tolerances")) {
    rd.unknown_keys(*t, {"scale"}, "tolerances.");
    rd.number(t, "scale", "tolerances.scale", c.tolerance_scale);
  }
  if (const auto* b = rd.object(doc, "balayage")) {
    rd.unknown_keys(*b, {"point"}, "balayage.");
    rd.number(b, "point", "balayage.point", c.balayage_point);
  }
  if (const auto* p = rd.object(doc, "positivity")) {
    rd.unknown_keys(*p, {"samples", "seed"}, "positivity.");
    rd.number(p, "samples", "positivity.samples", c.samples);
    rd.number(p, "seed", "positivity.seed", c.seed);
  }
  rd.number(&doc, "threads", "threads", c.threads);
  if (doc.contains("output")) {
    if (doc["output"].is_string()) c.output = doc["output"].get<std::string>();
    else rd.violations.push_back("'output' must be a string");
  }

  validate(c, rd.violations);
  if (!rd.violations.empty()) throw ConfigError(rd.violations);
  return c;
}

RunConfig load_config(const fs::path& path) {
  const std::string p = path.string();
  if (p.rfind("preset:", 0) == 0) return parse_config(nlohmann::json{{"preset", p.substr(7)}});
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open configuration file '" + p + "'"});
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({"configuration file '" + p + "' is not valid JSON: " + e.what()});
  }
  return parse_config(doc);
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.out) c.output = *o.out;
  if (o.threads) c.threads = *o.threads;
  if (o.precision_bits) c.precision_bits = *o.precision_bits;
  if (o.nodes) c.grid.nodes = *o.nodes;
  if (o.tolerance_scale) c.tolerance_scale = *o.tolerance_scale;
  std::vector<std::string> v;
  validate(c, v);
  if (!v.empty()) throw ConfigError(v);
}

MarkovSpec RunConfig::markov() const {
  const IntervalUnion S = support();
  if (sigma.kind == "arcsine") return MarkovSpec::arcsine(S);
  if (sigma.kind == "constant") return MarkovSpec::constant(S);
  if (sigma.kind == "point_mass") return MarkovSpec::point_mass(sigma.atom);
  MarkovSpec m;
  m.support = S;
  m.weight = sigma.kind == "chebyshev" ? MarkovSpec::Weight::chebyshev : MarkovSpec::Weight::legendre;
  m.density = [coeffs = sigma.density](const Real& t) {
    Real p = 0;
    for (std::size_t j = coeffs.size(); j-- > 0;) p = p * t + coeffs[j];
    return p;
  };
  m.name = sigma.kind + "-polynomial";
  return m;
}

ojson RunConfig::normalized() const {
  ojson j;
  j["preset"] = preset;
  auto f = ojson::array();
  for (const auto& I : F) f.push_back({I.left, I.right});
  j["F"] = f;
  ojson s{{"kind", sigma.kind}};
  if (sigma.kind == "point_mass") s["atom"] = sigma.atom;
  if (!sigma.density.empty()) s["density"] = sigma.density;
  j["sigma"] = s;
  j["grid"] = {{"nodes", grid.nodes}, {"grading", grid.grading}};
  j["hp"] = {{"n_list", n_list}, {"precision_bits", precision_bits}};
  j["tolerances"] = {{"scale", tolerance_scale}};
  j["balayage"] = {{"point", balayage_point}};
  j["positivity"] = {{"samples", samples}, {"seed", seed}};
  j["threads"] = threads;
  j["output"] = output.generic_string();
  return j;
}

// ---------------------------------------------------------------------------

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

namespace {

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  const fs::path& dir() const { return dir_; }

  template <class Fn>
  void write(const std::string& name, Fn&& fn) {
    std::ofstream os(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
    fn(os);
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  }

  void measure(const std::string& name, const DiscreteMeasure& mu) {
    write(name, [&](std::ostream& os) { write_measure_csv(os, mu); });
  }

  void json(const std::string& name, const ojson& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

  void report(const std::string& stem, const VerificationReport& r) {
    write(stem + ".json", [&](std::ostream& os) { write_report_json(os, r); });
    write(stem + ".md", [&](std::ostream& os) { write_report_markdown(os, r); });
  }

  void manifest(const std::string& command, const ojson& config, double seconds) {
    std::vector<std::string> names = files_;
    std::sort(names.begin(), names.end());
    ojson files = ojson::array();
    for (const auto& n : names)
      files.push_back({{"path", n}, {"bytes", fs::file_size(dir_ / n)}, {"sha256", sha256_file(dir_ / n)}});
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    ojson m;
    m["command"] = command;
    m["config"] = config;
    m["files"] = files;
    m["metadata"] = {{"generated_utc", ts.str()}, {"elapsed_seconds", seconds}};
    std::ofstream os(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
    os << m.dump(2) << '\n';
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

ojson intervals(const IntervalUnion& S) {
  auto a = ojson::array();
  for (const auto& I : S.components()) a.push_back({I.left, I.right});
  return a;
}

ojson solution_sidecar(const EquilibriumSolution& s, const IntervalUnion& support, const GridParams& gp) {
  ojson j;
  j["constant"] = s.constants.at(0);
  j["residual_sup"] = s.residual_sup;
  j["min_density"] = s.min_density;
  j["grid"] = {{"support", intervals(support)}, {"nodes_per_component", gp.nodes}, {"grading", gp.grading}};
  j["energy"] = s.energy;
  j["used_fallback"] = s.used_fallback;
  j["iterations"] = s.iterations;
  j["kkt_residual"] = s.kkt_residual;
  return j;
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions o;
  o.threads = c.threads;
  return o;
}

void echo_config(VerificationReport& r, const RunConfig& c) {
  ojson cfg;
  cfg["run"] = c.normalized();
  cfg["report"] = r.config;
  r.config = std::move(cfg);
}

struct Theorem1Bundle {
  VerificationReport report;
  Theorem1Outputs outputs;
};

Theorem1Bundle theorem1_group(const RunConfig& c) {
  const IntervalUnion F = c.support();
  const Tolerances tol{c.tolerance_scale};
  Theorem1Bundle b;
  b.report = verify_theorem1(F, c.grid, tol, c.threads, &b.outputs);
  b.report.name = "theorem1";
  const auto& out = b.outputs;
  if (out.scalar && out.vector) {
    std::optional<double> wE;
    if (out.problem6) wE = out.problem6->constants[0];
    b.report.merge(verify_v2_constancy(F, out.scalar->measure, out.vector->lambda1.measure, wE, tol));
  } else {
    b.report.fail("V2", "v2 constancy chain", "not evaluated: a required solve failed");
  }
  if (out.scalar) {
    b.report.merge(verify_sheet1_positivity(out.scalar->measure, c.samples, c.seed));
    b.report.merge(verify_asymptotic_charge(out.scalar->measure));
  } else {
    b.report.fail("S1", "sheet-1 positivity", "not evaluated: scalar solve failed");
    b.report.fail("AC", "asymptotic charge", "not evaluated: scalar solve failed");
  }
  return b;
}

void write_theorem1_measures(Artifacts& a, const Theorem1Outputs& o) {
  if (o.scalar) a.measure("lambda_F.csv", o.scalar->measure);
  if (o.vector) {
    a.measure("lambda1.csv", o.vector->lambda1.measure);
    a.measure("lambda2.csv", o.vector->lambda2.measure);
  }
  if (o.problem6) a.measure("lambda1_problem6.csv", o.problem6->measure);
  if (o.beta_F_lambda1) a.measure("balayage_F_lambda1.csv", *o.beta_F_lambda1);
  if (o.lambda1_reconstructed) a.measure("lambda1_reconstructed.csv", *o.lambda1_reconstructed);
}

MarkovSpec prop2_sigma(const RunConfig& c) {
  if (c.sigma.kind == "point_mass")
    throw ConfigError({"'sigma.kind' point_mass is supported by the hp command only"});
  return c.markov();
}

VerificationReport prop2_report(const RunConfig& c, const DiscreteMeasure& lambda, Artifacts& a) {
  ZeroDistributionParams zp;
  zp.n_list = c.n_list;
  zp.precision_bits = c.precision_bits;
  std::vector<std::pair<HPSolution, ZeroSet>> sols;
  auto r = verify_zero_distribution(prop2_sigma(c), lambda, zp, &sols);
  r.name = "prop2";
  for (const auto& [sol, zs] : sols)
    a.write("zeros_n" + std::to_string(sol.n) + ".csv", [&](std::ostream& os) { write_zeros_csv(os, zs); });
  a.write("ks_sequence.csv", [&](std::ostream& os) {
    os << "n,ks\n";
    const auto& n = r.series["n"];
    const auto& ks = r.series["ks"];
    for (std::size_t i = 0; i < n.size(); ++i)
      os << n[i].get<int>() << ',' << (ks[i].is_number() ? format_double(ks[i].get<double>()) : "nan") << '\n';
  });
  return r;
}

int report_exit(const VerificationReport& r, const std::string& command, const fs::path& dir, std::ostream& out) {
  out << command << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.count(CheckStatus::pass) << " pass, "
      << r.count(CheckStatus::fail) << " fail, " << r.count(CheckStatus::skipped) << " skipped) -> "
      << dir.generic_string() << '\n';
  return r.passed() ? kExitOk : kExitCheckFailure;
}

int dispatch(const std::string& command, const RunConfig& c, Artifacts& a, std::ostream& out) {
  const IntervalUnion F = c.support();
  const SolverOptions opt = solver_options(c);
  const std::string dir = a.dir().generic_string();

  if (command == "solve-scalar") {
    const auto s = solve_scalar(F, c.grid, opt);
    a.measure("lambda_F.csv", s.measure);
    a.json("lambda_F.json", solution_sidecar(s, F, c.grid));
    out << "solve-scalar: w_F = " << format_double(s.constants[0]) << ", residual_sup = "
        << format_double(s.residual_sup) << ", min_density = " << format_double(s.min_density) << " -> " << dir
        << '\n';
    return kExitOk;
  }
  if (command == "solve-vector") {
    const auto v = solve_vector(F, c.grid, opt);
    a.measure("lambda1.csv", v.lambda1.measure);
    a.measure("lambda2.csv", v.lambda2.measure);
    a.json("lambda1.json", solution_sidecar(v.lambda1, unit_interval(), c.grid));
    a.json("lambda2.json", solution_sidecar(v.lambda2, F, c.grid));
    a.json("vector.json", {{"w1", v.lambda1.constants[0]}, {"w2", v.lambda2.constants[0]}, {"energy", v.energy}});
    out << "solve-vector: w1 = " << format_double(v.lambda1.constants[0])
        << ", w2 = " << format_double(v.lambda2.constants[0]) << ", energy = " << format_double(v.energy) << " -> "
        << dir << '\n';
    return kExitOk;
  }
  if (command == "solve-p6") {
    const auto s = solve_problem6_single_interval(F, c.grid, opt);
    a.measure("lambda1_problem6.csv", s.measure);
    a.json("lambda1_problem6.json", solution_sidecar(s, unit_interval(), c.grid));
    out << "solve-p6: w_E = " << format_double(s.constants[0]) << ", residual_sup = "
        << format_double(s.residual_sup) << " -> " << dir << '\n';
    return kExitOk;
  }
  if (command == "balayage") {
    const Grid gE = make_grid(unit_interval(), c.grid.nodes, c.grid.grading);
    const auto closed = balayage_point_to_E(c.balayage_point, gE);
    const auto numeric = balayage_numeric(DiscreteMeasure::point_mass(c.balayage_point), gE, opt);
    const auto scalar = solve_scalar(F, c.grid, opt);
    const auto swept = balayage_numeric(scalar.measure, gE, opt);
    const auto recon = reconstruct_lambda1(scalar.measure, gE, opt);
    a.measure("balayage_point_closed.csv", closed.measure);
    a.measure("balayage_point_numeric.csv", numeric.measure);
    a.measure("balayage_E_lambda_F.csv", swept.measure);
    a.measure("lambda1_reconstructed.csv", recon);
    const double ks = ks_distance(closed.measure, numeric.measure);
    a.json("balayage.json", {{"point", c.balayage_point},
                             {"point_shift_exact", closed.shift_constant},
                             {"point_shift_numeric", numeric.shift_constant},
                             {"point_potential_residual_numeric", numeric.potential_residual},
                             {"point_ks_numeric_vs_closed", ks},
                             {"lambda_F_shift", swept.shift_constant},
                             {"lambda_F_potential_residual", swept.potential_residual}});
    out << "balayage: KS(numeric, closed form) = " << format_double(ks) << " for a = "
        << format_double(c.balayage_point) << " -> " << dir << '\n';
    return kExitOk;
  }
  if (command == "hp") {
    const MarkovSpec sigma = c.markov();
    std::vector<std::string> parts;
    for (int n : c.n_list) {
      auto [sol, zs] = solve_hp_with_zeros(n, sigma, c.precision_bits);
      a.write("hp_n" + std::to_string(n) + ".json", [&](std::ostream& os) { write_hp_json(os, sol); });
      if (n > 0)
        a.write("zeros_n" + std::to_string(n) + ".csv", [&](std::ostream& os) { write_zeros_csv(os, zs); });
      parts.push_back("n=" + std::to_string(n) + " order " + std::to_string(sol.residual_order) + "/" +
                      std::to_string(2 * n + 1) + " at " + std::to_string(sol.precision_bits) + " bits");
    }
    out << "hp: " << join(parts, ", ") << " -> " << dir << '\n';
    return kExitOk;
  }
  if (command == "verify-theorem1") {
    auto b = theorem1_group(c);
    echo_config(b.report, c);
    write_theorem1_measures(a, b.outputs);
    a.report("report_verify-theorem1", b.report);
    return report_exit(b.report, command, a.dir(), out);
  }
  if (command == "verify-prop2") {
    prop2_sigma(c);
    const auto s = solve_scalar(F, c.grid, opt);
    a.measure("lambda_F.csv", s.measure);
    auto r = prop2_report(c, s.measure, a);
    echo_config(r, c);
    a.report("report_verify-prop2", r);
    return report_exit(r, command, a.dir(), out);
  }
  if (command == "verify-all") {
    prop2_sigma(c);
    VerificationReport all;
    all.name = "verify-all";
    ojson sub;
    auto add = [&](const VerificationReport& r) {
      sub[r.name] = r.config;
      all.merge(r);
    };
    add(verify_classical(c.grid, c.threads));
    add(verify_point_balayage(c.balayage_point, c.grid, c.threads));
    auto b = theorem1_group(c);
    add(b.report);
    write_theorem1_measures(a, b.outputs);
    if (b.outputs.scalar) {
      add(prop2_report(c, b.outputs.scalar->measure, a));
    } else {
      all.fail("HP", "zero distribution", "not evaluated: scalar solve failed");
    }
    all.config = sub;
    echo_config(all, c);
    a.report("report_verify-all", all);
    return report_exit(all, command, a.dir(), out);
  }
  throw std::logic_error("unhandled command " + command);
}

std::string usage() {
  std::ostringstream os;
  os << "usage: rseq <command> --config PATH [--out DIR] [--threads N] [--precision-bits B] [--nodes N]\n"
        "                      [--tolerance-scale S]\n"
        "commands: "
     << join(commands(), ", ")
     << "\n"
        "PATH may be a JSON file or preset:NAME with NAME one of "
     << join(preset_names(), ", ") << '\n';
  return os.str();
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"solve-scalar", "solve-vector",    "solve-p6",     "balayage",
                                          "hp",           "verify-theorem1", "verify-prop2", "verify-all"};
  return c;
}

int run(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    err << "unknown command '" << command << "'\n" << usage();
    return kExitError;
  }
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Artifacts a(cfg.output);
    const int code = dispatch(command, cfg, a, out);
    a.manifest(command, cfg.normalized(),
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return code;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
  } catch (const SolverError& e) {
    err << command << ": solver error: " << e.what() << '\n';
  } catch (const PrecisionError& e) {
    err << command << ": precision exhausted at " << e.bits() << " bits: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << command << ": error: " << e.what() << '\n';
  }
  return kExitError;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nikishin-system equilibrium measures and Hermite-Pade experiments"};
  std::string command, config;
  Overrides o;
  std::string out_dir;
  app.add_option("command", command, "one of: " + join(commands(), ", "))->required();
  app.add_option("--config", config, "configuration file or preset:NAME")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", o.threads, "worker threads (1 = reference determinism)");
  app.add_option("--precision-bits", o.precision_bits, "Hermite-Pade working precision");
  app.add_option("--nodes", o.nodes, "cells per component");
  app.add_option("--tolerance-scale", o.tolerance_scale, "multiplier for every tolerance");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << usage();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << usage();
    return kExitError;
  }
  if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
    err << "unknown command '" << command << "'\n" << usage();
    return kExitError;
  }
  if (!out_dir.empty()) o.out = out_dir;
  RunConfig cfg;
  try {
    cfg = load_config(config);
    apply_overrides(cfg, o);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitError;
  }
  return run(command, cfg, out, err);
}

}  // namespace rseq::cli
