#include "rseq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace rseq {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

namespace {

Check& push(VerificationReport& r, std::string id, std::string description, double measured,
            double tolerance, std::string relation, bool ok) {
  Check c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.measured = measured;
  c.tolerance = tolerance;
  c.relation = std::move(relation);
  c.status = ok ? CheckStatus::pass : CheckStatus::fail;
  r.checks.push_back(std::move(c));
  return r.checks.back();
}

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

nlohmann::ordered_json intervals_json(const IntervalUnion& F) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& I : F.components()) a.push_back({I.left, I.right});
  return a;
}

double max_abs_dev_from_mean(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double d = 0.0;
  for (double x : v) d = std::max(d, std::abs(x - mean));
  return d;
}

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

Check& VerificationReport::check_le(std::string id, std::string description, double measured,
                                    double tolerance) {
  return push(*this, std::move(id), std::move(description), measured, tolerance, "<=",
              std::isfinite(measured) && measured <= tolerance);
}

Check& VerificationReport::check_ge(std::string id, std::string description, double measured,
                                    double bound) {
  return push(*this, std::move(id), std::move(description), measured, bound, ">=",
              std::isfinite(measured) && measured >= bound);
}

Check& VerificationReport::check_gt(std::string id, std::string description, double measured,
                                    double bound) {
  return push(*this, std::move(id), std::move(description), measured, bound, ">",
              std::isfinite(measured) && measured > bound);
}

Check& VerificationReport::check_eq(std::string id, std::string description, double measured,
                                    double expected) {
  return push(*this, std::move(id), std::move(description), measured, expected, "==",
              measured == expected);
}

Check& VerificationReport::skip(std::string id, std::string description, std::string reason) {
  Check c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.measured = std::nan("");
  c.tolerance = std::nan("");
  c.relation = "";
  c.status = CheckStatus::skipped;
  c.note = std::move(reason);
  checks.push_back(std::move(c));
  return checks.back();
}

Check& VerificationReport::fail(std::string id, std::string description, std::string reason) {
  auto& c = skip(std::move(id), std::move(description), std::move(reason));
  c.status = CheckStatus::fail;
  return c;
}

bool VerificationReport::passed() const { return count(CheckStatus::fail) == 0; }

std::size_t VerificationReport::count(CheckStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [s](const Check& c) { return c.status == s; }));
}

void VerificationReport::merge(const VerificationReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  if (!other.values.empty()) values[other.name] = other.values;
  if (!other.series.empty()) series[other.name] = other.series;
}

double Tolerances::residual(double w) const { return 1e-3 * std::max(1.0, std::abs(w)) * scale; }

// ---------------------------------------------------------------------------

VerificationReport verify_theorem1(const IntervalUnion& F, const GridParams& gp,
                                   const Tolerances& tol, int threads, Theorem1Outputs* outputs) {
  require_disjoint_from_E(F);
  VerificationReport r;
  r.name = "theorem1";
  r.config = {{"F", intervals_json(F)}, {"nodes", gp.nodes}, {"grading", gp.grading},
              {"tolerance_scale", tol.scale}};
  SolverOptions opt;
  opt.threads = threads;
  const double ks_tol = tol.ks(gp.nodes);
  const Grid gE = make_grid(unit_interval(), gp.nodes, gp.grading);
  const Grid gF = make_grid(F, gp.nodes, gp.grading);

  std::optional<EquilibriumSolution> scalar;
  std::optional<VectorSolution> vec;
  std::optional<EquilibriumSolution> p6;
  std::optional<DiscreteMeasure> beta_F, recon;

  try {
    scalar = solve_scalar(F, gp, opt);
  } catch (const std::exception& e) {
    r.fail("T1.scalar_solve", "scalar problem solved", e.what());
  }
  try {
    vec = solve_vector(F, gp, opt);
  } catch (const std::exception& e) {
    r.fail("T1.vector_solve", "vector problem solved", e.what());
  }
  if (F.size() == 1) {
    try {
      p6 = solve_problem6_single_interval(F, gp, opt);
    } catch (const std::exception& e) {
      r.fail("T1.problem6_solve", "single-interval Green problem solved", e.what());
    }
  }

  const std::string not_run = "not evaluated: a required solve failed";
  if (scalar) {
    const auto& s = *scalar;
    const double w = s.constants[0];
    const auto fine = gF.subdivided(4).nodes();
    r.check_le("T1.residual", "sup |P + V - w_F| on F (4x nested test grid)", scalar_defect(s.measure, w, fine),
               tol.residual(w));
    r.check_gt("T1.min_density", "min density of lambda_F on F", s.min_density, 0.0);
    r.values["w_F"] = number(w);
    r.values["scalar_node_residual"] = number(s.residual_sup);
    r.values["scalar_used_fallback"] = s.used_fallback;
    if (F.is_symmetric())
      r.check_le("T1.symmetry", "max |w_i - w_mirror(i)| of lambda_F", symmetry_defect(s.measure), 1e-9);
    else
      r.skip("T1.symmetry", "mirror symmetry of lambda_F", "F is not symmetric");
  } else {
    r.fail("T1.residual", "sup |P + V - w_F| on F (4x nested test grid)", not_run);
    r.fail("T1.min_density", "min density of lambda_F on F", not_run);
    r.fail("T1.symmetry", "mirror symmetry of lambda_F", not_run);
  }

  if (scalar && vec) {
    r.check_le("T1.ks_lambda2", "KS(lambda_F, lambda2)", ks_distance(scalar->measure, vec->lambda2.measure),
               ks_tol);
    try {
      beta_F = balayage_numeric(vec->lambda1.measure, gF, opt).measure;
      r.check_le("T1.ks_balayage_F", "KS(lambda_F, Bal_F(lambda1))", ks_distance(scalar->measure, *beta_F),
                 ks_tol);
    } catch (const std::exception& e) {
      r.fail("T1.ks_balayage_F", "KS(lambda_F, Bal_F(lambda1))", e.what());
    }
    try {
      recon = reconstruct_lambda1(scalar->measure, gE, opt);
      r.check_le("T1.ks_reconstruction", "KS(lambda1, (Bal_E(lambda_F) + 3 tau_E) / 4)",
                 ks_distance(vec->lambda1.measure, *recon), ks_tol);
    } catch (const std::exception& e) {
      r.fail("T1.ks_reconstruction", "KS(lambda1, (Bal_E(lambda_F) + 3 tau_E) / 4)", e.what());
    }
  } else {
    r.fail("T1.ks_lambda2", "KS(lambda_F, lambda2)", not_run);
    r.fail("T1.ks_balayage_F", "KS(lambda_F, Bal_F(lambda1))", not_run);
    r.fail("T1.ks_reconstruction", "KS(lambda1, (Bal_E(lambda_F) + 3 tau_E) / 4)", not_run);
  }

  if (vec) {
    r.values["w1"] = number(vec->lambda1.constants[0]);
    r.values["w2"] = number(vec->lambda2.constants[0]);
    r.values["vector_energy"] = number(vec->energy);
    r.values["vector_used_fallback"] = vec->lambda1.used_fallback;
  }

  const std::string p6_desc = "KS(lambda1 from the Green problem on E, lambda1 from the vector problem)";
  const std::string wE_desc = "|w_E - (w1 + w2)|";
  if (F.size() != 1) {
    r.skip("T1.ks_problem6", p6_desc, "F has more than one component");
    r.skip("T1.wE_consistency", wE_desc, "F has more than one component");
  } else if (p6 && vec) {
    r.check_le("T1.ks_problem6", p6_desc, ks_distance(p6->measure, vec->lambda1.measure), ks_tol);
    const double wE = p6->constants[0];
    r.values["w_E"] = number(wE);
    r.check_le("T1.wE_consistency", wE_desc,
               std::abs(wE - vec->lambda1.constants[0] - vec->lambda2.constants[0]), tol.residual(wE));
  } else {
    r.fail("T1.ks_problem6", p6_desc, not_run);
    r.fail("T1.wE_consistency", wE_desc, not_run);
  }

  // routes to lambda1
  std::vector<std::pair<std::string, const DiscreteMeasure*>> routes;
  if (vec) routes.emplace_back("vector", &vec->lambda1.measure);
  if (p6) routes.emplace_back("problem6", &p6->measure);
  if (recon) routes.emplace_back("reconstruction", &*recon);
  const std::size_t expected_routes = F.size() == 1 ? 3 : 2;
  if (routes.size() == expected_routes) {
    double worst = 0.0;
    for (std::size_t i = 0; i < routes.size(); ++i)
      for (std::size_t j = i + 1; j < routes.size(); ++j) {
        const double d = ks_distance(*routes[i].second, *routes[j].second);
        r.values["closure_" + routes[i].first + "_" + routes[j].first] = number(d);
        worst = std::max(worst, d);
      }
    r.check_le("T1.closure", "max pairwise KS among the routes to lambda1", worst, 2.0 * ks_tol);
  } else {
    r.fail("T1.closure", "max pairwise KS among the routes to lambda1", not_run);
  }

  if (outputs) {
    outputs->scalar = scalar;
    outputs->vector = vec;
    outputs->problem6 = p6;
    outputs->beta_F_lambda1 = beta_F;
    outputs->lambda1_reconstructed = recon;
  }
  return r;
}

// ---------------------------------------------------------------------------

VerificationReport verify_v2_constancy(const IntervalUnion& F, const DiscreteMeasure& lambda,
                                       const DiscreteMeasure& lambda1, std::optional<double> w_E,
                                       const Tolerances& tol) {
  VerificationReport r;
  r.name = "v2_constancy";
  r.config = {{"F", intervals_json(F)}, {"tolerance_scale", tol.scale}};

  std::vector<double> v2, diff;
  for (double z : lambda.nodes()) {
    const double v = 3.0 * log_potential(lambda, cplx(z, 0.0)) + green_potential_E(lambda, z) +
                     3.0 * green_E_at_infinity(z);
    const double p = rs_potential(lambda, RSPoint{cplx(z, 0.0), Sheet::one});
    v2.push_back(v);
    diff.push_back(v - 2.0 * (p + green_E_at_infinity(z)));
  }
  r.check_le("V2.identity", "max deviation of v2 - 2(P + log|Phi|) from its mean on F", max_abs_dev_from_mean(diff),
             1e-10);
  r.check_le("V2.constancy_F", "sup - inf of v2 over the nodes of F", spread(v2), tol.constancy());
  r.values["v2_mean"] = number(std::accumulate(v2.begin(), v2.end(), 0.0) / static_cast<double>(v2.size()));

  const std::string desc_c = "sup - inf of 3 U^lambda1 + G_F^lambda1 over the nodes of E";
  const std::string desc_w = "max |3 U^lambda1 + G_F^lambda1 - w_E| over the nodes of E";
  if (F.size() != 1) {
    r.skip("V2.green_constancy_E", desc_c, "G_F is implemented for a single interval only");
    r.skip("V2.green_equals_wE", desc_w, "G_F is implemented for a single interval only");
    return r;
  }
  const IntervalGreen g(F[0]);
  std::vector<double> v;
  for (double x : lambda1.nodes())
    v.push_back(3.0 * log_potential(lambda1, cplx(x, 0.0)) + green_potential_interval(lambda1, g, x));
  r.check_le("V2.green_constancy_E", desc_c, spread(v), tol.constancy());
  if (w_E) {
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x - *w_E));
    r.check_le("V2.green_equals_wE", desc_w, d, tol.constancy() * std::max(1.0, std::abs(*w_E)));
  } else {
    r.skip("V2.green_equals_wE", desc_w, "w_E not supplied");
  }
  return r;
}

// ---------------------------------------------------------------------------

double sheet1_v_green(const DiscreteMeasure& lambda, double z) {
  return green_potential_E(lambda, z) + 3.0 * green_E_at_infinity(z);
}

double sheet1_v_difference(const DiscreteMeasure& lambda, double z) {
  const RSPoint p1{cplx(z, 0.0), Sheet::one};
  const RSPoint p0{cplx(z, 0.0), Sheet::zero};
  return rs_potential(lambda, p1) + external_field(p1) - rs_potential(lambda, p0) - external_field(p0);
}

double log_slope(const std::vector<double>& z, const std::vector<double>& f) {
  const std::size_t n = z.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(std::abs(z[i]));
    my += f[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(std::abs(z[i])) - mx;
    sxy += dx * (f[i] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

VerificationReport verify_sheet1_positivity(const DiscreteMeasure& lambda, int samples, std::uint64_t seed) {
  VerificationReport r;
  r.name = "sheet1_positivity";
  r.config = {{"samples", samples}, {"seed", seed}, {"range", "+-[1 + 1e-2, 1e2]"}};

  std::mt19937_64 rng(seed);
  const double lo = std::log(1e-2), hi = std::log(99.0);
  double vmin = std::numeric_limits<double>::infinity();
  double cross = 0.0;
  for (int k = 0; k < samples; ++k) {
    const std::uint64_t bits = rng();
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    const double z = ((bits & 1u) ? -1.0 : 1.0) * (1.0 + std::exp(lo + u * (hi - lo)));
    const double v = sheet1_v_green(lambda, z);
    vmin = std::min(vmin, v);
    cross = std::max(cross, std::abs(v - sheet1_v_difference(lambda, z)));
  }
  r.check_gt("S1.positive", "min of v over sheet-1 samples", vmin, 0.0);
  r.check_le("S1.cross_route", "max |v (Green form) - v (difference of P + V across sheets)|", cross, 1e-9);

  const double edge = std::max(std::abs(sheet1_v_green(lambda, 1.0 + 1e-6)),
                               std::abs(sheet1_v_green(lambda, -1.0 - 1e-6)));
  r.check_le("S1.boundary", "|v| at z = +-(1 + 1e-6)", edge, 1e-2);

  const std::vector<double> zs{1e3, 1e4, 1e5, 1e6};
  std::vector<double> vs;
  for (double z : zs) vs.push_back(sheet1_v_green(lambda, z));
  const double slope = log_slope(zs, vs);
  r.check_le("S1.growth", "|slope of v against log z on [1e3, 1e6] - 3| / 3", std::abs(slope - 3.0) / 3.0, 0.05);
  r.values["growth_slope"] = number(slope);
  r.values["v_at_1e6"] = number(vs.back());
  r.values["v_at_1e6_over_3log1e6"] = number(vs.back() / (3.0 * std::log(1e6)));
  return r;
}

VerificationReport verify_asymptotic_charge(const DiscreteMeasure& mu) {
  VerificationReport r;
  r.name = "asymptotic_charge";
  r.config = {{"abscissae", {1e3, 1e4, 1e5, 1e6}}};
  const std::vector<double> zs{1e3, 1e4, 1e5, 1e6};
  for (const auto& [sheet, expected, label] :
       {std::tuple{Sheet::zero, -2.0, "sheet0"}, std::tuple{Sheet::one, -1.0, "sheet1"}}) {
    double worst = 0.0;
    for (double sgn : {1.0, -1.0}) {
      std::vector<double> z, p;
      for (double x : zs) {
        z.push_back(sgn * x);
        p.push_back(rs_potential(mu, RSPoint{cplx(sgn * x, 0.0), sheet}));
      }
      const double s = log_slope(z, p);
      r.values[std::string(label) + (sgn > 0 ? "_slope_pos" : "_slope_neg")] = number(s);
      worst = std::max(worst, std::abs(s - expected));
    }
    r.check_le(std::string("AC.") + label, std::string("|slope of P against log|z| - (") + format_double(expected) +
                                               ")| on " + label,
               worst, 1e-3);
  }
  return r;
}

VerificationReport verify_point_balayage(double a, const GridParams& gp, int threads) {
  VerificationReport r;
  r.name = "point_balayage";
  r.config = {{"a", a}, {"nodes", gp.nodes}, {"grading", gp.grading}};
  const Grid gE = make_grid(unit_interval(), gp.nodes, gp.grading);
  SolverOptions opt;
  opt.threads = threads;
  const auto closed = balayage_point_to_E(a, gE);
  try {
    const auto delta = DiscreteMeasure::point_mass(a);
    const auto num = balayage_numeric(delta, gE, opt);
    r.check_le("BAL.ks", "KS(numeric balayage of delta_a, closed form)", ks_distance(num.measure, closed.measure),
               1e-3);
    const auto nodes = gE.nodes();
    r.check_le("BAL.potential", "max |U^beta - U^delta_a - log|Phi(a)|| on E",
               balayage_potential_defect(num.measure, delta, green_E_at_infinity(a), nodes), 1e-3);
    r.values["shift_constant_numeric"] = number(num.shift_constant);
    r.values["shift_constant_exact"] = number(green_E_at_infinity(a));
  } catch (const std::exception& e) {
    r.fail("BAL.ks", "KS(numeric balayage of delta_a, closed form)", e.what());
    r.fail("BAL.potential", "max |U^beta - U^delta_a - log|Phi(a)|| on E", e.what());
  }
  return r;
}

VerificationReport verify_classical(const GridParams& gp, int threads) {
  VerificationReport r;
  r.name = "classical";
  r.config = {{"nodes", gp.nodes}, {"grading", gp.grading}};
  const Grid gE = make_grid(unit_interval(), gp.nodes, gp.grading);
  SolverOptions opt;
  opt.threads = threads;
  try {
    const auto sol = solve_kernel_equilibrium(gE, log_kernel(), {}, opt);
    r.check_le("CL.ks", "KS(log-kernel equilibrium of E, arcsine law)", ks_distance(sol.measure, chebyshev_measure(gE)),
               3e-3);
    r.check_le("CL.constant", "|equilibrium constant - log 2|", std::abs(sol.constants[0] - std::log(2.0)), 1e-3);
  } catch (const std::exception& e) {
    r.fail("CL.ks", "KS(log-kernel equilibrium of E, arcsine law)", e.what());
    r.fail("CL.constant", "|equilibrium constant - log 2|", e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------

VerificationReport verify_zero_distribution(const MarkovSpec& sigma, const DiscreteMeasure& lambda,
                                            const ZeroDistributionParams& zp,
                                            std::vector<std::pair<HPSolution, ZeroSet>>* outputs) {
  if (!std::is_sorted(zp.n_list.begin(), zp.n_list.end()) ||
      std::adjacent_find(zp.n_list.begin(), zp.n_list.end()) != zp.n_list.end())
    throw std::invalid_argument("n_list must be strictly increasing");
  sigma.validate();
  VerificationReport r;
  r.name = "zero_distribution";
  r.config = {{"sigma", sigma.name}, {"F", intervals_json(sigma.support)}, {"n_list", zp.n_list},
              {"precision_bits", zp.precision_bits}, {"band", zp.band}, {"final_ks_bound", zp.final_ks_bound},
              {"final_ks_n", zp.final_ks_n}};

  const int n_max = zp.n_list.empty() ? 0 : zp.n_list.back();
  try {
    const auto m = moments_f2_checked(3 * n_max + 1, sigma, zp.precision_bits);
    r.check_le("HP.moments_self_convergence", "max_k |b_k(2N) - b_k(N)|", m.self_convergence.convert_to<double>(),
               m.tolerance.convert_to<double>());
  } catch (const std::exception& e) {
    r.fail("HP.moments_self_convergence", "max_k |b_k(2N) - b_k(N)|", e.what());
  }

  auto ks_series = nlohmann::ordered_json::array();
  auto n_series = nlohmann::ordered_json::array();
  auto bits_series = nlohmann::ordered_json::array();
  auto dim_series = nlohmann::ordered_json::array();
  double prev_ks = -1.0;  // negative: no previous order
  for (int n : zp.n_list) {
    const std::string p = "HP.n" + std::to_string(n);
    if (n == 0) {
      r.skip(p + ".zeros", "zeros of Q2", "Q2 is constant for n = 0");
      continue;
    }
    try {
      auto [sol, zs] = solve_hp_with_zeros(n, sigma, zp.precision_bits);
      r.check_le(p + ".residual", "max |Laurent coefficient r_m|, m = 1..2n+1",
                 sol.max_residual.convert_to<double>(), residual_threshold(sol.precision_bits).convert_to<double>());
      r.check_eq(p + ".residual_order", "verified vanishing Laurent coefficients", sol.residual_order, 2 * n + 1);
      auto& deg = r.check_eq(p + ".degree", "deg Q2", sol.degree_q2, n);
      if (sol.degree_q2 != n && sigma.support.hull_left() < -1.0 && sigma.support.hull_right() > 1.0)
        deg.note = "hull of F contains E; KS below uses chi(Q2) / deg Q2";
      r.check_eq(p + ".hull", "zeros of Q2 outside the hull of F", zs.outside_hull, 0);
      const int d = std::max(zs.degree, 1);
      const double ks = ks_distance(zero_counting_measure(zs, d == n ? n : d), lambda);
      n_series.push_back(n);
      ks_series.push_back(number(ks));
      bits_series.push_back(sol.precision_bits);
      dim_series.push_back(sol.nullspace_dimension);
      if (prev_ks >= 0.0)
        r.check_le(p + ".trend", "KS(n) / KS(previous n)", ks / prev_ks, 1.0 + zp.band)
            .note = "non-increasing within the band; an artifact policy, not a proven rate";
      if (n == zp.final_ks_n) {
        auto& c = r.check_le(p + ".ks_final", "KS(chi(Q2)/n, lambda)", ks, zp.final_ks_bound);
        if (d != n) c.note = "zero counting measure normalized by deg Q2 = " + std::to_string(d);
      }
      prev_ks = ks;
      if (outputs) outputs->emplace_back(std::move(sol), std::move(zs));
    } catch (const std::exception& e) {
      r.fail(p + ".solve", "Hermite-Pade polynomials and zeros", e.what());
      prev_ks = -1.0;
    }
  }
  if (std::find(zp.n_list.begin(), zp.n_list.end(), zp.final_ks_n) == zp.n_list.end())
    r.skip("HP.ks_final", "KS(chi(Q2)/n, lambda) at the final order",
           "n = " + std::to_string(zp.final_ks_n) + " not in n_list");
  r.series = {{"n", n_series}, {"ks", ks_series}, {"precision_bits", bits_series}, {"nullspace_dimension", dim_series}};
  return r;
}

// ---------------------------------------------------------------------------

void write_report_json(std::ostream& os, const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["report"] = r.name;
  j["status"] = r.passed() ? "pass" : "fail";
  j["summary"] = {{"pass", r.count(CheckStatus::pass)}, {"fail", r.count(CheckStatus::fail)},
                  {"skipped", r.count(CheckStatus::skipped)}};
  j["config"] = r.config;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json o;
    o["id"] = c.id;
    o["description"] = c.description;
    o["status"] = to_string(c.status);
    o["measured"] = number(c.measured);
    o["relation"] = c.relation;
    o["tolerance"] = number(c.tolerance);
    if (!c.note.empty()) o["note"] = c.note;
    checks.push_back(std::move(o));
  }
  j["checks"] = std::move(checks);
  j["values"] = r.values;
  j["series"] = r.series;
  os << j.dump(2) << '\n';
}

void write_report_markdown(std::ostream& os, const VerificationReport& r) {
  os << "# Report: " << r.name << "\n\n";
  os << "Status: **" << (r.passed() ? "pass" : "fail") << "** (" << r.count(CheckStatus::pass) << " pass, "
     << r.count(CheckStatus::fail) << " fail, " << r.count(CheckStatus::skipped) << " skipped)\n\n";
  os << "| check | status | measured | relation | tolerance | description | note |\n";
  os << "|---|---|---|---|---|---|---|\n";
  auto cell = [](double x) { return std::isfinite(x) ? format_double(x) : std::string("-"); };
  auto text = [](const std::string& t) {
    std::string o;
    for (char ch : t) {
      if (ch == '|') o += '\\';
      o += ch;
    }
    return o;
  };
  for (const auto& c : r.checks)
    os << "| " << text(c.id) << " | " << to_string(c.status) << " | " << cell(c.measured) << " | " << c.relation << " | "
       << cell(c.tolerance) << " | " << text(c.description) << " | " << text(c.note) << " |\n";
  os << "\n## Configuration\n\n```json\n" << r.config.dump(2) << "\n```\n";
}

}  // namespace rseq
