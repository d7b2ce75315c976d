// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance <path-to-rseq-binary> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>
#include <sys/wait.h>

#include "rseq/verify.hpp"

namespace fs = std::filesystem;
using namespace rseq;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what, double measured, double bound) {
    std::ostringstream os;
    os << what << " = " << measured << " (bound " << bound << ")";
    if (!ok) {
      pass = false;
      os << " <-- violated";
    }
    details.push_back(os.str());
  }
  void le(const std::string& what, double measured, double bound) {
    require(std::isfinite(measured) && measured <= bound, what, measured, bound);
  }
  void note(const std::string& s) { details.push_back(s); }
};

int failures = 0;

void criterion(int id, const std::string& title, double time_limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0.0) o.require(secs < time_limit_s, "runtime [s]", secs, time_limit_s);
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << '\n';
  for (const auto& d : o.details) std::cout << "       " << d << '\n';
  std::cout.flush();
  if (!o.pass) ++failures;
}

double measured(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) {
      if (c.status == CheckStatus::skipped) throw std::runtime_error(id + " was skipped: " + c.note);
      if (c.status == CheckStatus::fail && !c.note.empty() && !std::isfinite(c.measured))
        throw std::runtime_error(id + " failed: " + c.note);
      return c.measured;
    }
  throw std::runtime_error("check " + id + " missing from report " + r.name);
}

double random_outside_E(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(1.0 + 1e-9, 10.0);
  std::bernoulli_distribution sign(0.5);
  const double x = mag(rng);
  return sign(rng) ? x : -x;
}

// log(|1 - 1/(phi(z on sheet) phi(t on sheet 1))| / |z - t|^2)
double kernel_on_sheet(double z, Sheet s, double t) {
  const cplx pz = phi_on_sheet({z, s});
  const cplx pt = phi_on_sheet({t, Sheet::one});
  return std::log(std::abs(1.0 - 1.0 / (pz * pt)) / ((z - t) * (z - t)));
}

int run_binary(const std::string& cmd) {
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <rseq binary> <scratch dir>\n";
    return 2;
  }
  const std::string binary = argv[1];
  const fs::path scratch = argv[2];
  std::cout.precision(4);

  const IntervalUnion F23({{2.0, 3.0}});
  const IntervalUnion Fsym({{-3.0, -2.0}, {2.0, 3.0}});
  const GridParams gp{400, 2.0};

  criterion(1, "kernel identity suite", 10.0, [&](Outcome& o) {
    std::mt19937_64 rng(2024);
    double green = 0.0, factor = 0.0, product = 0.0, sheets = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double z = random_outside_E(rng), t = random_outside_E(rng);
      if (z == t) continue;
      green = std::max(green, std::abs(green_E(z, t) - green_E_product_form(z, t)));
      const double a = zhukovskii_inverse(z), b = zhukovskii_inverse(t);
      const double diff = zhukovskii_difference(z, t);
      factor = std::max(factor, std::abs(std::abs(diff * (1.0 - a * b)) / (2.0 * std::abs(a * b)) - std::abs(z - t)) /
                                    std::abs(z - t));
      product = std::max(product, std::abs(kernel_on_sheet(z, Sheet::one, t) - scalar_kernel(z, t)));
    }
    // Potential level: sheet-1 form plus V against the Phi-product kernel plus log|Phi|.
    std::vector<double> weights(200, 1.0 / 200);
    const auto mu = DiscreteMeasure::on_grid(make_grid(F23, 200, 2.0), weights);
    const auto K = scalar_split_kernel();
    for (int i = 0; i < 1000; ++i) {
      const double z = random_outside_E(rng);
      const RSPoint p{z, Sheet::one};
      const double lhs = rs_potential(mu, p) + external_field(p);
      const double rhs = kernel_integral(mu, z, K) + std::log(std::abs(zhukovskii_inverse(z)));
      sheets = std::max(sheets, std::abs(lhs - rhs));
    }
    o.le("max |g_E two forms| over 1e4 pairs", green, 1e-12);
    o.le("max relative error of the z - t factorization", factor, 1e-12);
    o.le("max |sheet-1 kernel - Phi-product kernel| over 1e4 pairs", product, 1e-12);
    o.le("max |P(z on sheet 1) + V - (kernel potential + log|Phi|)| over 1e3 points", sheets, 1e-12);
  });

  criterion(2, "classical arcsine oracle at n = 400", 30.0, [&](Outcome& o) {
    const auto r = verify_classical(gp);
    o.le("KS(equilibrium of [-1,1], arcsine)", measured(r, "CL.ks"), 3e-3);
    o.le("|constant - log 2|", measured(r, "CL.constant"), 1e-3);
  });

  std::optional<EquilibriumSolution> lambda23;
  criterion(3, "scalar problem: equality on all of F and full support", 120.0, [&](Outcome& o) {
    for (const auto* F : {&F23, &Fsym}) {
      const auto s = solve_scalar(*F, gp);
      const auto pts = make_grid(*F, gp.nodes, gp.grading).subdivided(4).nodes();
      const double w = s.constants[0];
      const std::string tag = F->size() == 1 ? "[2,3]" : "[-3,-2]u[2,3]";
      o.require(s.min_density > 0.0, tag + " min density", s.min_density, 0.0);
      o.le(tag + " sup |P + V - w_F| on the 4x test grid", scalar_defect(s.measure, w, pts),
           1e-3 * std::max(1.0, std::abs(w)));
      if (F->size() == 1) lambda23 = s;
    }
  });

  criterion(4, "equivalence of the scalar and vector problems", 300.0, [&](Outcome& o) {
    for (const auto* F : {&F23, &Fsym}) {
      const auto r = verify_theorem1(*F, gp);
      const std::string tag = F->size() == 1 ? "[2,3] " : "[-3,-2]u[2,3] ";
      o.le(tag + "KS(lambda_F, lambda2)", measured(r, "T1.ks_lambda2"), 5e-3);
      o.le(tag + "KS(lambda_F, balayage of lambda1 onto F)", measured(r, "T1.ks_balayage_F"), 5e-3);
      o.le(tag + "KS(lambda1, (balayage of lambda_F onto E + 3 tau)/4)", measured(r, "T1.ks_reconstruction"), 5e-3);
      if (F->size() == 1) o.le(tag + "KS(lambda1 single-interval problem, lambda1 vector problem)",
                               measured(r, "T1.ks_problem6"), 5e-3);
    }
  });

  criterion(5, "balayage of delta_2 onto E", 0.0, [&](Outcome& o) {
    const auto r = verify_point_balayage(2.0, gp);
    o.le("KS(numeric, closed form)", measured(r, "BAL.ks"), 1e-3);
    o.le("sup |U^beta - U^delta - log|Phi(2)|| on E", measured(r, "BAL.potential"), 1e-3);
  });

  if (!lambda23) lambda23 = solve_scalar(F23, gp);
  const DiscreteMeasure& lam = lambda23->measure;

  criterion(6, "positivity of v on sheet 1", 0.0, [&](Outcome& o) {
    const auto r = verify_sheet1_positivity(lam, 1000, 1);
    const double vmin = measured(r, "S1.positive");
    o.require(vmin > 0.0, "min v over 1000 sheet-1 samples", vmin, 0.0);
    o.le("v at z = +-(1 + 1e-6)", measured(r, "S1.boundary"), 1e-2);
    o.le("relative error of the d v / d log|z| = 3 fit up to z = 1e6", measured(r, "S1.growth"), 0.05);
    o.note("v(1e6) = " + std::to_string(sheet1_v_green(lam, 1e6)) + ", 3 log(1e6) = " +
           std::to_string(3.0 * std::log(1e6)));
  });

  criterion(7, "asymptotic charge of P^lambda_F", 0.0, [&](Outcome& o) {
    const auto r = verify_asymptotic_charge(lam);
    o.le("|slope on sheet 0 + 2|", measured(r, "AC.sheet0"), 1e-3);
    o.le("|slope on sheet 1 + 1|", measured(r, "AC.sheet1"), 1e-3);
  });

  std::vector<std::pair<HPSolution, ZeroSet>> hp;
  criterion(8, "zeros of Q_{n,2} for arcsine sigma on [2,3]", 600.0, [&](Outcome& o) {
    ZeroDistributionParams zp;
    zp.n_list = {5, 10, 20, 40};
    zp.precision_bits = 512;
    const auto r = verify_zero_distribution(MarkovSpec::arcsine(F23), lam, zp, &hp);
    double prev = -1.0;
    for (const auto& [sol, zs] : hp) {
      const std::string tag = "n = " + std::to_string(sol.n) + ": ";
      o.require(zs.outside_hull == 0 && static_cast<int>(zs.zeros.size()) == zs.degree,
                tag + "zeros outside [2,3]", zs.outside_hull, 0);
      o.require(sol.degree_q2 == sol.n, tag + "deg Q2", sol.degree_q2, sol.n);
      const double ks = ks_distance(zero_counting_measure(zs, sol.n), lam);
      if (prev >= 0.0) o.le(tag + "KS (non-increasing within 10%)", ks, 1.1 * prev);
      else o.note(tag + "KS = " + std::to_string(ks));
      prev = ks;
    }
    o.le("KS at n = 40", prev, 0.08);
    o.note("report status: " + std::string(r.passed() ? "PASS" : "FAIL"));
  });

  criterion(9, "residual contract of every computed solution", 0.0, [&](Outcome& o) {
    const auto arcsine = MarkovSpec::arcsine(F23);
    const auto constant = MarkovSpec::constant(F23);
    std::vector<std::pair<HPSolution, const MarkovSpec*>> sols;
    for (const auto& s : hp) sols.emplace_back(s.first, &arcsine);
    for (int n : {0, 1, 7, 15}) sols.emplace_back(solve_hp_escalating(n, constant, 512), &constant);
    for (const auto& [sol, sp] : sols) {
      const MarkovSpec& sigma = *sp;
      const auto a = moments_f1(3 * sol.n + 2, sol.precision_bits);
      const auto b = moments_f2(3 * sol.n + 2, sigma, sol.precision_bits);
      const auto r = laurent_residuals(sol, a, b, 2 * sol.n + 1);
      PrecisionScope scope(sol.precision_bits);
      Real worst = 0;
      for (const auto& x : r) worst = max(worst, Real(abs(x)));
      const double log2_worst = worst == 0 ? -1e9 : log2(worst).convert_to<double>();
      o.require(log2_worst <= -static_cast<double>(sol.precision_bits) / 4.0,
                "n = " + std::to_string(sol.n) + " (" + sigma.name + ", " + std::to_string(sol.precision_bits) +
                    " bits): log2 max |r_m| over m = 0..2n",
                log2_worst, -static_cast<double>(sol.precision_bits) / 4.0);
    }
  });

  criterion(10, "verify-all --threads 1 is byte-for-byte reproducible", 0.0, [&](Outcome& o) {
    const fs::path dir = scratch / "determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cmd = binary + " verify-all --config preset:f23-arcsine --threads 1 --out " + dir.string() +
                            " > " + (dir.parent_path() / "determinism.log").string() + " 2>&1";
    const int c1 = run_binary(cmd);
    const std::string json1 = slurp(dir / "report_verify-all.json");
    const std::string md1 = slurp(dir / "report_verify-all.md");
    const int c2 = run_binary(cmd);
    const std::string json2 = slurp(dir / "report_verify-all.json");
    const std::string md2 = slurp(dir / "report_verify-all.md");
    o.require(c1 == 0 && c2 == 0, "exit codes (first, second)", c1 * 10 + c2, 0);
    o.require(!json1.empty() && json1 == json2, "JSON report differs", json1 == json2 ? 0 : 1, 0);
    o.require(!md1.empty() && md1 == md2, "Markdown report differs", md1 == md2 ? 0 : 1, 0);
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << '\n';
  return failures == 0 ? 0 : 1;
}
