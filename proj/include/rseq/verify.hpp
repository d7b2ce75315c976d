#pragma once

// Numerical experiments reproducing the equivalence, positivity and
// zero-distribution statements, collected as structured reports.

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rseq/balayage.hpp"
#include "rseq/equilibrium.hpp"
#include "rseq/hermite_pade.hpp"

namespace rseq {

enum class CheckStatus { pass, fail, skipped };
std::string to_string(CheckStatus s);

struct Check {
  std::string id;
  std::string description;
  double measured = 0.0;
  double tolerance = 0.0;
  /// "<=", ">=", ">" or "==": how measured is compared with tolerance
  std::string relation = "<=";
  CheckStatus status = CheckStatus::skipped;
  std::string note;
};

struct VerificationReport {
  std::string name;
  nlohmann::ordered_json config;
  std::vector<Check> checks;
  /// Named scalar results (constants, energies) for reference.
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  /// Named sequences (e.g. KS against n).
  nlohmann::ordered_json series = nlohmann::ordered_json::object();

  Check& check_le(std::string id, std::string description, double measured, double tolerance);
  Check& check_ge(std::string id, std::string description, double measured, double bound);
  Check& check_gt(std::string id, std::string description, double measured, double bound);
  Check& check_eq(std::string id, std::string description, double measured, double expected);
  Check& skip(std::string id, std::string description, std::string reason);
  Check& fail(std::string id, std::string description, std::string reason);

  bool passed() const;  // no failed checks
  std::size_t count(CheckStatus s) const;
  void merge(const VerificationReport& other);
};

/// Tolerance policy: KS checks default to 5e-3 at 400 cells and scale with
/// 400 / cells; every tolerance is multiplied by `scale`.
struct Tolerances {
  double scale = 1.0;
  double ks(int cells) const { return 5e-3 * (400.0 / cells) * scale; }
  double residual(double w) const;  // 1e-3 max(1, |w|) scale
  double constancy() const { return 1e-2 * scale; }
};

struct Theorem1Outputs {
  std::optional<EquilibriumSolution> scalar;
  std::optional<VectorSolution> vector;
  std::optional<EquilibriumSolution> problem6;
  std::optional<DiscreteMeasure> beta_F_lambda1;
  std::optional<DiscreteMeasure> lambda1_reconstructed;
};

/// Scalar and vector solves with the equivalence checks.  Invalid F throws
/// before any report is produced.
VerificationReport verify_theorem1(const IntervalUnion& F, const GridParams& gp,
                                   const Tolerances& tol = {}, int threads = 1,
                                   Theorem1Outputs* outputs = nullptr);

/// v2 = 3 U^lambda + G_E^lambda + 3 g_E(., inf) on F and the Green-logarithmic
/// potential of lambda1 on E.  `lambda1` and `w_E` are only used for single
/// interval F.
VerificationReport verify_v2_constancy(const IntervalUnion& F, const DiscreteMeasure& lambda,
                                       const DiscreteMeasure& lambda1, std::optional<double> w_E,
                                       const Tolerances& tol = {});

/// v on the first sheet at real sample points.
double sheet1_v_green(const DiscreteMeasure& lambda, double z);
/// The same function as the difference of P + V across the two sheets.
double sheet1_v_difference(const DiscreteMeasure& lambda, double z);

VerificationReport verify_sheet1_positivity(const DiscreteMeasure& lambda, int samples,
                                            std::uint64_t seed = 1);

/// Least-squares slope of f(z) against log z at the given abscissae.
double log_slope(const std::vector<double>& z, const std::vector<double>& f);

/// Slopes of P^mu against log|z| on both sheets.
VerificationReport verify_asymptotic_charge(const DiscreteMeasure& mu);

/// Numeric balayage of delta_a onto E against the closed form.
VerificationReport verify_point_balayage(double a, const GridParams& gp, int threads = 1);

/// Log-kernel equilibrium of [-1, 1] against the arcsine law and log 2.
VerificationReport verify_classical(const GridParams& gp, int threads = 1);

struct ZeroDistributionParams {
  std::vector<int> n_list{5, 10, 20, 40};
  unsigned precision_bits = kDefaultPrecisionBits;
  double final_ks_bound = 0.08;
  int final_ks_n = 40;
  double band = 0.10;
};

/// Hermite-Pade zeros against lambda (the scalar solution).
VerificationReport verify_zero_distribution(const MarkovSpec& sigma, const DiscreteMeasure& lambda,
                                            const ZeroDistributionParams& zp,
                                            std::vector<std::pair<HPSolution, ZeroSet>>* outputs = nullptr);

void write_report_json(std::ostream& os, const VerificationReport& r);
void write_report_markdown(std::ostream& os, const VerificationReport& r);

}  // namespace rseq
