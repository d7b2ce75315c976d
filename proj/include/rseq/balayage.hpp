#pragma once

// Balayage (sweeping) of measures onto E = [-1, 1] and onto F.

#include <span>

#include "rseq/equilibrium.hpp"
#include "rseq/measures.hpp"

namespace rseq {

struct BalayageResult {
  DiscreteMeasure measure;
  /// c in U^beta = U^mu + c on the target
  double shift_constant = 0.0;
  /// max over target nodes of |U^beta - U^mu - c|
  double potential_residual = 0.0;
};

/// Cell masses of dx / (pi sqrt(1 - x^2)) on a grid covering [-1, 1].
DiscreteMeasure chebyshev_measure(const Grid& grid_E);

/// Density and distribution function of the balayage of delta_a onto E,
/// |a| > 1.
double point_balayage_density(double a, double x);
double point_balayage_cdf(double a, double x);

/// Closed-form balayage of delta_a onto E, integrated cell by cell.
BalayageResult balayage_point_to_E(double a, const Grid& grid_E);

/// Solves U^beta = U^mu + c on the target cells with mass(beta) = mass(mu).
/// A measure already carried by the target is returned unchanged (c = 0).
BalayageResult balayage_numeric(const DiscreteMeasure& mu, const Grid& target,
                                const SolverOptions& opt = {});

/// (balayage of lambda onto E + 3 tau_E) / 4.
DiscreteMeasure reconstruct_lambda1(const DiscreteMeasure& lambda, const Grid& grid_E,
                                    const SolverOptions& opt = {});

/// max over points of |U^beta - U^mu - c|.
double balayage_potential_defect(const DiscreteMeasure& beta, const DiscreteMeasure& mu, double c,
                                 std::span<const double> points);

}  // namespace rseq
