#pragma once

// Equilibrium measures as minimizers of discretized quadratic energies over
// (products of) simplices.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rseq/measures.hpp"

namespace rseq {

struct GridParams {
  int nodes = 400;       // cells per component
  double grading = 2.0;  // endpoint clustering exponent, in [1, 2]
};

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 100000;
  /// Skip the saddle system and run projected gradient directly.
  bool force_fallback = false;
  /// Starting point for projected gradient (uniform when empty).
  std::optional<Eigen::VectorXd> initial;
  int threads = 1;
};

/// Raised for a singular saddle system or a fallback that does not reach
/// the tolerance.  `residual` is the last KKT residual measured.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// x[offset, offset + size) >= 0 with sum equal to mass.
struct SimplexBlock {
  std::size_t offset = 0;
  std::size_t size = 0;
  double mass = 1.0;
};

struct SimplexQPResult {
  Eigen::VectorXd x;
  std::vector<double> multipliers;  // one per block: (Ax + b)_i on the support
  bool used_fallback = false;
  int iterations = 0;
  double kkt_residual = 0.0;
  double objective = 0.0;                 // 1/2 x'Ax + b'x
  std::vector<double> objective_history;  // per projected-gradient iteration
};

/// Minimize 1/2 x'Ax + b'x over a product of simplices.  The primary path
/// solves the equality-constrained KKT system; if that produces a negative
/// entry, projected gradient with backtracking takes over.
SimplexQPResult solve_simplex_qp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 std::span<const SimplexBlock> blocks, const SolverOptions& opt);

/// Euclidean projection onto {x >= 0, sum x = mass}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double mass);

struct EquilibriumSolution {
  DiscreteMeasure measure;
  std::vector<double> constants;
  /// max over support nodes of |potential + field - constant|, pointwise
  double residual_sup = 0.0;
  double min_density = 0.0;
  bool used_fallback = false;
  int iterations = 0;
  double kkt_residual = 0.0;
  double energy = 0.0;  // w'Kw + 2 f'w
};

using Field = std::function<double(double)>;

/// Unit measure on the grid minimizing w'Kw + 2 f'w, where K and f are the
/// cell averages of `kernel` and `field` (field may be empty).
EquilibriumSolution solve_kernel_equilibrium(const Grid& grid, const SplitKernel& kernel,
                                             const Field& field, const SolverOptions& opt = {});

/// Max over `points` of |integral K(x, t) d mu(t) + field(x) - constant|.
double equilibrium_defect(const DiscreteMeasure& mu, const SplitKernel& kernel, const Field& field,
                          double constant, std::span<const double> points);

/// The scalar problem on the first sheet over F: kernel scalar_kernel and
/// field log|Phi|.
EquilibriumSolution solve_scalar(const IntervalUnion& F, const GridParams& gp,
                                 const SolverOptions& opt = {});

/// Max over `points` of |P^lambda(x^(1)) + V(x^(1)) - w_F| using rs_potential.
double scalar_defect(const DiscreteMeasure& lambda, double w_F, std::span<const double> points);

struct VectorSolution {
  EquilibriumSolution lambda1;  // on E, constant w1
  EquilibriumSolution lambda2;  // on F, constant w2
  double energy = 0.0;
};

/// The Nikishin problem with interaction matrix (4 -1; -1 1).
VectorSolution solve_vector(const IntervalUnion& F, const GridParams& gp,
                            const SolverOptions& opt = {});

/// 3 U^lambda1 + G_F^lambda1 = const on E, for F a single interval.
EquilibriumSolution solve_problem6_single_interval(const IntervalUnion& F, const GridParams& gp,
                                                   const SolverOptions& opt = {});

const IntervalUnion& unit_interval();

}  // namespace rseq
