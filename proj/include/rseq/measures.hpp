#pragma once

// Discrete measures on interval unions and their potentials.
//
// A measure is piecewise constant on cells: cell i carries mass weights[i]
// spread uniformly over [cells[i].left, cells[i].right].  Zero-width cells
// are atoms.  Potentials integrate the log|z - t| part of every kernel
// exactly over cells adjacent to the evaluation point and use two-point
// Gauss-Legendre everywhere else.

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rseq/riemann_kernels.hpp"

namespace rseq {

/// Cells tiling an IntervalUnion, optionally produced by the graded
/// placement rule of make_grid.
class Grid {
 public:
  Grid(IntervalUnion support, std::vector<Interval> cells, int n_per_component, double grading);

  const IntervalUnion& support() const { return support_; }
  const std::vector<Interval>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  std::vector<double> nodes() const;
  int n_per_component() const { return n_per_component_; }
  double grading() const { return grading_; }

  /// Each cell split into `factor` equal sub-cells.
  Grid subdivided(int factor) const;

 private:
  IntervalUnion support_;
  std::vector<Interval> cells_;
  int n_per_component_;
  double grading_;
};

/// n cells per component, midpoints as nodes.  The cell edges are the image
/// of a uniform partition under a map that is symmetric about each
/// component's midpoint and behaves like |s|^grading near both endpoints.
Grid make_grid(const IntervalUnion& support, int n_per_component, double grading);

class DiscreteMeasure {
 public:
  static DiscreteMeasure on_grid(const Grid& grid, std::vector<double> weights);
  static DiscreteMeasure from_cells(IntervalUnion support, std::vector<Interval> cells,
                                    std::vector<double> weights);
  /// Point masses; coincident points are merged.
  static DiscreteMeasure atoms(std::vector<double> points, std::vector<double> weights);
  static DiscreteMeasure point_mass(double at, double mass = 1.0);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Interval>& cells() const { return cells_; }
  std::size_t size() const { return nodes_.size(); }
  double mass() const { return mass_; }
  bool atomic() const { return !support_.has_value(); }
  /// Throws std::logic_error for atomic measures.
  const IntervalUnion& support() const;

  /// weight / width of cell i (infinite for atoms).
  double density(std::size_t i) const;
  double min_density() const;
  /// mu((-inf, x]) with each cell's mass placed at its node.
  double cdf(double x) const;

  DiscreteMeasure scaled(double factor) const;
  /// Image under x -> -x.
  DiscreteMeasure mirrored() const;
  /// Sum of two measures on identical cells, or of two atomic measures.
  friend DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b);

 private:
  DiscreteMeasure() = default;
  void validate() const;

  std::optional<IntervalUnion> support_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<Interval> cells_;
  double mass_ = 0.0;
};

/// K(s, t) = log_coeff * log|s - t| + smooth(s, t).
struct SplitKernel {
  double log_coeff = 0.0;
  std::function<double(double, double)> smooth;  // empty means zero
};

SplitKernel log_kernel();           // log(1/|s - t|)
SplitKernel scalar_split_kernel();  // scalar_kernel
SplitKernel green_E_split_kernel(); // green_E
SplitKernel interval_green_split_kernel(const IntervalGreen& g);

/// Average of log|x - t| over t in the cell (exact).
double cell_log_average(const Interval& cell, double x);
double cell_log_average(const Interval& cell, cplx z);
/// Average of log|s - t| over the product of two cells (exact).
double cell_pair_log_average(const Interval& a, const Interval& b);

/// Integral of K(z, t) d mu(t) for real z.
double kernel_integral(const DiscreteMeasure& mu, double z, const SplitKernel& kernel);

/// Galerkin matrix: cell-pair averages of the kernel.
Eigen::MatrixXd galerkin_matrix(const Grid& rows, const Grid& cols, const SplitKernel& kernel,
                                int threads = 1);

/// Two-point Gauss averages of f over every cell.
Eigen::VectorXd cell_averages(const Grid& grid, const std::function<double(double)>& f);

/// U^mu(z) = integral of log(1/|z - t|) d mu(t).
double log_potential(const DiscreteMeasure& mu, cplx z);

/// P^mu on the surface for mu lifted to the first sheet over F.
double rs_potential(const DiscreteMeasure& mu, const RSPoint& p);

/// Integral of g_E(z, t) d mu(t), z real outside E.
double green_potential_E(const DiscreteMeasure& mu, double z);

/// Green potential for the complement of a single interval.
double green_potential_interval(const DiscreteMeasure& mu, const IntervalGreen& g, double z);

/// Sup over the merged node set of |CDF_a - CDF_b|.  Both measures must
/// have unit mass to within kUnitMassTolerance.
double ks_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);
inline constexpr double kUnitMassTolerance = 1e-8;

/// Max |w_i - w'_i| between mu and its mirror image, for measures on
/// symmetric cells.
double symmetry_defect(const DiscreteMeasure& mu);

// CSV with header node,weight,cell_left,cell_right.
void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu);
void write_measure_csv(const std::string& path, const DiscreteMeasure& mu);
DiscreteMeasure read_measure_csv(std::istream& is);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

}  // namespace rseq
