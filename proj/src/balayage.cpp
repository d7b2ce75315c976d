#include "rseq/balayage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rseq {

namespace {

void require_covers_E(const Grid& g) {
  const auto& s = g.support();
  if (s.size() != 1 || s[0].left != -1.0 || s[0].right != 1.0)
    throw std::invalid_argument("grid must cover exactly [-1, 1]");
}

bool carried_by(const DiscreteMeasure& mu, const IntervalUnion& target) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& c = mu.cells()[i];
    const bool inside = std::any_of(target.components().begin(), target.components().end(),
                                    [&](const Interval& I) { return I.left <= c.left && c.right <= I.right; });
    if (!inside && mu.weights()[i] > 0.0) return false;
  }
  return true;
}

bool touches(const DiscreteMeasure& mu, const IntervalUnion& target) {
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.weights()[i] == 0.0) continue;
    const auto& c = mu.cells()[i];
    for (const auto& I : target.components())
      if (c.left <= I.right && I.left <= c.right) return true;
  }
  return false;
}

}  // namespace

DiscreteMeasure chebyshev_measure(const Grid& grid_E) {
  require_covers_E(grid_E);
  std::vector<double> w(grid_E.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& c = grid_E.cells()[i];
    w[i] = (std::asin(c.right) - std::asin(c.left)) / std::numbers::pi;
  }
  return DiscreteMeasure::on_grid(grid_E, std::move(w));
}

double point_balayage_density(double a, double x) {
  if (!(std::abs(a) > 1.0)) throw std::invalid_argument("balayage point must satisfy |a| > 1");
  return std::sqrt(a * a - 1.0) / (std::numbers::pi * std::abs(x - a) * std::sqrt((1.0 - x) * (1.0 + x)));
}

double point_balayage_cdf(double a, double x) {
  if (!(std::abs(a) > 1.0)) throw std::invalid_argument("balayage point must satisfy |a| > 1");
  if (a < 0.0) return 1.0 - point_balayage_cdf(-a, -x);
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // x = cos(theta):  (2/pi) atan( sqrt((a-1)(1+x) / ((a+1)(1-x))) )
  return 2.0 / std::numbers::pi *
         std::atan2(std::sqrt((a - 1.0) * (1.0 + x)), std::sqrt((a + 1.0) * (1.0 - x)));
}

BalayageResult balayage_point_to_E(double a, const Grid& grid_E) {
  require_covers_E(grid_E);
  if (!(std::abs(a) > 1.0)) throw std::invalid_argument("balayage point must satisfy |a| > 1");
  std::vector<double> w(grid_E.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto& c = grid_E.cells()[i];
    w[i] = point_balayage_cdf(a, c.right) - point_balayage_cdf(a, c.left);
  }
  BalayageResult r{DiscreteMeasure::on_grid(grid_E, std::move(w)), green_E_at_infinity(a)};
  const auto delta = DiscreteMeasure::point_mass(a);
  const auto nodes = grid_E.nodes();
  r.potential_residual = balayage_potential_defect(r.measure, delta, r.shift_constant, nodes);
  return r;
}

double balayage_potential_defect(const DiscreteMeasure& beta, const DiscreteMeasure& mu, double c,
                                 std::span<const double> points) {
  double sup = 0.0;
  for (double x : points)
    sup = std::max(sup, std::abs(log_potential(beta, x) - log_potential(mu, x) - c));
  return sup;
}

BalayageResult balayage_numeric(const DiscreteMeasure& mu, const Grid& target,
                                const SolverOptions& opt) {
  if (carried_by(mu, target.support())) return {mu, 0.0, 0.0};
  if (touches(mu, target.support()))
    throw std::invalid_argument("balayage source must be disjoint from the target");
  if (!(mu.mass() > 0.0)) throw std::invalid_argument("balayage of the zero measure");

  // minimize 1/2 b'Lb - U'b over the simplex of mass mass(mu):  Lb - U = c
  const Eigen::MatrixXd L = galerkin_matrix(target, target, log_kernel(), opt.threads);
  const Eigen::VectorXd U = cell_averages(target, [&](double x) { return log_potential(mu, x); });
  const SimplexBlock block{0, target.size(), mu.mass()};
  const auto qp = solve_simplex_qp(L, -U, std::span(&block, 1), opt);

  BalayageResult r{DiscreteMeasure::on_grid(target, std::vector<double>(qp.x.data(), qp.x.data() + qp.x.size())),
                   qp.multipliers[0]};
  const auto nodes = target.nodes();
  r.potential_residual = balayage_potential_defect(r.measure, mu, r.shift_constant, nodes);
  return r;
}

DiscreteMeasure reconstruct_lambda1(const DiscreteMeasure& lambda, const Grid& grid_E,
                                    const SolverOptions& opt) {
  const auto beta = balayage_numeric(lambda, grid_E, opt);
  const auto tau = chebyshev_measure(grid_E);
  return (beta.measure + tau.scaled(3.0)).scaled(0.25);
}

}  // namespace rseq
