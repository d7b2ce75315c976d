#include "rseq/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rseq {

const IntervalUnion& unit_interval() {
  static const IntervalUnion E({{-1.0, 1.0}});
  return E;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v, double mass) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += u[k];
    const double t = (cumsum - mass) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

namespace {

double objective(const Eigen::VectorXd& b, const Eigen::VectorXd& x, const Eigen::VectorXd& Ax) {
  return 0.5 * x.dot(Ax) + b.dot(x);
}

Eigen::VectorXd project_blocks(const Eigen::VectorXd& v, std::span<const SimplexBlock> blocks) {
  Eigen::VectorXd out(v.size());
  for (const auto& B : blocks)
    out.segment(B.offset, B.size) = project_to_simplex(v.segment(B.offset, B.size), B.mass);
  return out;
}

// Removes each block's mean; differences of feasible points are blind to it, and it dominates rounding.
Eigen::VectorXd center_blocks(Eigen::VectorXd v, std::span<const SimplexBlock> blocks) {
  for (const auto& B : blocks) v.segment(B.offset, B.size).array() -= v.segment(B.offset, B.size).mean();
  return v;
}

std::vector<double> block_multipliers(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                      std::span<const SimplexBlock> blocks) {
  std::vector<double> c;
  for (const auto& B : blocks) c.push_back(x.segment(B.offset, B.size).dot(g.segment(B.offset, B.size)) / B.mass);
  return c;
}

// Monotone accelerated projected gradient with gradient-based momentum restart.
SimplexQPResult projected_gradient(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   std::span<const SimplexBlock> blocks, const SolverOptions& opt,
                                   Eigen::VectorXd x) {
  SimplexQPResult res;
  res.used_fallback = true;
  x = project_blocks(x, blocks);
  Eigen::VectorXd Ax = A * x;
  double f = objective(b, x, Ax);
  Eigen::VectorXd x_prev = x, Ax_prev = Ax, z = x, Az = Ax;
  double t = 1.0, t_prev = 1.0;
  double step = 1.0;
  double kkt = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    kkt = (x - project_blocks(x - (Ax + b), blocks)).cwiseAbs().maxCoeff();
    if (kkt <= opt.tolerance) break;

    const Eigen::VectorXd y = x + (t_prev / t) * (z - x) + ((t_prev - 1.0) / t) * (x - x_prev);
    const Eigen::VectorXd Ay = Ax + (t_prev / t) * (Az - Ax) + ((t_prev - 1.0) / t) * (Ax - Ax_prev);
    const Eigen::VectorXd g = Ay + b;
    step = std::min(1.0, 2.0 * step);
    // Decrease tests use exact quadratic differences so they stay meaningful near the optimum.
    for (;;) {
      z = project_blocks(y - step * g, blocks);
      const Eigen::VectorXd d = z - y;
      Az = A * z;
      if (step * d.dot(Az - Ay) <= d.squaredNorm() || step < 1e-300) break;
      step *= 0.5;
    }
    const bool restart = center_blocks(g, blocks).dot(z - x) > 0.0;
    x_prev = x;
    Ax_prev = Ax;
    const Eigen::VectorXd dx = z - x;
    const double df = dx.dot(center_blocks(b + 0.5 * (Ax + Az), blocks));
    if (df <= 0.0) {
      x = z;
      Ax = Az;
      f += df;
    }
    if (restart) {
      t_prev = t = 1.0;
      x_prev = x;
      Ax_prev = Ax;
      z = x;
      Az = Ax;
    } else {
      t_prev = t;
      t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    }
    res.objective_history.push_back(f);
  }
  if (kkt > opt.tolerance) {
    std::ostringstream os;
    os << "projected gradient did not converge in " << opt.max_iterations
       << " iterations (KKT residual " << kkt << ")";
    throw SolverError(os.str(), kkt);
  }
  res.iterations = it;
  res.kkt_residual = kkt;
  res.x = std::move(x);
  res.objective = objective(b, res.x, Ax);
  res.multipliers = block_multipliers(res.x, Ax + b, blocks);
  return res;
}

}  // namespace

SimplexQPResult solve_simplex_qp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                 std::span<const SimplexBlock> blocks, const SolverOptions& opt) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = static_cast<Eigen::Index>(blocks.size());
  Eigen::VectorXd start;
  if (opt.initial) {
    start = *opt.initial;
  } else {
    start.resize(n);
    for (const auto& B : blocks) start.segment(B.offset, B.size).setConstant(B.mass / B.size);
  }
  if (opt.force_fallback) return projected_gradient(A, b, blocks, opt, start);

  // [A  -C][x]   [-b]
  // [C'  0][c] = [ m]
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n + m, n + m);
  Eigen::VectorXd rhs(n + m);
  S.topLeftCorner(n, n) = A;
  rhs.head(n) = -b;
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& B = blocks[k];
    S.block(B.offset, n + k, B.size, 1).setConstant(-1.0);
    S.block(n + k, B.offset, 1, B.size).setConstant(1.0);
    rhs(n + k) = B.mass;
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "singular saddle matrix (rcond " << rcond << "); grid too coarse or degenerate";
    throw SolverError(os.str(), std::numeric_limits<double>::infinity());
  }
  const Eigen::VectorXd sol = lu.solve(rhs);
  const Eigen::VectorXd x = sol.head(n);
  if (!x.allFinite()) throw SolverError("saddle solve produced non-finite values", std::numeric_limits<double>::infinity());
  if (x.minCoeff() < 0.0) return projected_gradient(A, b, blocks, opt, x);

  SimplexQPResult res;
  res.x = x;
  const Eigen::VectorXd Ax = A * x;
  const Eigen::VectorXd g = Ax + b;
  for (Eigen::Index k = 0; k < m; ++k) res.multipliers.push_back(sol(n + k));
  double kkt = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& B = blocks[k];
    kkt = std::max(kkt, (g.segment(B.offset, B.size).array() - res.multipliers[k]).abs().maxCoeff());
  }
  res.kkt_residual = kkt;
  res.objective = objective(b, x, Ax);
  return res;
}

// ---------------------------------------------------------------------------

double equilibrium_defect(const DiscreteMeasure& mu, const SplitKernel& kernel, const Field& field,
                          double constant, std::span<const double> points) {
  double sup = 0.0;
  for (double x : points) {
    const double v = kernel_integral(mu, x, kernel) + (field ? field(x) : 0.0) - constant;
    sup = std::max(sup, std::abs(v));
  }
  return sup;
}

namespace {

EquilibriumSolution finish(const Grid& grid, const SimplexQPResult& qp, std::size_t offset,
                           std::size_t block) {
  EquilibriumSolution sol{DiscreteMeasure::on_grid(
      grid, std::vector<double>(qp.x.data() + offset, qp.x.data() + offset + grid.size())), {}};
  sol.constants = {qp.multipliers[block]};
  sol.used_fallback = qp.used_fallback;
  sol.iterations = qp.iterations;
  sol.kkt_residual = qp.kkt_residual;
  sol.energy = 2.0 * qp.objective;
  sol.min_density = sol.measure.min_density();
  return sol;
}

}  // namespace

EquilibriumSolution solve_kernel_equilibrium(const Grid& grid, const SplitKernel& kernel,
                                             const Field& field, const SolverOptions& opt) {
  const Eigen::MatrixXd K = galerkin_matrix(grid, grid, kernel, opt.threads);
  const Eigen::VectorXd f =
      field ? cell_averages(grid, field) : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  const SimplexBlock block{0, grid.size(), 1.0};
  const auto qp = solve_simplex_qp(K, f, std::span(&block, 1), opt);
  auto sol = finish(grid, qp, 0, 0);
  const auto nodes = grid.nodes();
  sol.residual_sup = equilibrium_defect(sol.measure, kernel, field, sol.constants[0], nodes);
  return sol;
}

EquilibriumSolution solve_scalar(const IntervalUnion& F, const GridParams& gp,
                                 const SolverOptions& opt) {
  require_disjoint_from_E(F);
  const Grid grid = make_grid(F, gp.nodes, gp.grading);
  return solve_kernel_equilibrium(grid, scalar_split_kernel(),
                                  [](double x) { return green_E_at_infinity(x); }, opt);
}

double scalar_defect(const DiscreteMeasure& lambda, double w_F, std::span<const double> points) {
  double sup = 0.0;
  for (double x : points) {
    const RSPoint p{cplx(x, 0.0), Sheet::one};
    sup = std::max(sup, std::abs(rs_potential(lambda, p) + external_field(p) - w_F));
  }
  return sup;
}

VectorSolution solve_vector(const IntervalUnion& F, const GridParams& gp, const SolverOptions& opt) {
  require_disjoint_from_E(F);
  const Grid gE = make_grid(unit_interval(), gp.nodes, gp.grading);
  const Grid gF = make_grid(F, gp.nodes, gp.grading);
  const auto L = log_kernel();
  const Eigen::Index nE = static_cast<Eigen::Index>(gE.size());
  const Eigen::Index nF = static_cast<Eigen::Index>(gF.size());
  const Eigen::MatrixXd LEF = galerkin_matrix(gE, gF, L, opt.threads);
  Eigen::MatrixXd A(nE + nF, nE + nF);
  A.topLeftCorner(nE, nE) = 4.0 * galerkin_matrix(gE, gE, L, opt.threads);
  A.topRightCorner(nE, nF) = -LEF;
  A.bottomLeftCorner(nF, nE) = -LEF.transpose();
  A.bottomRightCorner(nF, nF) = galerkin_matrix(gF, gF, L, opt.threads);
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(nE + nF);
  const SimplexBlock blocks[2] = {{0, gE.size(), 1.0}, {gE.size(), gF.size(), 1.0}};
  const auto qp = solve_simplex_qp(A, b, blocks, opt);

  VectorSolution out{finish(gE, qp, 0, 0), finish(gF, qp, gE.size(), 1), 2.0 * qp.objective};
  const auto& l1 = out.lambda1.measure;
  const auto& l2 = out.lambda2.measure;
  double r1 = 0.0, r2 = 0.0;
  for (double x : gE.nodes())
    r1 = std::max(r1, std::abs(4.0 * log_potential(l1, x) - log_potential(l2, x) - out.lambda1.constants[0]));
  for (double t : gF.nodes())
    r2 = std::max(r2, std::abs(-log_potential(l1, t) + log_potential(l2, t) - out.lambda2.constants[0]));
  out.lambda1.residual_sup = r1;
  out.lambda2.residual_sup = r2;
  return out;
}

EquilibriumSolution solve_problem6_single_interval(const IntervalUnion& F, const GridParams& gp,
                                                   const SolverOptions& opt) {
  if (F.size() != 1)
    throw std::invalid_argument("problem (6) is implemented for a single interval F only; use solve_vector");
  require_disjoint_from_E(F);
  const IntervalGreen gF(F[0]);
  // 3 log(1/|x - y|) + g_F(x, y) = -4 log|x - y| + (g_F + log|x - y|)
  const SplitKernel kernel{-4.0, [gF](double x, double y) { return gF.smooth(x, y); }};
  const Grid gE = make_grid(unit_interval(), gp.nodes, gp.grading);
  return solve_kernel_equilibrium(gE, kernel, {}, opt);
}

}  // namespace rseq
