#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rseq/balayage.hpp"

using namespace rseq;

namespace {

const IntervalUnion F23({{2.0, 3.0}});
const IntervalUnion Fsym({{-3.0, -2.0}, {2.0, 3.0}});

// CDF of the balayage of delta_a by quadrature of the density in theta = arccos x.
double cdf_by_quadrature(double a, double x) {
  const oracle::ld s = std::sqrt(static_cast<oracle::ld>(a) * a - 1);
  const auto g = [&](oracle::ld th) { return s / std::fabs(std::cos(th) - a); };
  return static_cast<double>(oracle::simpson(g, std::acos(static_cast<oracle::ld>(x)), std::numbers::pi_v<oracle::ld>, 4000) /
                             std::numbers::pi_v<oracle::ld>);
}

}  // namespace

TEST_CASE("chebyshev_measure") {
  const Grid g = make_grid(unit_interval(), 400, 2.0);
  const auto tau = chebyshev_measure(g);
  CHECK(tau.mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tau.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  const double h = g.cells()[0].width();
  const double expansion = 2.0 / std::numbers::pi * std::sqrt(h / 2.0);
  CHECK(std::abs(tau.weights()[0] - expansion) / expansion <= h);
  CHECK(symmetry_defect(tau) < 1e-15);
  CHECK_THROWS_AS(chebyshev_measure(make_grid(F23, 10, 1.0)), std::invalid_argument);
}

TEST_CASE("closed-form balayage of a point mass") {
  CHECK(point_balayage_density(2.0, 0.0) == doctest::Approx(std::sqrt(3.0) / (2.0 * std::numbers::pi)).epsilon(1e-14));
  CHECK(point_balayage_density(2.0, 0.0) == doctest::Approx(0.27566).epsilon(2e-5));
  for (double a : {1.01, 2.0, 7.0, -3.0})
    for (double x : {-0.999, -0.6, 0.0, 0.4, 0.97})
      CHECK(point_balayage_cdf(a, x) == doctest::Approx(cdf_by_quadrature(a, x)).epsilon(1e-9));
  CHECK_THROWS_AS(point_balayage_density(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(balayage_point_to_E(1.0, make_grid(unit_interval(), 10, 1.0)), std::invalid_argument);

  // a -> infinity: the density tends to the arcsine density.
  for (double x : {-0.5, 0.0, 0.8})
    CHECK(point_balayage_density(1e8, x) ==
          doctest::Approx(1.0 / (std::numbers::pi * std::sqrt(1.0 - x * x))).epsilon(1e-7));
}

TEST_CASE("closed-form balayage: mass and potential identity") {
  const auto r = balayage_point_to_E(2.0, make_grid(unit_interval(), 1000, 2.0));
  CHECK(std::abs(r.measure.mass() - 1.0) <= 1e-8);
  CHECK(r.shift_constant == doctest::Approx(std::log(2.0 + std::sqrt(3.0))).epsilon(1e-14));
  // U^beta(x) + log|x - a| = log|Phi(a)| on E.
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = -0.995 + 1.99 * i / 200.0;
    worst = std::max(worst, std::abs(log_potential(r.measure, x) + std::log(std::abs(x - 2.0)) - r.shift_constant));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("numeric balayage of a point mass matches the closed form") {
  const Grid g = make_grid(unit_interval(), 400, 2.0);
  for (double a : {2.0, -1.5}) {
    const auto num = balayage_numeric(DiscreteMeasure::point_mass(a), g);
    const auto exact = balayage_point_to_E(a, g);
    CHECK(ks_distance(num.measure, exact.measure) <= 1e-3);
    CHECK(std::abs(num.shift_constant - std::log(std::abs(zhukovskii_inverse(a)))) <= 1e-3);
    CHECK(num.potential_residual <= 1e-3);
    CHECK(num.measure.mass() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("numeric balayage satisfies the discrete potential identity") {
  const Grid g = make_grid(unit_interval(), 200, 2.0);
  const auto mu = DiscreteMeasure::point_mass(2.5);
  const auto r = balayage_numeric(mu, g);
  const Eigen::MatrixXd L = galerkin_matrix(g, g, log_kernel());
  const Eigen::VectorXd U = cell_averages(g, [&](double x) { return log_potential(mu, x); });
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(r.measure.weights().data(), r.measure.size());
  const Eigen::VectorXd defect = L * w - U - Eigen::VectorXd::Constant(w.size(), r.shift_constant);
  CHECK(defect.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("balayage fixes measures already on the target") {
  const Grid g = make_grid(unit_interval(), 50, 2.0);
  const auto tau = chebyshev_measure(g);
  const auto r = balayage_numeric(tau, g);
  CHECK(r.shift_constant == 0.0);
  CHECK(r.measure.weights() == tau.weights());
}

TEST_CASE("balayage is linear and idempotent") {
  const Grid g = make_grid(unit_interval(), 200, 2.0);
  const auto m1 = DiscreteMeasure::point_mass(2.0, 0.5);
  const auto m2 = DiscreteMeasure::point_mass(3.0, 0.5);
  const auto both = balayage_numeric(m1 + m2, g).measure;
  const auto sum = balayage_numeric(m1, g).measure + balayage_numeric(m2, g).measure;
  CHECK(ks_distance(both, sum) <= 1e-8);
  const auto twice = balayage_numeric(both, g).measure;
  CHECK(ks_distance(both, twice) <= 1e-8);
}

TEST_CASE("balayage preconditions") {
  const Grid g = make_grid(unit_interval(), 50, 2.0);
  const auto straddle = DiscreteMeasure::atoms({0.5, 2.0}, {0.5, 0.5});
  CHECK_THROWS_AS(balayage_numeric(straddle, g), std::invalid_argument);
}

TEST_CASE("mass preservation onto E and onto F") {
  const auto v = solve_vector(F23, {200, 2.0});
  const Grid gE = make_grid(unit_interval(), 200, 2.0);
  const Grid gF = make_grid(F23, 200, 2.0);
  const auto onto_F = balayage_numeric(v.lambda1.measure, gF);
  const auto onto_E = balayage_numeric(v.lambda2.measure, gE);
  CHECK(onto_F.measure.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(onto_E.measure.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::isfinite(onto_F.shift_constant));
  CHECK(std::isfinite(onto_E.shift_constant));
  // lambda2 is the balayage of lambda1 onto F.
  CHECK(ks_distance(onto_F.measure, v.lambda2.measure) <= 5e-3);
}

TEST_CASE("sweeping lambda1 onto F: U^lambda2 - U^lambda1 + G_F^lambda1 is constant on E") {
  const auto v = solve_vector(F23, {400, 2.0});
  const IntervalGreen gF(F23[0]);
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= 100; ++i) {
    const double x = -0.99 + 1.98 * i / 100.0;
    const double val = log_potential(v.lambda2.measure, x) - log_potential(v.lambda1.measure, x) +
                       green_potential_interval(v.lambda1.measure, gF, x);
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  CHECK(hi - lo <= 1e-2);
}

TEST_CASE("reconstruct_lambda1") {
  const GridParams gp{400, 2.0};
  const auto lam = solve_scalar(F23, gp);
  const auto vec = solve_vector(F23, gp);
  const Grid gE = make_grid(unit_interval(), gp.nodes, gp.grading);
  const auto rec = reconstruct_lambda1(lam.measure, gE);
  CHECK(rec.mass() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ks_distance(rec, vec.lambda1.measure) <= 5e-3);

  const auto lam_sym = solve_scalar(Fsym, {200, 2.0});
  const auto rec_sym = reconstruct_lambda1(lam_sym.measure, make_grid(unit_interval(), 200, 2.0));
  CHECK(symmetry_defect(rec_sym) <= 1e-10);
}
