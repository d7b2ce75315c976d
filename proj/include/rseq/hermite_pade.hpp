#pragma once

// Type-I Hermite-Pade polynomials for the Nikishin pair (f1, f2) in
// multiple precision.
//
//   f1(z) = (1/pi) int_E dx / ((z - x) sqrt(1 - x^2))
//   f2(z) = (1/pi) int_E h(x) dx / ((z - x) sqrt(1 - x^2)),  h = Cauchy transform of sigma on F
//
// Q0 + Q1 f1 + Q2 f2 = O(z^-(2n+2)),  deg Qj <= n.
//
// Working precision is process-global in Boost.Multiprecision's mpfr
// backend, so the functions here are not safe to call concurrently.

#include <boost/multiprecision/mpfr.hpp>

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rseq/measures.hpp"
#include "rseq/riemann_kernels.hpp"

namespace rseq {

using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 512;
inline constexpr unsigned kMaxPrecisionBits = 4096;

/// Sets the default mpfr precision for new values; restores it on exit.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

/// Working precision too low for the requested computation.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, unsigned bits)
      : std::runtime_error(what), bits_(bits) {}
  unsigned bits() const { return bits_; }

 private:
  unsigned bits_;
};

/// Successive quadrature orders disagree beyond tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The measure sigma on F.
///
///  chebyshev:   d sigma = density(t) dt / (pi sqrt((t - c)(d - t))) on each [c, d]
///  legendre:    d sigma = density(t) dt
///  point_mass:  unit atom at `atom` (a degenerate surrogate used as an oracle)
struct MarkovSpec {
  enum class Weight { chebyshev, legendre, point_mass };

  IntervalUnion support;
  Weight weight = Weight::chebyshev;
  /// Must be strictly positive on F; evaluated in working precision.
  std::function<Real(const Real&)> density;
  double atom = 0.0;
  /// Nodes per component; 0 chooses from precision and geometry.
  int quadrature_order = 0;
  std::string name;

  /// Unit arcsine measure on each component, scaled by 1/m.
  static MarkovSpec arcsine(const IntervalUnion& F);
  /// Uniform unit-mass density on F.
  static MarkovSpec constant(const IntervalUnion& F);
  static MarkovSpec point_mass(double t0);

  void validate() const;
};

/// sigma discretized as sum of W_i delta_{t_i}.
struct MarkovQuadrature {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

/// Quadrature for sigma with `order` nodes per component (0 = automatic).
MarkovQuadrature markov_quadrature(const MarkovSpec& sigma, unsigned bits, int order = 0);

/// Automatic per-component order for sigma at the given precision.
int default_markov_order(const MarkovSpec& sigma, unsigned bits);
/// Gauss-Chebyshev nodes on E needed for moments up to k_max.
int default_moment_order(const MarkovSpec& sigma, int k_max, unsigned bits);

/// Gauss-Legendre nodes and weights on [-1, 1] at the current precision.
void gauss_legendre(int order, std::vector<Real>& nodes, std::vector<Real>& weights);

/// a_k for k = 0..k_max: central binomials over 4^j at even k, zero at odd k.
std::vector<Real> moments_f1(int k_max, unsigned bits);

struct F2Moments {
  std::vector<Real> b;
  int x_order = 0;
  int t_order = 0;
  /// max_k |b_k(2N, 2M) - b_k(N, M)|
  Real self_convergence;
  Real tolerance;
};

/// b_k for k = 0..k_max with the doubling check; throws QuadratureError when
/// the two orders differ by more than 2^-(bits/2).
F2Moments moments_f2_checked(int k_max, const MarkovSpec& sigma, unsigned bits);
std::vector<Real> moments_f2(int k_max, const MarkovSpec& sigma, unsigned bits);

struct HPSolution {
  int n = 0;
  /// Monomial coefficients, lowest degree first, each of length n + 1.
  std::vector<Real> q0, q1, q2;
  unsigned precision_bits = 0;
  /// Leading Laurent coefficients of R_n (from z^-1) verified to vanish,
  /// out of the 2n+1 that are imposed.
  int residual_order = 0;
  /// max |r_m| over m = 1..2n+1
  Real max_residual;
  int nullspace_dimension = 0;
  int degree_q2 = -1;
  std::string route;
};

/// Residual threshold 2^-(bits/4).
Real residual_threshold(unsigned bits);

/// Nullspace of the moment system for z^-1 .. z^-(2n+1).  Needs a, b up to
/// index 3n+1.
HPSolution solve_hp(int n, std::span<const Real> a, std::span<const Real> b, unsigned bits);

/// Same polynomials from orthogonality against Chebyshev polynomials on E,
/// with Q2 expanded in Chebyshev polynomials of the hull of F.  Much better
/// conditioned than the moment form; the order condition is still verified
/// with monomial moments.
HPSolution solve_hp(int n, const MarkovSpec& sigma, unsigned bits);

/// solve_hp(n, sigma, bits) doubling bits on PrecisionError up to kMaxPrecisionBits.
HPSolution solve_hp_escalating(int n, const MarkovSpec& sigma, unsigned bits);

/// Fills q0 from q1, q2 and sets residual_order / max_residual.
void complete_solution(HPSolution& sol, std::span<const Real> a, std::span<const Real> b);

/// Laurent coefficients r_1 .. r_count of Q0 + Q1 f1 + Q2 f2.
std::vector<Real> laurent_residuals(const HPSolution& sol, std::span<const Real> a,
                                    std::span<const Real> b, int count);

Real evaluate(std::span<const Real> coeffs, const Real& x);

struct ZeroSet {
  std::vector<Real> zeros;
  int degree = 0;
  int outside_hull = 0;
};

/// Real zeros of Q2 by bracketing over [c1 - margin, dm + margin] and
/// bisection/Newton; throws PrecisionError when fewer than deg Q2 are found.
ZeroSet zeros_q2(const HPSolution& sol, const IntervalUnion& F);

/// solve_hp_escalating followed by zeros_q2, doubling the precision while
/// zeros are missing.
std::pair<HPSolution, ZeroSet> solve_hp_with_zeros(int n, const MarkovSpec& sigma, unsigned bits);

/// chi(Q2) / n as atoms.
DiscreteMeasure zero_counting_measure(const ZeroSet& zs, int n);

/// Round-trip decimal form at the value's own precision.
std::string to_decimal(const Real& x);

void write_hp_json(std::ostream& os, const HPSolution& sol);
void write_zeros_csv(std::ostream& os, const ZeroSet& zs);

}  // namespace rseq
