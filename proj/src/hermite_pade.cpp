#include "rseq/hermite_pade.hpp"

#include <boost/math/constants/constants.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace rseq {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::cos;
using boost::multiprecision::ldexp;

Real pi() { return boost::math::constants::pi<Real>(); }

Real two_pow(int e) { return ldexp(Real(1), e); }

double component_gap(const Interval& I) {
  return I.left > 1.0 ? I.left - 1.0 : -1.0 - I.right;
}

int order_for_rate(double log_rho, unsigned bits) {
  return static_cast<int>(std::ceil(bits * std::log(2.0) / (2.0 * log_rho))) + 16;
}

std::vector<Real> chebyshev_nodes(int N) {
  std::vector<Real> x(N);
  const Real p = pi();
  for (int i = 0; i < N; ++i) x[i] = cos(p * (2 * i + 1) / (2 * N));
  return x;
}

// h(x_i) = sum_j W_j / (x_i - t_j)
std::vector<Real> cauchy_values(const std::vector<Real>& x, const MarkovQuadrature& q) {
  std::vector<Real> h(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Real s = 0;
    for (std::size_t j = 0; j < q.nodes.size(); ++j) s += q.weights[j] / (x[i] - q.nodes[j]);
    h[i] = s;
  }
  return h;
}

std::vector<Real> discrete_moments(const std::vector<Real>& x, const std::vector<Real>& h, int k_max) {
  std::vector<Real> b(k_max + 1, Real(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    Real p = h[i];
    for (int k = 0; k <= k_max; ++k) {
      b[k] += p;
      p *= x[i];
    }
  }
  const Real N = static_cast<int>(x.size());
  for (auto& v : b) v /= N;
  return b;
}

// Monomial coefficients of T_j(alpha x + beta), j = 0..n.
std::vector<std::vector<Real>> shifted_chebyshev(int n, const Real& alpha, const Real& beta) {
  std::vector<std::vector<Real>> T;
  T.push_back({Real(1)});
  if (n >= 1) T.push_back({beta, alpha});
  for (int j = 2; j <= n; ++j) {
    std::vector<Real> c(j + 1, Real(0));
    const auto& a = T[j - 1];
    for (std::size_t i = 0; i < a.size(); ++i) {
      c[i] += 2 * beta * a[i];
      c[i + 1] += 2 * alpha * a[i];
    }
    const auto& b = T[j - 2];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    T.push_back(std::move(c));
  }
  return T;
}

std::vector<Real> to_monomial(std::span<const Real> cheb, const std::vector<std::vector<Real>>& T) {
  std::vector<Real> out(cheb.size(), Real(0));
  for (std::size_t j = 0; j < cheb.size(); ++j)
    for (std::size_t i = 0; i < T[j].size(); ++i) out[i] += cheb[j] * T[j][i];
  return out;
}

struct Nullspace {
  std::vector<Real> vector;
  int dimension = 0;
};

// Complete-pivoting elimination on the equilibrated matrix; rank decided at
// 2^-(3 bits / 4).  The returned vector sets the last free column to 1.
Nullspace nullspace(std::vector<std::vector<Real>> M, unsigned bits) {
  const int R = static_cast<int>(M.size());
  const int C = static_cast<int>(M.front().size());
  std::vector<int> perm(C);
  for (int j = 0; j < C; ++j) perm[j] = j;

  // equilibrate columns, then rows, to unit max norm
  std::vector<Real> col_scale(C, Real(0));
  for (int j = 0; j < C; ++j) {
    for (int i = 0; i < R; ++i) col_scale[j] = std::max(col_scale[j], Real(abs(M[i][j])));
    if (col_scale[j] == 0) col_scale[j] = 1;
    for (int i = 0; i < R; ++i) M[i][j] /= col_scale[j];
  }
  for (auto& row : M) {
    Real s = 0;
    for (const auto& v : row) s = std::max(s, Real(abs(v)));
    if (s == 0) continue;
    for (auto& v : row) v /= s;
  }
  const Real tol = two_pow(-static_cast<int>(3 * bits / 4));

  int rank = 0;
  for (int k = 0; k < std::min(R, C); ++k) {
    int pi_ = k, pj = k;
    Real best = 0;
    for (int i = k; i < R; ++i)
      for (int j = k; j < C; ++j)
        if (abs(M[i][j]) > best) {
          best = abs(M[i][j]);
          pi_ = i;
          pj = j;
        }
    if (best <= tol) break;
    std::swap(M[k], M[pi_]);
    if (pj != k) {
      for (auto& row : M) std::swap(row[k], row[pj]);
      std::swap(perm[k], perm[pj]);
    }
    for (int i = k + 1; i < R; ++i) {
      if (M[i][k] == 0) continue;
      const Real f = M[i][k] / M[k][k];
      for (int j = k + 1; j < C; ++j) M[i][j] -= f * M[k][j];
      M[i][k] = 0;
    }
    ++rank;
  }

  Nullspace ns;
  ns.dimension = C - rank;
  std::vector<Real> x(C, Real(0));
  x[C - 1] = 1;
  for (int k = rank - 1; k >= 0; --k) {
    Real s = 0;
    for (int j = k + 1; j < C; ++j) s += M[k][j] * x[j];
    x[k] = -s / M[k][k];
  }
  ns.vector.assign(C, Real(0));
  for (int j = 0; j < C; ++j) ns.vector[perm[j]] = x[j] / col_scale[perm[j]];
  return ns;
}

// Divides by the leading nonzero coefficient of q2; entries of q2 below
// 2^-(bits/2) of its largest are treated as zero above that degree.
void normalize(HPSolution& sol, unsigned bits) {
  Real big = 0;
  for (const auto& v : sol.q2) big = std::max(big, Real(abs(v)));
  if (big == 0) throw PrecisionError("Q2 vanishes identically", bits);
  const Real cut = big * two_pow(-static_cast<int>(bits / 2));
  int deg = sol.n;
  while (deg > 0 && abs(sol.q2[deg]) <= cut) --deg;
  for (int j = deg + 1; j <= sol.n; ++j) sol.q2[j] = 0;
  const Real lead = sol.q2[deg];
  for (auto& v : sol.q1) v /= lead;
  for (auto& v : sol.q2) v /= lead;
  sol.degree_q2 = deg;
}

HPSolution from_nullspace(int n, const std::vector<Real>& q1, const std::vector<Real>& q2,
                          int dimension, unsigned bits, std::string route) {
  HPSolution sol;
  sol.n = n;
  sol.q1 = q1;
  sol.q2 = q2;
  sol.precision_bits = bits;
  sol.nullspace_dimension = dimension;
  sol.route = std::move(route);
  normalize(sol, bits);
  return sol;
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

// ---------------------------------------------------------------------------

MarkovSpec MarkovSpec::arcsine(const IntervalUnion& F) {
  MarkovSpec s;
  s.support = F;
  s.weight = Weight::chebyshev;
  const double m = static_cast<double>(F.size());
  s.density = [m](const Real&) { return Real(1) / Real(m); };
  s.name = "arcsine";
  return s;
}

MarkovSpec MarkovSpec::constant(const IntervalUnion& F) {
  MarkovSpec s;
  s.support = F;
  s.weight = Weight::legendre;
  double length = 0.0;
  for (const auto& I : F.components()) length += I.width();
  s.density = [length](const Real&) { return Real(1) / Real(length); };
  s.name = "constant";
  return s;
}

MarkovSpec MarkovSpec::point_mass(double t0) {
  MarkovSpec s;
  s.support = IntervalUnion({{t0, std::nextafter(t0, std::numeric_limits<double>::infinity())}});
  s.weight = Weight::point_mass;
  s.atom = t0;
  s.name = "point_mass";
  return s;
}

void MarkovSpec::validate() const {
  if (support.empty()) throw std::invalid_argument("sigma: empty support");
  require_disjoint_from_E(support);
  if (quadrature_order < 0) throw std::invalid_argument("sigma: negative quadrature order");
  if (weight == Weight::point_mass) return;
  if (!density) throw std::invalid_argument("sigma: missing density");
  for (const auto& I : support.components())
    for (int k = 0; k <= 16; ++k) {
      const double t = I.left + I.width() * k / 16.0;
      if (!(density(Real(t)) > 0)) throw std::invalid_argument("sigma: density must be strictly positive on F");
    }
}

void gauss_legendre(int order, std::vector<Real>& nodes, std::vector<Real>& weights) {
  nodes.assign(order, Real(0));
  weights.assign(order, Real(0));
  const Real p = pi();
  const Real tol = ldexp(Real(1), -static_cast<int>(Real::default_precision() * 3.32) + 8);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    Real x = cos(p * (i + Real(0.75)) / (order + Real(0.5)));
    Real dP = 0;
    for (int it = 0; it < 100; ++it) {
      Real P0 = 1, P1 = x;
      for (int k = 2; k <= order; ++k) {
        Real P2 = ((2 * k - 1) * x * P1 - (k - 1) * P0) / k;
        P0 = std::move(P1);
        P1 = std::move(P2);
      }
      if (order == 1) P0 = 1;
      dP = order * (x * P1 - P0) / (x * x - 1);
      const Real dx = P1 / dP;
      x -= dx;
      if (abs(dx) <= tol) break;
    }
    {
      Real P0 = 1, P1 = x;
      for (int k = 2; k <= order; ++k) {
        Real P2 = ((2 * k - 1) * x * P1 - (k - 1) * P0) / k;
        P0 = std::move(P1);
        P1 = std::move(P2);
      }
      if (order == 1) P0 = 1;
      dP = order * (x * P1 - P0) / (x * x - 1);
    }
    const Real w = 2 / ((1 - x * x) * dP * dP);
    nodes[i] = x;
    nodes[order - 1 - i] = -x;
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes[order / 2] = 0;
}

int default_markov_order(const MarkovSpec& sigma, unsigned bits) {
  if (sigma.weight == MarkovSpec::Weight::point_mass) return 1;
  if (sigma.quadrature_order > 0) return sigma.quadrature_order;
  int order = 0;
  for (const auto& I : sigma.support.components()) {
    // pole of 1/(x - t) seen from the component, in its own unit variable
    const double u = 1.0 + 2.0 * component_gap(I) / I.width();
    order = std::max(order, order_for_rate(std::log(zhukovskii_inverse(u)), bits));
  }
  return order;
}

int default_moment_order(const MarkovSpec& sigma, int k_max, unsigned bits) {
  const double rho = zhukovskii_inverse(1.0 + sigma.support.gap_to_unit_interval());
  return static_cast<int>(std::ceil(0.5 * (k_max + 1))) + order_for_rate(std::log(rho), bits);
}

MarkovQuadrature markov_quadrature(const MarkovSpec& sigma, unsigned bits, int order) {
  MarkovQuadrature q;
  if (sigma.weight == MarkovSpec::Weight::point_mass) {
    q.nodes = {Real(sigma.atom)};
    q.weights = {Real(1)};
    return q;
  }
  const int M = order > 0 ? order : default_markov_order(sigma, bits);
  std::vector<Real> gl_x, gl_w;
  if (sigma.weight == MarkovSpec::Weight::legendre) gauss_legendre(M, gl_x, gl_w);
  const auto cheb = chebyshev_nodes(M);
  for (const auto& I : sigma.support.components()) {
    const Real mid = (Real(I.left) + Real(I.right)) / 2;
    const Real half = (Real(I.right) - Real(I.left)) / 2;
    for (int j = 0; j < M; ++j) {
      if (sigma.weight == MarkovSpec::Weight::chebyshev) {
        const Real t = mid + half * cheb[j];
        q.nodes.push_back(t);
        q.weights.push_back(sigma.density(t) / M);
      } else {
        const Real t = mid + half * gl_x[j];
        q.nodes.push_back(t);
        q.weights.push_back(half * gl_w[j] * sigma.density(t));
      }
    }
  }
  return q;
}

std::vector<Real> moments_f1(int k_max, unsigned bits) {
  if (k_max < 0) throw std::invalid_argument("moments_f1: k_max must be >= 0");
  PrecisionScope scope(bits);
  std::vector<Real> a(k_max + 1, Real(0));
  Real c = 1;  // binom(2j, j) / 4^j
  for (int j = 0; 2 * j <= k_max; ++j) {
    a[2 * j] = c;
    c = c * (2 * j + 1) / (2 * j + 2);
  }
  return a;
}

F2Moments moments_f2_checked(int k_max, const MarkovSpec& sigma, unsigned bits) {
  if (k_max < 0) throw std::invalid_argument("moments_f2: k_max must be >= 0");
  sigma.validate();
  PrecisionScope scope(bits);
  F2Moments out;
  const int N = default_moment_order(sigma, k_max, bits);
  const int M = default_markov_order(sigma, bits);
  const int M2 = sigma.weight == MarkovSpec::Weight::point_mass ? 1 : 2 * M;

  const auto x1 = chebyshev_nodes(N);
  const auto b1 = discrete_moments(x1, cauchy_values(x1, markov_quadrature(sigma, bits, M)), k_max);
  const auto x2 = chebyshev_nodes(2 * N);
  auto b2 = discrete_moments(x2, cauchy_values(x2, markov_quadrature(sigma, bits, M2)), k_max);

  Real diff = 0;
  for (int k = 0; k <= k_max; ++k) diff = std::max(diff, Real(abs(b2[k] - b1[k])));
  out.b = std::move(b2);
  out.x_order = 2 * N;
  out.t_order = M2;
  out.self_convergence = diff;
  out.tolerance = two_pow(-static_cast<int>(bits / 2));
  if (diff > out.tolerance)
    throw QuadratureError("moments_f2: doubling the quadrature order changed b_k by " +
                          diff.str(6, std::ios_base::scientific));
  return out;
}

std::vector<Real> moments_f2(int k_max, const MarkovSpec& sigma, unsigned bits) {
  return moments_f2_checked(k_max, sigma, bits).b;
}

// ---------------------------------------------------------------------------

Real residual_threshold(unsigned bits) { return two_pow(-static_cast<int>(bits / 4)); }

Real evaluate(std::span<const Real> coeffs, const Real& x) {
  Real s = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) s = s * x + coeffs[i];
  return s;
}

std::vector<Real> laurent_residuals(const HPSolution& sol, std::span<const Real> a,
                                    std::span<const Real> b, int count) {
  const int n = sol.n;
  if (static_cast<int>(std::min(a.size(), b.size())) < n + count)
    throw std::invalid_argument("laurent_residuals: not enough moments");
  std::vector<Real> r(count, Real(0));
  for (int m = 1; m <= count; ++m)
    for (int j = 0; j <= n; ++j) r[m - 1] += sol.q1[j] * a[j + m - 1] + sol.q2[j] * b[j + m - 1];
  return r;
}

void complete_solution(HPSolution& sol, std::span<const Real> a, std::span<const Real> b) {
  const int n = sol.n;
  // Q1(z) f1(z) = sum_j q1_j sum_k a_k z^(j-k-1); the z^p part (p >= 0) has k = j - p - 1.
  sol.q0.assign(n + 1, Real(0));
  for (int p = 0; p < n; ++p) {
    Real s = 0;
    for (int j = p + 1; j <= n; ++j) s += sol.q1[j] * a[j - p - 1] + sol.q2[j] * b[j - p - 1];
    sol.q0[p] = -s;
  }
  const auto r = laurent_residuals(sol, a, b, 2 * n + 1);
  const Real thr = residual_threshold(sol.precision_bits);
  sol.max_residual = 0;
  for (const auto& v : r) sol.max_residual = std::max(sol.max_residual, Real(abs(v)));
  sol.residual_order = 0;
  while (sol.residual_order < static_cast<int>(r.size()) && abs(r[sol.residual_order]) <= thr)
    ++sol.residual_order;
}

HPSolution solve_hp(int n, std::span<const Real> a, std::span<const Real> b, unsigned bits) {
  if (n < 0) throw std::invalid_argument("solve_hp: n must be >= 0");
  if (static_cast<int>(std::min(a.size(), b.size())) < 3 * n + 2)
    throw std::invalid_argument("solve_hp: moments required up to index 3n+1");
  PrecisionScope scope(bits);
  std::vector<std::vector<Real>> M(2 * n + 1, std::vector<Real>(2 * n + 2));
  for (int m = 1; m <= 2 * n + 1; ++m)
    for (int j = 0; j <= n; ++j) {
      M[m - 1][j] = a[j + m - 1];
      M[m - 1][n + 1 + j] = b[j + m - 1];
    }
  const auto ns = nullspace(std::move(M), bits);
  auto sol = from_nullspace(n, {ns.vector.begin(), ns.vector.begin() + n + 1},
                            {ns.vector.begin() + n + 1, ns.vector.end()}, ns.dimension, bits, "moments");
  complete_solution(sol, a, b);
  return sol;
}

HPSolution solve_hp(int n, const MarkovSpec& sigma, unsigned bits) {
  if (n < 0) throw std::invalid_argument("solve_hp: n must be >= 0");
  sigma.validate();
  if (n == 0 || sigma.weight == MarkovSpec::Weight::point_mass) {
    const auto a = moments_f1(3 * n + 1, bits);
    const auto b = moments_f2(3 * n + 1, sigma, bits);
    return solve_hp(n, a, b, bits);
  }
  PrecisionScope scope(bits);
  const int N = default_moment_order(sigma, 3 * n + 1, bits);
  const auto x = chebyshev_nodes(N);
  const auto h = cauchy_values(x, markov_quadrature(sigma, bits));

  // l maps the hull of F onto [-1, 1]
  const Real c = sigma.support.hull_left(), d = sigma.support.hull_right();
  const Real alpha = 2 / (d - c), beta = -(c + d) / (d - c);

  // rows: (1/pi) int_E T_k (Q1 + Q2 h) dx / sqrt(1 - x^2) = 0, k = 0..2n
  std::vector<std::vector<Real>> M(2 * n + 1, std::vector<Real>(2 * n + 2, Real(0)));
  M[0][0] = 1;
  for (int k = 1; k <= n; ++k) M[k][k] = Real(1) / 2;
  std::vector<Real> Tx(2 * n + 1), Tl(n + 1);
  for (int i = 0; i < N; ++i) {
    Tx[0] = 1;
    Tx[1] = x[i];
    for (int k = 2; k <= 2 * n; ++k) Tx[k] = 2 * x[i] * Tx[k - 1] - Tx[k - 2];
    const Real u = alpha * x[i] + beta;
    Tl[0] = 1;
    Tl[1] = u;
    for (int j = 2; j <= n; ++j) Tl[j] = 2 * u * Tl[j - 1] - Tl[j - 2];
    for (int j = 0; j <= n; ++j) {
      const Real tj = Tl[j] * h[i];
      for (int k = 0; k <= 2 * n; ++k) M[k][n + 1 + j] += Tx[k] * tj;
    }
  }
  const Real Nr = N;
  for (int k = 0; k <= 2 * n; ++k)
    for (int j = 0; j <= n; ++j) M[k][n + 1 + j] /= Nr;

  const auto ns = nullspace(std::move(M), bits);
  const std::span<const Real> y(ns.vector);
  const auto q1 = to_monomial(y.subspan(0, n + 1), shifted_chebyshev(n, Real(1), Real(0)));
  const auto q2 = to_monomial(y.subspan(n + 1, n + 1), shifted_chebyshev(n, alpha, beta));
  auto sol = from_nullspace(n, q1, q2, ns.dimension, bits, "chebyshev");

  std::vector<Real> a(3 * n + 2, Real(0));
  {
    Real cb = 1;
    for (int j = 0; 2 * j <= 3 * n + 1; ++j) {
      a[2 * j] = cb;
      cb = cb * (2 * j + 1) / (2 * j + 2);
    }
  }
  const auto b = discrete_moments(x, h, 3 * n + 1);
  complete_solution(sol, a, b);
  return sol;
}

HPSolution solve_hp_escalating(int n, const MarkovSpec& sigma, unsigned bits) {
  for (;;) {
    try {
      auto sol = solve_hp(n, sigma, bits);
      if (sol.residual_order >= 2 * n + 1 || bits >= kMaxPrecisionBits) return sol;
    } catch (const PrecisionError&) {
      if (bits >= kMaxPrecisionBits) throw;
    }
    bits *= 2;
  }
}

// ---------------------------------------------------------------------------

namespace {

struct Eval {
  Real p, dp;
};

Eval evaluate_with_derivative(std::span<const Real> c, const Real& x) {
  Eval e{0, 0};
  for (std::size_t i = c.size(); i-- > 0;) {
    e.dp = e.dp * x + e.p;
    e.p = e.p * x + c[i];
  }
  return e;
}

int sign(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

Real polish(std::span<const Real> c, Real lo, Real hi, int s_lo, unsigned bits) {
  const int half_bits = static_cast<int>(bits / 2);
  Real x;
  for (int it = 0; it < 4 * static_cast<int>(bits); ++it) {
    x = (lo + hi) / 2;
    const int s = sign(evaluate(c, x));
    if (s == 0) return x;
    if (s == s_lo) lo = x; else hi = x;
    if (hi - lo <= ldexp(abs(x) + 1, -half_bits)) break;
  }
  x = (lo + hi) / 2;
  for (int it = 0; it < 6; ++it) {
    const auto e = evaluate_with_derivative(c, x);
    if (e.dp == 0) break;
    const Real xn = x - e.p / e.dp;
    if (xn < lo || xn > hi) break;
    if (xn == x) break;
    x = xn;
  }
  return x;
}

std::vector<Real> bracket_zeros(std::span<const Real> c, const Real& lo, const Real& hi, int G,
                                unsigned bits) {
  std::vector<Real> z;
  const Real mid = (lo + hi) / 2, half = (hi - lo) / 2;
  const Real p = pi();
  Real x_prev = lo;
  int s_prev = sign(evaluate(c, x_prev));
  if (s_prev == 0) z.push_back(x_prev);
  for (int k = 1; k <= G; ++k) {
    const Real x = k == G ? hi : Real(mid - half * cos(p * k / G));
    const int s = sign(evaluate(c, x));
    if (s == 0) {
      z.push_back(x);
    } else if (s_prev != 0 && s != s_prev) {
      z.push_back(polish(c, x_prev, x, s_prev, bits));
    }
    x_prev = x;
    s_prev = s;
  }
  return z;
}

}  // namespace

ZeroSet zeros_q2(const HPSolution& sol, const IntervalUnion& F) {
  ZeroSet zs;
  zs.degree = sol.degree_q2;
  if (zs.degree <= 0) return zs;
  PrecisionScope scope(sol.precision_bits);
  const std::span<const Real> c(sol.q2.data(), zs.degree + 1);
  const double c1 = F.hull_left(), dm = F.hull_right();
  const double margin = std::max(0.1 * (dm - c1), 1e-3);
  const Real lo = c1 - margin, hi = dm + margin;
  int G = std::max(1024, 16 * zs.degree * zs.degree);
  for (int attempt = 0; attempt < 2; ++attempt, G *= 8) {
    zs.zeros = bracket_zeros(c, lo, hi, G, sol.precision_bits);
    if (static_cast<int>(zs.zeros.size()) >= zs.degree) break;
  }
  if (static_cast<int>(zs.zeros.size()) < zs.degree)
    throw PrecisionError("zeros_q2: found " + std::to_string(zs.zeros.size()) + " real zeros for degree " +
                             std::to_string(zs.degree),
                         sol.precision_bits);
  zs.outside_hull = static_cast<int>(
      std::count_if(zs.zeros.begin(), zs.zeros.end(), [&](const Real& z) { return z < c1 || z > dm; }));
  return zs;
}

std::pair<HPSolution, ZeroSet> solve_hp_with_zeros(int n, const MarkovSpec& sigma, unsigned bits) {
  for (;;) {
    auto sol = solve_hp_escalating(n, sigma, bits);
    try {
      auto zs = zeros_q2(sol, sigma.support);
      return {std::move(sol), std::move(zs)};
    } catch (const PrecisionError&) {
      if (sol.precision_bits >= kMaxPrecisionBits) throw;
      bits = 2 * sol.precision_bits;
    }
  }
}

DiscreteMeasure zero_counting_measure(const ZeroSet& zs, int n) {
  if (n <= 0) throw std::invalid_argument("zero_counting_measure: n must be positive");
  std::vector<double> pts, w;
  for (const auto& z : zs.zeros) {
    pts.push_back(z.convert_to<double>());
    w.push_back(1.0 / n);
  }
  return DiscreteMeasure::atoms(std::move(pts), std::move(w));
}

std::string to_decimal(const Real& x) { return x.str(0, std::ios_base::scientific); }

void write_hp_json(std::ostream& os, const HPSolution& sol) {
  auto strings = [](const std::vector<Real>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(to_decimal(x));
    return a;
  };
  nlohmann::json j;
  j["n"] = sol.n;
  j["precision_bits"] = sol.precision_bits;
  j["residual_order"] = sol.residual_order;
  j["max_residual"] = to_decimal(sol.max_residual);
  j["nullspace_dimension"] = sol.nullspace_dimension;
  j["degree_q2"] = sol.degree_q2;
  j["route"] = sol.route;
  j["coefficients"] = {{"q0", strings(sol.q0)}, {"q1", strings(sol.q1)}, {"q2", strings(sol.q2)}};
  j["basis"] = "monomial, lowest degree first";
  os << j.dump(2) << '\n';
}

void write_zeros_csv(std::ostream& os, const ZeroSet& zs) {
  os << "index,zero\n";
  for (std::size_t i = 0; i < zs.zeros.size(); ++i) os << i << ',' << to_decimal(zs.zeros[i]) << '\n';
}

}  // namespace rseq
