#include "rseq/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rseq {

namespace {

// two-point Gauss-Legendre on [0, 1]
constexpr double kGaussLo = 0.21132486540518711775;
constexpr double kGaussHi = 0.78867513459481288225;

// A cell is "near" a point when the gap is below this many cell widths;
// there the log part is integrated exactly.
constexpr double kNearFactor = 2.0;

double gauss_lo(const Interval& c) { return c.left + kGaussLo * c.width(); }
double gauss_hi(const Interval& c) { return c.left + kGaussHi * c.width(); }

// H' = log|u|
double H(double u) { return u == 0.0 ? 0.0 : u * std::log(std::abs(u)) - u; }

// G'' = log|u|
double G(double u) { return u == 0.0 ? 0.0 : 0.5 * u * u * std::log(std::abs(u)) - 0.75 * u * u; }

double gap_between(const Interval& a, const Interval& b) {
  return std::max(b.left - a.right, a.left - b.right);
}

double gap_to(const Interval& c, double x) { return std::max(c.left - x, x - c.right); }

// s in [0, 1/2]; the caller mirrors it onto the right half
double grading_map(double s, double g) { return 0.5 * std::pow(2.0 * s, g); }

IntervalUnion support_from_cells(const std::vector<Interval>& cells) {
  std::vector<Interval> comps;
  for (const auto& c : cells) {
    if (!comps.empty() && comps.back().right == c.left)
      comps.back().right = c.right;
    else
      comps.push_back(c);
  }
  return IntervalUnion(std::move(comps));
}

template <class Fn>
void parallel_rows(std::size_t rows, int threads, Fn&& fn) {
  const std::size_t nt = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, rows == 0 ? 1 : rows);
  if (nt == 1) {
    for (std::size_t i = 0; i < rows; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < rows; i += nt) fn(i);
    });
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(IntervalUnion support, std::vector<Interval> cells, int n_per_component, double grading)
    : support_(std::move(support)),
      cells_(std::move(cells)),
      n_per_component_(n_per_component),
      grading_(grading) {}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(cells_.size());
  std::transform(cells_.begin(), cells_.end(), out.begin(),
                 [](const Interval& c) { return c.midpoint(); });
  return out;
}

Grid Grid::subdivided(int factor) const {
  if (factor < 1) throw std::invalid_argument("subdivision factor must be >= 1");
  std::vector<Interval> fine;
  fine.reserve(cells_.size() * factor);
  for (const auto& c : cells_) {
    const double h = c.width() / factor;
    for (int k = 0; k < factor; ++k) {
      const double l = k == 0 ? c.left : c.left + k * h;
      const double r = k == factor - 1 ? c.right : c.left + (k + 1) * h;
      fine.push_back({l, r});
    }
  }
  return Grid(support_, std::move(fine), n_per_component_ * factor, grading_);
}

Grid make_grid(const IntervalUnion& support, int n_per_component, double grading) {
  if (n_per_component < 8) throw std::invalid_argument("grid needs at least 8 nodes per component");
  if (!(grading >= 1.0 && grading <= 2.0))
    throw std::invalid_argument("grading exponent must lie in [1, 2]");
  const int n = n_per_component;
  std::vector<double> m(n + 1);
  for (int k = 0; 2 * k <= n; ++k) m[k] = grading_map(static_cast<double>(k) / n, grading);
  std::vector<Interval> cells;
  cells.reserve(support.size() * n);
  for (const auto& I : support.components()) {
    std::vector<double> e(n + 1);
    const double L = I.width();
    for (int k = 0; k <= n; ++k)
      e[k] = 2 * k <= n ? I.left + L * m[k] : I.right - L * m[n - k];
    e[0] = I.left;
    e[n] = I.right;
    for (int k = 0; k < n; ++k) {
      if (!(e[k] < e[k + 1])) throw std::invalid_argument("degenerate grid cell");
      cells.push_back({e[k], e[k + 1]});
    }
  }
  return Grid(support, std::move(cells), n_per_component, grading);
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure DiscreteMeasure::on_grid(const Grid& grid, std::vector<double> weights) {
  return from_cells(grid.support(), grid.cells(), std::move(weights));
}

DiscreteMeasure DiscreteMeasure::from_cells(IntervalUnion support, std::vector<Interval> cells,
                                            std::vector<double> weights) {
  if (cells.size() != weights.size())
    throw std::invalid_argument("one weight per cell required");
  DiscreteMeasure mu;
  mu.support_ = std::move(support);
  mu.cells_ = std::move(cells);
  mu.weights_ = std::move(weights);
  mu.nodes_.resize(mu.cells_.size());
  for (std::size_t i = 0; i < mu.cells_.size(); ++i) mu.nodes_[i] = mu.cells_[i].midpoint();
  mu.mass_ = std::accumulate(mu.weights_.begin(), mu.weights_.end(), 0.0);
  mu.validate();
  return mu;
}

DiscreteMeasure DiscreteMeasure::atoms(std::vector<double> points, std::vector<double> weights) {
  if (points.size() != weights.size())
    throw std::invalid_argument("one weight per atom required");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  DiscreteMeasure mu;
  for (std::size_t k : order) {
    if (!mu.nodes_.empty() && mu.nodes_.back() == points[k]) {
      mu.weights_.back() += weights[k];
      continue;
    }
    mu.nodes_.push_back(points[k]);
    mu.weights_.push_back(weights[k]);
    mu.cells_.push_back({points[k], points[k]});
  }
  mu.mass_ = std::accumulate(mu.weights_.begin(), mu.weights_.end(), 0.0);
  mu.validate();
  return mu;
}

DiscreteMeasure DiscreteMeasure::point_mass(double at, double mass) {
  return atoms({at}, {mass});
}

void DiscreteMeasure::validate() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i]))
      throw std::invalid_argument("measure weights must be finite and nonnegative");
    const auto& c = cells_[i];
    if (support_) {
      if (!(c.left < nodes_[i] && nodes_[i] < c.right))
        throw std::invalid_argument("node must be interior to its cell");
      if (i > 0 && cells_[i - 1].right > c.left)
        throw std::invalid_argument("cells overlap");
    }
    if (i > 0 && !(nodes_[i - 1] < nodes_[i]))
      throw std::invalid_argument("nodes must be strictly increasing");
  }
}

const IntervalUnion& DiscreteMeasure::support() const {
  if (!support_) throw std::logic_error("atomic measure has no interval support");
  return *support_;
}

double DiscreteMeasure::density(std::size_t i) const {
  const double h = cells_[i].width();
  return h > 0.0 ? weights_[i] / h : std::numeric_limits<double>::infinity();
}

double DiscreteMeasure::min_density() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) m = std::min(m, density(i));
  return m;
}

double DiscreteMeasure::cdf(double x) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  return std::accumulate(weights_.begin(), weights_.begin() + (it - nodes_.begin()), 0.0);
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (!(factor >= 0.0)) throw std::invalid_argument("scale factor must be nonnegative");
  DiscreteMeasure out = *this;
  for (auto& w : out.weights_) w *= factor;
  out.mass_ = std::accumulate(out.weights_.begin(), out.weights_.end(), 0.0);
  return out;
}

DiscreteMeasure DiscreteMeasure::mirrored() const {
  DiscreteMeasure out;
  const std::size_t n = size();
  out.nodes_.resize(n);
  out.weights_.resize(n);
  out.cells_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    out.nodes_[i] = -nodes_[j];
    out.weights_[i] = weights_[j];
    out.cells_[i] = {-cells_[j].right, -cells_[j].left};
  }
  if (support_) {
    std::vector<Interval> comps;
    for (auto it = support_->components().rbegin(); it != support_->components().rend(); ++it)
      comps.push_back({-it->right, -it->left});
    out.support_ = IntervalUnion(std::move(comps));
  }
  out.mass_ = mass_;
  return out;
}

DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.atomic() && b.atomic()) {
    std::vector<double> pts = a.nodes_, w = a.weights_;
    pts.insert(pts.end(), b.nodes_.begin(), b.nodes_.end());
    w.insert(w.end(), b.weights_.begin(), b.weights_.end());
    return DiscreteMeasure::atoms(std::move(pts), std::move(w));
  }
  const bool same_cells =
      !a.atomic() && !b.atomic() && a.size() == b.size() &&
      std::equal(a.cells_.begin(), a.cells_.end(), b.cells_.begin(),
                 [](const Interval& x, const Interval& y) {
                   return x.left == y.left && x.right == y.right;
                 });
  if (!same_cells) throw std::invalid_argument("measures must share cells to be added");
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = a.weights_[i] + b.weights_[i];
  return DiscreteMeasure::from_cells(*a.support_, a.cells_, std::move(w));
}

// ---------------------------------------------------------------------------
// Kernels and quadrature

SplitKernel log_kernel() { return {-1.0, {}}; }

SplitKernel scalar_split_kernel() { return {kScalarKernelLogCoeff, scalar_kernel_smooth}; }

SplitKernel green_E_split_kernel() { return {-1.0, green_E_smooth}; }

SplitKernel interval_green_split_kernel(const IntervalGreen& g) {
  return {-1.0, [g](double x, double y) { return g.smooth(x, y); }};
}

double cell_log_average(const Interval& cell, double x) {
  const double h = cell.width();
  if (h == 0.0) return std::log(std::abs(x - cell.left));
  return (H(x - cell.left) - H(x - cell.right)) / h;
}

double cell_log_average(const Interval& cell, cplx z) {
  const double y = std::abs(z.imag());
  if (y == 0.0) return cell_log_average(cell, z.real());
  const double h = cell.width();
  if (h == 0.0) return std::log(std::abs(z - cell.left));
  const auto A = [y](double u) {
    return 0.5 * (u * std::log(u * u + y * y) - 2.0 * u + 2.0 * y * std::atan(u / y));
  };
  return (A(cell.right - z.real()) - A(cell.left - z.real())) / h;
}

double cell_pair_log_average(const Interval& a, const Interval& b) {
  const double ha = a.width(), hb = b.width();
  if (ha == 0.0) return cell_log_average(b, a.left);
  if (hb == 0.0) return cell_log_average(a, b.left);
  return (G(a.right - b.left) - G(a.left - b.left) - G(a.right - b.right) + G(a.left - b.right)) /
         (ha * hb);
}

double kernel_integral(const DiscreteMeasure& mu, double z, const SplitKernel& k) {
  const auto full = [&](double t) {
    double v = k.log_coeff * std::log(std::abs(z - t));
    if (k.smooth) v += k.smooth(z, t);
    return v;
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& c = mu.cells()[i];
    const double w = mu.weights()[i];
    if (w == 0.0) continue;
    const double h = c.width();
    double avg;
    if (h == 0.0) {
      avg = full(c.left);
    } else if (gap_to(c, z) < kNearFactor * h) {
      avg = k.log_coeff * cell_log_average(c, z);
      if (k.smooth) avg += 0.5 * (k.smooth(z, gauss_lo(c)) + k.smooth(z, gauss_hi(c)));
    } else {
      avg = 0.5 * (full(gauss_lo(c)) + full(gauss_hi(c)));
    }
    sum += w * avg;
  }
  return sum;
}

Eigen::MatrixXd galerkin_matrix(const Grid& rows, const Grid& cols, const SplitKernel& k,
                                int threads) {
  const auto& rc = rows.cells();
  const auto& cc = cols.cells();
  const bool symmetric = &rows == &cols;
  Eigen::MatrixXd M(rc.size(), cc.size());
  parallel_rows(rc.size(), threads, [&](std::size_t i) {
    const auto& a = rc[i];
    const double s[2] = {gauss_lo(a), gauss_hi(a)};
    for (std::size_t j = symmetric ? i : 0; j < cc.size(); ++j) {
      const auto& b = cc[j];
      const double t[2] = {gauss_lo(b), gauss_hi(b)};
      const bool near = gap_between(a, b) < kNearFactor * std::max(a.width(), b.width());
      double v = near ? k.log_coeff * cell_pair_log_average(a, b) : 0.0;
      for (double sp : s)
        for (double tq : t) {
          double q = k.smooth ? k.smooth(sp, tq) : 0.0;
          if (!near) q += k.log_coeff * std::log(std::abs(sp - tq));
          v += 0.25 * q;
        }
      M(i, j) = v;
    }
  });
  if (symmetric)
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j) M(i, j) = M(j, i);
  return M;
}

Eigen::VectorXd cell_averages(const Grid& grid, const std::function<double(double)>& f) {
  Eigen::VectorXd v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& c = grid.cells()[i];
    v(i) = 0.5 * (f(gauss_lo(c)) + f(gauss_hi(c)));
  }
  return v;
}

double log_potential(const DiscreteMeasure& mu, cplx z) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& c = mu.cells()[i];
    const double w = mu.weights()[i];
    if (w == 0.0) continue;
    const double h = c.width();
    const double dist = std::hypot(std::max({c.left - z.real(), z.real() - c.right, 0.0}), z.imag());
    double avg;
    if (h == 0.0 || dist < kNearFactor * h)
      avg = cell_log_average(c, z);
    else
      avg = 0.5 * (std::log(std::abs(z - gauss_lo(c))) + std::log(std::abs(z - gauss_hi(c))));
    sum -= w * avg;
  }
  return sum;
}

double rs_potential(const DiscreteMeasure& mu, const RSPoint& p) {
  const cplx phi_p = phi_on_sheet(p);
  const cplx z = p.z;
  // log|1 - 1/(phi(p) phi(t^(1)))| with phi(t^(1)) = 1/Phi(t)
  const auto numer = [&](double t) {
    return std::log(std::abs(1.0 - 1.0 / (phi_p * (1.0 / zhukovskii_inverse(t)))));
  };
  const auto full = [&](double t) { return numer(t) - 2.0 * std::log(std::abs(z - t)); };

  const bool sheet1 = p.sheet == Sheet::one;
  const double log_coeff = sheet1 ? -2.0 : -1.0;
  const cplx wz = sqrt_branch(z);
  const double log_abs_Phi_z = std::log(std::abs(zhukovskii_inverse(z)));
  // bounded remainder after removing log_coeff * log|z - t|
  const auto smooth = [&](double t) {
    if (sheet1) return numer(t);
    if ((z.real() > 0.0) == (t > 0.0)) {
      // (Phi(z) - Phi(t)) / (z - t) = 1 + (z + t) / (w(z) + w(t))
      const cplx wt = sqrt_branch(cplx(t, 0.0));
      return std::log(std::abs(1.0 + (z + t) / (wz + wt))) - log_abs_Phi_z;
    }
    return numer(t) - std::log(std::abs(z - t));
  };

  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto& c = mu.cells()[i];
    const double w = mu.weights()[i];
    if (w == 0.0) continue;
    const double h = c.width();
    const double dist = std::hypot(std::max({c.left - z.real(), z.real() - c.right, 0.0}), z.imag());
    double avg;
    if (h == 0.0) {
      avg = full(c.left);
    } else if (dist < kNearFactor * h) {
      avg = log_coeff * cell_log_average(c, z) + 0.5 * (smooth(gauss_lo(c)) + smooth(gauss_hi(c)));
    } else {
      avg = 0.5 * (full(gauss_lo(c)) + full(gauss_hi(c)));
    }
    sum += w * avg;
  }
  return sum;
}

double green_potential_E(const DiscreteMeasure& mu, double z) {
  return kernel_integral(mu, z, green_E_split_kernel());
}

double green_potential_interval(const DiscreteMeasure& mu, const IntervalGreen& g, double z) {
  return kernel_integral(mu, z, interval_green_split_kernel(g));
}

double ks_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (std::abs(a.mass() - 1.0) > kUnitMassTolerance || std::abs(b.mass() - 1.0) > kUnitMassTolerance) {
    std::ostringstream os;
    os << "ks_distance needs unit masses (got " << a.mass() << " and " << b.mass() << ")";
    throw std::invalid_argument(os.str());
  }
  const auto& na = a.nodes();
  const auto& nb = b.nodes();
  std::size_t i = 0, j = 0;
  double Fa = 0.0, Fb = 0.0, sup = 0.0;
  while (i < na.size() || j < nb.size()) {
    double x;
    if (j == nb.size() || (i < na.size() && na[i] <= nb[j]))
      x = na[i];
    else
      x = nb[j];
    while (i < na.size() && na[i] <= x) Fa += a.weights()[i++];
    while (j < nb.size() && nb[j] <= x) Fb += b.weights()[j++];
    sup = std::max(sup, std::abs(Fa - Fb));
  }
  return std::min(sup, 1.0);
}

double symmetry_defect(const DiscreteMeasure& mu) {
  const std::size_t n = mu.size();
  double defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    if (std::abs(mu.cells()[i].left + mu.cells()[j].right) > 1e-12 ||
        std::abs(mu.cells()[i].right + mu.cells()[j].left) > 1e-12)
      throw std::invalid_argument("symmetry_defect needs mirror-symmetric cells");
    defect = std::max(defect, std::abs(mu.weights()[i] - mu.weights()[j]));
  }
  return defect;
}

// ---------------------------------------------------------------------------
// I/O

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu) {
  os << "node,weight,cell_left,cell_right\n";
  for (std::size_t i = 0; i < mu.size(); ++i)
    os << format_double(mu.nodes()[i]) << ',' << format_double(mu.weights()[i]) << ','
       << format_double(mu.cells()[i].left) << ',' << format_double(mu.cells()[i].right) << '\n';
}

void write_measure_csv(const std::string& path, const DiscreteMeasure& mu) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_measure_csv(os, mu);
}

DiscreteMeasure read_measure_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "node,weight,cell_left,cell_right")
    throw std::runtime_error("measure CSV: bad header");
  std::vector<double> nodes, weights;
  std::vector<Interval> cells;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    double v[4];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int k = 0; k < 4; ++k) {
      const auto r = std::from_chars(p, end, v[k]);
      if (r.ec != std::errc()) throw std::runtime_error("measure CSV: bad number in '" + line + "'");
      p = r.ptr;
      if (k < 3) {
        if (p == end || *p != ',') throw std::runtime_error("measure CSV: expected 4 columns");
        ++p;
      }
    }
    nodes.push_back(v[0]);
    weights.push_back(v[1]);
    cells.push_back({v[2], v[3]});
  }
  const bool atomic = !cells.empty() && std::all_of(cells.begin(), cells.end(), [](const Interval& c) {
    return c.width() == 0.0;
  });
  if (atomic) return DiscreteMeasure::atoms(std::move(nodes), std::move(weights));
  auto support = support_from_cells(cells);
  return DiscreteMeasure::from_cells(std::move(support), std::move(cells), std::move(weights));
}

}  // namespace rseq
