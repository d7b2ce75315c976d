#include "rseq/riemann_kernels.hpp"

#include <limits>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rseq {

IntervalUnion::IntervalUnion(std::vector<Interval> intervals)
    : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw std::invalid_argument("interval union is empty");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& I = intervals_[i];
    if (!std::isfinite(I.left) || !std::isfinite(I.right))
      throw std::invalid_argument("interval endpoints must be finite");
    if (!(I.left < I.right)) {
      std::ostringstream os;
      os << "degenerate interval [" << I.left << ", " << I.right << "]";
      throw std::invalid_argument(os.str());
    }
    if (i > 0 && !(intervals_[i - 1].right < I.left))
      throw std::invalid_argument("intervals must be sorted and strictly disjoint");
  }
}

bool IntervalUnion::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& I) { return I.contains(x); });
}

double IntervalUnion::gap_to_unit_interval() const {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& I : intervals_) {
    if (I.right >= -1.0 && I.left <= 1.0) return 0.0;
    gap = std::min(gap, I.left > 1.0 ? I.left - 1.0 : -1.0 - I.right);
  }
  return gap;
}

bool IntervalUnion::is_symmetric() const {
  const std::size_t m = intervals_.size();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = intervals_[i];
    const auto& b = intervals_[m - 1 - i];
    if (std::abs(a.left + b.right) > 1e-12 || std::abs(a.right + b.left) > 1e-12)
      return false;
  }
  return true;
}

void require_disjoint_from_E(const IntervalUnion& F) {
  const double gap = F.gap_to_unit_interval();
  if (gap < kMinGapToE) {
    std::ostringstream os;
    os << "F must be disjoint from E = [-1, 1] (gap " << gap << " < " << kMinGapToE << ")";
    throw DisjointnessError(os.str());
  }
}

cplx sqrt_branch(cplx z) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (std::abs(x) >= 1.0) {
      const double r = std::sqrt((std::abs(x) - 1.0) * (std::abs(x) + 1.0));
      return {std::copysign(r, x), 0.0};
    }
    // boundary value from the upper half-plane
    return {0.0, std::sqrt((1.0 - x) * (1.0 + x))};
  }
  return std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
}

cplx zhukovskii_inverse(cplx z) { return z + sqrt_branch(z); }

double zhukovskii_inverse(double x) {
  const double ax = std::abs(x);
  if (ax < 1.0) throw std::domain_error("real Zhukovskii branch needs |x| >= 1");
  return std::copysign(ax + std::sqrt((ax - 1.0) * (ax + 1.0)), x);
}

double zhukovskii_difference(double z, double t) {
  if ((z > 0.0) != (t > 0.0)) return zhukovskii_inverse(z) - zhukovskii_inverse(t);
  // w(z) - w(t) = (z^2 - t^2) / (w(z) + w(t))
  const double wz = sqrt_branch(cplx(z, 0.0)).real();
  const double wt = sqrt_branch(cplx(t, 0.0)).real();
  return (z - t) * (1.0 + (z + t) / (wz + wt));
}

cplx phi_on_sheet(const RSPoint& p) {
  const cplx Phi = zhukovskii_inverse(p.z);
  return p.sheet == Sheet::zero ? Phi : 1.0 / Phi;
}

double external_field(const RSPoint& p) {
  const double logmod = std::log(std::abs(zhukovskii_inverse(p.z)));
  return p.sheet == Sheet::zero ? -logmod : logmod;
}

double scalar_kernel_smooth(double s, double t) {
  return std::log(std::abs(1.0 - zhukovskii_inverse(s) * zhukovskii_inverse(t)));
}

double scalar_kernel(double s, double t) {
  return scalar_kernel_smooth(s, t) + kScalarKernelLogCoeff * std::log(std::abs(s - t));
}

double green_E(double z, double t) {
  const double pz = zhukovskii_inverse(z);
  const double pt = zhukovskii_inverse(t);
  return std::log(std::abs(1.0 - pz * pt) / std::abs(zhukovskii_difference(z, t)));
}

double green_E_smooth(double z, double t) {
  const double pz = zhukovskii_inverse(z);
  const double pt = zhukovskii_inverse(t);
  return 2.0 * std::log(std::abs(1.0 - pz * pt)) - std::numbers::ln2 - std::log(std::abs(pz)) -
         std::log(std::abs(pt));
}

double green_E_product_form(double z, double t) {
  return green_E_smooth(z, t) - std::log(std::abs(z - t));
}

double green_E_at_infinity(double z) { return std::log(std::abs(zhukovskii_inverse(z))); }

IntervalGreen::IntervalGreen(Interval I)
    : I_(I), a_(I.left), b_(I.right), log_half_width_(std::log(0.5 * (I.right - I.left))) {
  if (!(a_ < b_)) throw std::invalid_argument("IntervalGreen needs a non-degenerate interval");
}

double IntervalGreen::operator()(double x, double y) const {
  return green_E(to_unit(x), to_unit(y));
}

double IntervalGreen::smooth(double x, double y) const {
  // |x - y| = |u - v| (b - a) / 2
  return green_E_smooth(to_unit(x), to_unit(y)) + log_half_width_;
}

double IntervalGreen::at_infinity(double x) const { return green_E_at_infinity(to_unit(x)); }

}  // namespace rseq
