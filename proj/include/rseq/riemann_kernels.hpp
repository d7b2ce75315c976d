#pragma once

// Closed-form functions on the two-sheeted Riemann surface of w^2 = z^2 - 1
// and on the exterior of E = [-1, 1].

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rseq {

using cplx = std::complex<double>;

enum class Sheet : std::uint8_t { zero = 0, one = 1 };

/// A point of the surface: its projection onto the plane plus a sheet index.
/// Sheet 0 is the physical plane cut along E.
struct RSPoint {
  cplx z;
  Sheet sheet = Sheet::zero;

  /// The involution (z, w) -> (z, -w).
  RSPoint conjugate() const {
    return {z, sheet == Sheet::zero ? Sheet::one : Sheet::zero};
  }
};

struct Interval {
  double left = 0.0;
  double right = 0.0;

  double width() const { return right - left; }
  double midpoint() const { return 0.5 * (left + right); }
  bool contains(double x) const { return x >= left && x <= right; }
};

/// Finite disjoint union of closed real intervals, sorted left to right.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  /// Throws std::invalid_argument unless the intervals are non-degenerate,
  /// sorted and strictly disjoint.
  explicit IntervalUnion(std::vector<Interval> intervals);

  const std::vector<Interval>& components() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }

  double hull_left() const { return intervals_.front().left; }
  double hull_right() const { return intervals_.back().right; }
  bool contains(double x) const;
  /// Distance from the closed set to E = [-1, 1] (0 when they intersect).
  double gap_to_unit_interval() const;
  /// True when x -> -x maps the set onto itself (to 1e-12).
  bool is_symmetric() const;

 private:
  std::vector<Interval> intervals_;
};

/// Thrown when a set used as F is not admissible (touches or overlaps E).
class DisjointnessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Minimum gap between F and E below which a problem is rejected.
inline constexpr double kMinGapToE = 1e-6;

/// Throws DisjointnessError if F comes within kMinGapToE of E.
void require_disjoint_from_E(const IntervalUnion& F);

/// Phi(z) = z + (z^2 - 1)^{1/2} with (z^2 - 1)^{1/2} / z -> 1 at infinity.
/// On E itself the boundary value from the upper half-plane is returned.
cplx zhukovskii_inverse(cplx z);

/// Real branch for |x| >= 1: Phi(x) = x + sign(x) sqrt(x^2 - 1).
double zhukovskii_inverse(double x);

/// Phi(z) - Phi(t) for real |z|, |t| >= 1, without cancellation when z and t
/// are close.
double zhukovskii_difference(double z, double t);

/// (z^2 - 1)^{1/2} on sheet 0 with the same branch as zhukovskii_inverse.
cplx sqrt_branch(cplx z);

/// phi = Phi(z) on sheet 0, 1 / Phi(z) on sheet 1.
cplx phi_on_sheet(const RSPoint& p);

/// V = -log|phi|.  Antisymmetric under the involution and zero on the
/// branch curve over E.
double external_field(const RSPoint& p);

/// log(|1 - Phi(s)Phi(t)| / |s - t|^2) for s, t real outside E.  Diverges
/// at s = t; use the split form for quadrature.
double scalar_kernel(double s, double t);

/// Coefficient of log|s - t| in scalar_kernel.
inline constexpr double kScalarKernelLogCoeff = -2.0;

/// Bounded part log|1 - Phi(s)Phi(t)| of scalar_kernel.
double scalar_kernel_smooth(double s, double t);

/// Green function of the complement of E, in the form
/// log(|1 - Phi(z)Phi(t)| / |Phi(z) - Phi(t)|).
double green_E(double z, double t);

/// The same Green function in the form
/// log(|1 - Phi(z)Phi(t)|^2 / (2 |z - t| |Phi(z)Phi(t)|)).
double green_E_product_form(double z, double t);

/// g_E(z, t) + log|z - t|, bounded on compact subsets of R \ E.
double green_E_smooth(double z, double t);

/// g_E(z, infinity) = log|Phi(z)|.
double green_E_at_infinity(double z);

/// Green function of the complement of a single interval [c, d], obtained
/// from green_E by the affine map of [c, d] onto [-1, 1].
class IntervalGreen {
 public:
  explicit IntervalGreen(Interval I);

  double to_unit(double x) const { return (2.0 * x - a_ - b_) / (b_ - a_); }
  double operator()(double x, double y) const;
  /// g(x, y) + log|x - y|.
  double smooth(double x, double y) const;
  double at_infinity(double x) const;
  const Interval& interval() const { return I_; }

 private:
  Interval I_;
  double a_, b_;
  double log_half_width_;
};

}  // namespace rseq
