#pragma once

#include "hjb/problem.hpp"

#include <compare>
#include <functional>
#include <limits>
#include <ostream>

namespace hjb {

/// A real number or +infinity. Hamiltonians of unbounded control problems
/// take the value +infinity where the control objective is not coercive.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double v) : value_(v) {}

  static constexpr ExtendedReal pos_infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  [[nodiscard]] constexpr bool is_finite() const { return !infinite_; }
  [[nodiscard]] constexpr bool is_pos_infinity() const { return infinite_; }
  /// Meaningful only when finite; returns +inf otherwise.
  [[nodiscard]] constexpr double value() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend constexpr ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return pos_infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend constexpr ExtendedReal operator+(ExtendedReal a, double b) { return a + ExtendedReal(b); }

  friend constexpr bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ && b.infinite_) return std::partial_ordering::equivalent;
    if (a.infinite_) return std::partial_ordering::greater;
    if (b.infinite_) return std::partial_ordering::less;
    return a.value_ <=> b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtendedReal r) {
    return r.infinite_ ? (os << "+inf") : (os << r.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

/// sup_alpha { <alpha,q> - nu |alpha|^m } in closed form, nu > 0, m > 1.
double legendre_power(double nu, double m, const Vec& q);

struct HamiltonianOptions {
  /// Use the closed form when the problem registers a PowerForm.
  bool allow_analytic = true;
  int points_per_dim = 64;
  int refine_iterations = 60;
  /// Relative increase between radii 2A and 10A that certifies divergence.
  double divergence_margin = 1e-6;
};

/// Radius of the control ball that contains every maximiser:
///   max(1, ((|q| C_b + |X| C_sigma^2 + C_ell) * 2/nu)^{1/(p-1)}).
double control_radius(const ProblemSpec& spec, const Vec& q, const Mat& X);

struct ControlSearchResult {
  ExtendedReal value;
  Vec argmax;
};

/// Maximises objective(alpha) over the ball of radius a_max in R^dim: a
/// tensor grid with points_per_dim nodes per axis followed by golden-section
/// refinement around the best node, one coordinate at a time. Before the
/// grid search the objective is probed along 8 fixed rays at radii 2*a_max
/// and 10*a_max; growth between them beyond the margin returns +infinity.
ControlSearchResult maximize_over_controls(const std::function<double(const Vec&)>& objective, int dim,
                                           double a_max, const HamiltonianOptions& options = {});

/// H(x,t,q,X) = sup_alpha { -<b,q> - ell - Tr(sigma sigma^T X) }.
/// Throws DimensionMismatch for wrong sizes or a control-free problem, and
/// NonCoercive when nu <= 0 or the control radius is undefined.
ExtendedReal hamiltonian_eval(const ProblemSpec& spec, const Vec& x, double t, const Vec& q, const Mat& X,
                              const HamiltonianOptions& options = {});

/// The 8 probe directions used for divergence detection in R^dim.
std::vector<Vec> probe_directions(int dim);

}  // namespace hjb
