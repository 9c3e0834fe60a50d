#pragma once

#include <functional>
#include <string>

#include "subnls/grid.hpp"

namespace subnls {

enum class NFamily { LogMatched, LogMatchedPowerTail, PureQ, Custom };

std::string to_string(NFamily f);

/// Sampled bounds of s a(s) / A(s); Delta_2 needs a finite sup, nabla_2 an inf > 1.
struct RatioBounds {
  double c_delta = 0.0;  // sup
  double c_nabla = 0.0;  // inf
  double s_lo = 0.0;     // sampled range
  double s_hi = 0.0;
  bool holds = false;
};

/// An even convex N-function A with derivative a = A'. Immutable.
///
/// LogMatched glues -alpha s^2 ln s^2 (|s| < e^-3) to a quadratic with a linear
/// term; LogMatchedPowerTail replaces the quadratic by a |s|^p tail. Both are C^1
/// at the knot. PureQ is |s|^q / q.
class NFunction {
 public:
  using ScalarFn = std::function<double(double)>;

  static NFunction log_matched(double alpha);
  static NFunction log_matched_power_tail(double alpha, double p);
  static NFunction pure_q(double q);
  /// `a` may be empty; a central-difference derivative is used then.
  static NFunction custom(ScalarFn A, ScalarFn a = {});

  NFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  double p() const { return p_; }
  double q() const { return q_; }

  double A(double s) const;
  double a(double s) const;

  /// Ratio bounds over log-spaced |s| in [1e-8, 1e8], computed at construction.
  const RatioBounds& ratio_bounds() const { return bounds_; }

  /// Knot of the two-piece families (e^-3); 0 for the others.
  double knot() const;

 private:
  NFunction() = default;
  void sample_bounds();

  NFamily family_ = NFamily::Custom;
  double alpha_ = 0.0;
  double p_ = 0.0;
  double q_ = 0.0;
  ScalarFn custom_A_;
  ScalarFn custom_a_;
  RatioBounds bounds_;
};

/// inf{kappa > 0 : sum_i w_i A(u_i / kappa) <= 1}; 0 for the zero field.
/// Throws DivergenceError when the modular is not finite at any tested kappa.
double luxemburg_norm(const RadialField& u, const NFunction& A);

/// sum_i w_i A(u_i)
double modular(const RadialField& u, const NFunction& A);

/// Empirical Delta_2 / nabla_2 constants (same as A.ratio_bounds()).
RatioBounds check_delta2_nabla2(const NFunction& A);

struct ComplementaryGap {
  double gap = 0.0;    // s a(s) - A(s), the complementary function at a(s)
  double bound = 0.0;  // (C_delta - 1) A(s)
  bool within = true;
};

ComplementaryGap complementary_gap(const NFunction& A, double s);

/// N-function axioms and the convexity of s a(s), checked by sampling.
struct NFunctionReport {
  bool nonnegative = false;
  bool even = false;
  bool convex = false;
  bool small_ratio_to_zero = false;  // A(s)/s -> 0 as s -> 0
  bool large_ratio_to_inf = false;   // A(s)/s -> inf as s -> inf
  bool sa_convex = false;
  RatioBounds bounds;
  bool all() const {
    return nonnegative && even && convex && small_ratio_to_zero && large_ratio_to_inf && sa_convex && bounds.holds;
  }
};

NFunctionReport check_nfunction(const NFunction& A);

}  // namespace subnls
