#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace subnls {

enum class Family { Logarithmic, LogPlusPower, Saturation, PowerSublinear, Custom };

std::string to_string(Family family);

/// Pointwise values of g and its splitting g = g_+ - g_-, G = G_+ - G_-.
struct SplitValues {
  double G = 0.0;
  double G_plus = 0.0;
  double G_minus = 0.0;
  double g = 0.0;
  double g_plus = 0.0;
  double g_minus = 0.0;
};

/// Maximal interval of (0, inf) on which s*g(s) keeps one sign (+1 or -1).
/// `hi` may be +infinity.
struct SignInterval {
  double lo;
  double hi;
  int sign;
};

/// A nonlinearity g: R -> R together with its primitive and positive/negative splitting.
///
/// Builtin families are odd and carry hand-coded closed forms for G and for the
/// first moment M(t) = int_0^t tau g(tau) dtau, which is what the cutoff integral
/// G_-^eps reduces to on [0, eps]. Custom nonlinearities fall back to adaptive
/// Gauss-Kronrod quadrature. Instances are immutable and safe to share.
class Nonlinearity {
 public:
  using ScalarFn = std::function<double(double)>;

  static Nonlinearity logarithmic(int dim, double alpha);
  static Nonlinearity log_power(int dim, double alpha, double mu, double p);
  static Nonlinearity saturation(int dim);
  static Nonlinearity power_sublinear(int dim, double omega);
  /// `G` may be empty, in which case the primitive is obtained by quadrature.
  static Nonlinearity custom(int dim, ScalarFn g, ScalarFn G = {});

  Family family() const { return family_; }
  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double mu() const { return mu_; }
  double p() const { return p_; }
  double omega() const { return omega_; }
  bool closed_form() const { return family_ != Family::Custom; }
  /// Critical Sobolev exponent 2N/(N-2); +inf for N = 2.
  double sobolev_exponent() const;

  double g(double s) const;
  double G(double s) const;
  double g_plus(double s) const;
  double g_minus(double s) const;
  double G_plus(double s) const;
  double G_minus(double s) const;

  /// int_0^s phi_eps(t) g_-(t) dt. Requires 0 < eps < 1.
  double G_minus_eps(double s, double eps) const;
  /// g_+(s) - phi_eps(s) g_-(s). eps == 0 means no cutoff (returns g).
  double g_eps(double s, double eps) const;
  /// G_+(s) - G_-^eps(s). eps == 0 means no cutoff (returns G).
  double G_eps(double s, double eps) const;

  /// Sign structure of g on (0, inf); empty for Custom.
  const std::vector<SignInterval>& sign_intervals() const { return intervals_; }

  /// Which integrand of the splitting to integrate; see `primitive_between`.
  enum class Part { Full, Positive, NegativeCut };

  /// With k(t) = sign*g(sign*t), integrates over t in [a, b] (0 <= a <= b):
  /// k (Full), max(k, 0) (Positive) or phi_eps(t) max(-k, 0) (NegativeCut, eps = 0 meaning no cutoff).
  /// Thus G, G_+ and G_-^eps at s are the integrals over [0, |s|] with sign = sgn(s).
  double primitive_between(double sign, double a, double b, Part part, double eps = 0.0) const;

 private:
  Nonlinearity() = default;

  // closed forms on t >= 0 (builtin families only)
  double g_pos(double t) const;
  double G_pos(double t) const;
  double M_pos(double t) const;
  double G_plus_pos(double t) const;
  double G_minus_pos(double t) const;
  double G_minus_eps_pos(double t, double eps) const;

  double custom_G_minus_eps(double s, double eps) const;
  void locate_custom_roots();

  Family family_ = Family::Custom;
  int dim_ = 3;
  double alpha_ = 0.0;
  double mu_ = 0.0;
  double p_ = 0.0;
  double omega_ = 0.0;
  ScalarFn custom_g_;
  ScalarFn custom_G_;
  std::vector<SignInterval> intervals_;
  // sign changes of k(t) = sign*g(sign*t) found by scanning, for sign = +1 and -1
  std::vector<double> custom_roots_[2];
};

/// Cutoff ramp min(|s|/eps, 1); throws DomainError unless 0 < eps < 1.
double phi_eps(double s, double eps);

SplitValues eval_split(const Nonlinearity& spec, double s);
double G_minus_eps(const Nonlinearity& spec, double s, double eps);

enum class Verdict { Holds, Fails, Inconclusive };
std::string to_string(Verdict v);

struct AssumptionCheck {
  std::string name;  // "g0" .. "g4"
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;  // g0..g4 in order
  std::optional<double> xi0;            // witness with G(xi0) > 0
  double max_G_found = 0.0;

  bool any_fails() const;
  const AssumptionCheck& operator[](const std::string& name) const;
};

/// Sampling-based verdicts for (g0)-(g4).
AssumptionReport check_assumptions(const Nonlinearity& spec);

/// -alpha p/(p-2) e^{-p/2}: the largest mu for which alpha s ln s^2 + mu|s|^{p-2}s has G <= 0.
double mu_threshold(double alpha, double p);

/// max over s > 0 of (alpha/2)(ln s^2 - 1) + (mu/p) s^{p-2}; requires mu < 0.
double gtilde_max(double alpha, double mu, double p);

struct EtaEstimate {
  double value = 0.0;
  bool sampled = false;  // true when obtained by sampling rather than an exact limit
};

/// limsup_{|s|->inf} G_+(s)/|s|^{2+4/N}.
EtaEstimate eta_coefficient(const Nonlinearity& spec);

struct ThresholdReport {
  double mu_star = 0.0;     // NaN when the family has no (alpha, p) pair
  double gtilde_max = 0.0;  // +inf when mu >= 0
  bool g4_holds = false;
  std::optional<double> xi0;
  double eta = 0.0;
};

ThresholdReport threshold_report(const Nonlinearity& spec);

}  // namespace subnls
