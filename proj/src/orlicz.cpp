#include "subnls/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "subnls/errors.hpp"

namespace subnls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kKnot = std::exp(-3.0);

std::vector<double> log_samples(double lo, double hi, int per_decade) {
  std::vector<double> s;
  const double k0 = std::log10(lo), k1 = std::log10(hi);
  const int n = static_cast<int>(std::lround((k1 - k0) * per_decade));
  for (int i = 0; i <= n; ++i) s.push_back(std::pow(10.0, k0 + (k1 - k0) * i / n));
  return s;
}

}  // namespace

std::string to_string(NFamily f) {
  switch (f) {
    case NFamily::LogMatched: return "log_matched";
    case NFamily::LogMatchedPowerTail: return "log_matched_tail";
    case NFamily::PureQ: return "pure_q";
    case NFamily::Custom: return "custom";
  }
  return "unknown";
}

NFunction NFunction::log_matched(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("log_matched needs alpha > 0");
  NFunction A;
  A.family_ = NFamily::LogMatched;
  A.alpha_ = alpha;
  A.sample_bounds();
  return A;
}

NFunction NFunction::log_matched_power_tail(double alpha, double p) {
  if (!(alpha > 0.0)) throw DomainError("log_matched_tail needs alpha > 0");
  if (!(p > 2.0)) throw DomainError("log_matched_tail needs p > 2");
  NFunction A;
  A.family_ = NFamily::LogMatchedPowerTail;
  A.alpha_ = alpha;
  A.p_ = p;
  A.sample_bounds();
  return A;
}

NFunction NFunction::pure_q(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw DomainError("pure_q needs q > 1");
  NFunction A;
  A.family_ = NFamily::PureQ;
  A.q_ = q;
  A.sample_bounds();
  return A;
}

NFunction NFunction::custom(ScalarFn Af, ScalarFn af) {
  if (!Af) throw DomainError("custom N-function needs A");
  NFunction A;
  A.family_ = NFamily::Custom;
  A.custom_A_ = std::move(Af);
  A.custom_a_ = std::move(af);
  A.sample_bounds();
  return A;
}

double NFunction::knot() const {
  return family_ == NFamily::LogMatched || family_ == NFamily::LogMatchedPowerTail ? kKnot : 0.0;
}

double NFunction::A(double s) const {
  const double t = std::abs(s);
  switch (family_) {
    case NFamily::LogMatched:
      if (t < kKnot) return t < 1e-300 ? 0.0 : -alpha_ * t * t * (2.0 * std::log(t));
      return 3.0 * alpha_ * t * t + 4.0 * alpha_ * kKnot * t - alpha_ * kKnot * kKnot;
    case NFamily::LogMatchedPowerTail:
      if (t < kKnot) return t < 1e-300 ? 0.0 : -alpha_ * t * t * (2.0 * std::log(t));
      return 10.0 * alpha_ / p_ * std::exp(3.0 * p_ - 6.0) * std::pow(t, p_) +
             2.0 * alpha_ * (3.0 - 5.0 / p_) * kKnot * kKnot;
    case NFamily::PureQ: return std::pow(t, q_) / q_;
    case NFamily::Custom: break;
  }
  return custom_A_(s);
}

double NFunction::a(double s) const {
  const double t = std::abs(s);
  const double sg = s < 0.0 ? -1.0 : 1.0;
  switch (family_) {
    case NFamily::LogMatched:
      if (t < kKnot) return t < 1e-300 ? 0.0 : -2.0 * alpha_ * s * ((2.0 * std::log(t)) + 1.0);
      return sg * (6.0 * alpha_ * t + 4.0 * alpha_ * kKnot);
    case NFamily::LogMatchedPowerTail:
      if (t < kKnot) return t < 1e-300 ? 0.0 : -2.0 * alpha_ * s * ((2.0 * std::log(t)) + 1.0);
      return sg * 10.0 * alpha_ * std::exp(3.0 * p_ - 6.0) * std::pow(t, p_ - 1.0);
    case NFamily::PureQ: return sg * std::pow(t, q_ - 1.0);
    case NFamily::Custom: break;
  }
  if (custom_a_) return custom_a_(s);
  if (s == 0.0) return 0.0;
  // fourth-order central difference with a step relative to |s|
  const double h = 1e-3 * t;
  const auto& f = custom_A_;
  return (-f(s + 2 * h) + 8 * f(s + h) - 8 * f(s - h) + f(s - 2 * h)) / (12 * h);
}

void NFunction::sample_bounds() {
  bounds_ = RatioBounds{};
  bounds_.s_lo = 1e-8;
  bounds_.s_hi = 1e8;
  double sup = 0.0, inf = kInf;
  for (double s : log_samples(bounds_.s_lo, bounds_.s_hi, 50)) {
    const double Av = A(s);
    const double r = Av > 0.0 ? s * a(s) / Av : kInf;
    sup = std::max(sup, r);
    inf = std::min(inf, r);
  }
  bounds_.c_delta = sup;
  bounds_.c_nabla = inf;
  bounds_.holds = std::isfinite(sup) && inf > 1.0;
}

double modular(const RadialField& u, const NFunction& A) {
  const auto w = u.grid->weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * A.A(u[i]);
  return acc;
}

double luxemburg_norm(const RadialField& u, const NFunction& A) {
  if (u.max_abs() == 0.0) return 0.0;
  auto m = [&](double kappa) {
    RadialField v = u;
    v *= 1.0 / kappa;
    return modular(v, A);
  };
  // geometric pre-scan for the first kappa with m(kappa) <= 1; m is nonincreasing in kappa
  double lo = 0.0, hi = 0.0;
  bool any_finite = false;
  for (int k = -12; k <= 12; ++k) {
    const double kappa = std::pow(10.0, k);
    const double mk = m(kappa);
    if (std::isfinite(mk)) any_finite = true;
    if (std::isfinite(mk) && mk <= 1.0) {
      hi = kappa;
      break;
    }
    lo = kappa;
  }
  if (!any_finite) throw DivergenceError("Luxemburg modular is not finite at any kappa in [1e-12, 1e12]");
  if (hi == 0.0) throw DivergenceError("Luxemburg norm exceeds 1e12");
  if (lo == 0.0) throw DivergenceError("Luxemburg norm is below 1e-12");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double mm = m(mid);
    if (std::isfinite(mm) && mm <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

RatioBounds check_delta2_nabla2(const NFunction& A) { return A.ratio_bounds(); }

ComplementaryGap complementary_gap(const NFunction& A, double s) {
  ComplementaryGap g;
  if (s == 0.0) return g;
  const double Av = A.A(s);
  g.gap = s * A.a(s) - Av;
  g.bound = (A.ratio_bounds().c_delta - 1.0) * Av;
  g.within = g.gap <= g.bound + 1e-12 * std::abs(g.bound);
  return g;
}

NFunctionReport check_nfunction(const NFunction& A) {
  NFunctionReport r;
  r.bounds = A.ratio_bounds();
  const auto s = log_samples(1e-8, 1e8, 20);
  r.nonnegative = std::all_of(s.begin(), s.end(), [&](double x) { return A.A(x) >= 0.0 && A.A(-x) >= 0.0; });
  r.even = std::all_of(s.begin(), s.end(), [&](double x) {
    return std::abs(A.A(x) - A.A(-x)) <= 1e-12 * std::abs(A.A(x));
  });
  auto second_diff_ok = [&](auto&& f) {
    for (double x : s) {
      const double h = 1e-3 * x;
      const double d2 = f(x + h) + f(x - h) - 2.0 * f(x);
      if (d2 < -1e-9 * std::abs(f(x))) return false;
    }
    return true;
  };
  r.convex = second_diff_ok([&](double x) { return A.A(x); });
  r.sa_convex = second_diff_ok([&](double x) { return x * A.a(x); });
  const double small0 = A.A(1e-8) / 1e-8, small1 = A.A(1e-6) / 1e-6;
  r.small_ratio_to_zero = small0 <= 0.5 * small1;
  const double big0 = A.A(1e6) / 1e6, big1 = A.A(1e8) / 1e8;
  r.large_ratio_to_inf = big1 >= 2.0 * big0;
  return r;
}

}  // namespace subnls
