#include "subnls/nonlinearity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "subnls/errors.hpp"
#include "subnls/quadrature.hpp"

namespace subnls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude logarithmic terms are replaced by their limit value 0.
constexpr double kTiny = 1e-300;

double sgn(double s) { return s < 0.0 ? -1.0 : 1.0; }

// Bisection in log t for a sign change of f on [exp(xlo), exp(xhi)].
template <class F>
double bisect_log(F&& f, double xlo, double xhi) {
  double flo = f(std::exp(xlo));
  for (int it = 0; it < 200; ++it) {
    const double xm = 0.5 * (xlo + xhi);
    const double fm = f(std::exp(xm));
    if ((fm < 0.0) == (flo < 0.0)) {
      xlo = xm;
      flo = fm;
    } else {
      xhi = xm;
    }
    if (xhi - xlo <= 1e-15 * std::max(1.0, std::abs(xlo))) break;
  }
  return std::exp(0.5 * (xlo + xhi));
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Logarithmic: return "log";
    case Family::LogPlusPower: return "log_power";
    case Family::Saturation: return "saturation";
    case Family::PowerSublinear: return "power_sublinear";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Inconclusive: return "numerically-inconclusive";
  }
  return "unknown";
}

static void check_dim(int dim) {
  if (dim < 2) throw DomainError("spatial dimension must be >= 2");
}

Nonlinearity Nonlinearity::logarithmic(int dim, double alpha) {
  check_dim(dim);
  if (!(alpha > 0.0)) throw DomainError("logarithmic nonlinearity needs alpha > 0");
  Nonlinearity n;
  n.family_ = Family::Logarithmic;
  n.dim_ = dim;
  n.alpha_ = alpha;
  n.intervals_ = {{0.0, 1.0, -1}, {1.0, kInf, +1}};
  return n;
}

Nonlinearity Nonlinearity::log_power(int dim, double alpha, double mu, double p) {
  check_dim(dim);
  if (!(alpha > 0.0)) throw DomainError("log_power needs alpha > 0");
  if (!(p > 2.0)) throw DomainError("log_power needs p > 2");
  if (dim >= 3 && p > 2.0 * dim / (dim - 2.0)) throw DomainError("log_power needs p <= 2* for N >= 3");
  if (!std::isfinite(mu)) throw DomainError("log_power needs finite mu");
  Nonlinearity n;
  n.family_ = Family::LogPlusPower;
  n.dim_ = dim;
  n.alpha_ = alpha;
  n.mu_ = mu;
  n.p_ = p;

  // sign of g(t)/t = alpha ln t^2 + mu t^{p-2}
  auto h = [alpha, mu, p](double t) { return alpha * (2.0 * std::log(t)) + mu * std::pow(t, p - 2.0); };
  if (mu == 0.0) {
    n.intervals_ = {{0.0, 1.0, -1}, {1.0, kInf, +1}};
  } else if (mu > 0.0) {
    const double t1 = bisect_log(h, -745.0, 0.0);
    n.intervals_ = {{0.0, t1, -1}, {t1, kInf, +1}};
  } else {
    const double tc = std::pow(2.0 * alpha / (-mu * (p - 2.0)), 1.0 / (p - 2.0));
    if (h(tc) <= 0.0) {
      n.intervals_ = {{0.0, kInf, -1}};
    } else {
      const double xc = std::log(tc);
      double xhi = xc + 1.0;
      while (h(std::exp(xhi)) > 0.0) xhi = xc + 2.0 * (xhi - xc);
      const double t1 = bisect_log(h, -745.0, xc);
      const double t2 = bisect_log(h, xc, xhi);
      n.intervals_ = {{0.0, t1, -1}, {t1, t2, +1}, {t2, kInf, -1}};
    }
  }
  return n;
}

Nonlinearity Nonlinearity::saturation(int dim) {
  check_dim(dim);
  Nonlinearity n;
  n.family_ = Family::Saturation;
  n.dim_ = dim;
  n.intervals_ = {{0.0, kInf, +1}};
  return n;
}

Nonlinearity Nonlinearity::power_sublinear(int dim, double omega) {
  check_dim(dim);
  if (!(omega > 0.0 && omega < 1.0)) throw DomainError("power_sublinear needs 0 < omega < 1");
  Nonlinearity n;
  n.family_ = Family::PowerSublinear;
  n.dim_ = dim;
  n.omega_ = omega;
  n.intervals_ = {{0.0, kInf, -1}};
  return n;
}

Nonlinearity Nonlinearity::custom(int dim, ScalarFn g, ScalarFn G) {
  check_dim(dim);
  if (!g) throw DomainError("custom nonlinearity needs g");
  Nonlinearity n;
  n.family_ = Family::Custom;
  n.dim_ = dim;
  n.custom_g_ = std::move(g);
  n.custom_G_ = std::move(G);
  n.locate_custom_roots();
  return n;
}

// Sign changes are searched on a log grid over [1e-12, 1e8], 20 nodes per decade.
// Integration pieces are split at them so the max(., 0) integrands have no kinks.
void Nonlinearity::locate_custom_roots() {
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    auto k = [this, sign](double t) { return sign * custom_g_(sign * t); };
    auto& roots = custom_roots_[side];
    roots.clear();
    constexpr int kPerDecade = 20;
    double x_prev = std::log(1e-12);
    double k_prev = k(1e-12);
    for (int i = 1; i <= 20 * kPerDecade; ++i) {
      const double x = std::log(1e-12) + i * std::log(10.0) / kPerDecade;
      const double kv = k(std::exp(x));
      if (!std::isfinite(kv)) throw DomainError("custom g is not finite at " + std::to_string(sign * std::exp(x)));
      if ((kv > 0.0 && k_prev < 0.0) || (kv < 0.0 && k_prev > 0.0)) roots.push_back(bisect_log(k, x_prev, x));
      x_prev = x;
      k_prev = kv;
    }
  }
}

double Nonlinearity::primitive_between(double sign, double a, double b, Part part, double eps) const {
  if (b <= a) return 0.0;
  if (sign != 1.0 && sign != -1.0) throw DomainError("primitive_between needs sign = +1 or -1");
  std::vector<double> cuts{a};
  if (family_ == Family::Custom) {
    for (double r : custom_roots_[sign > 0 ? 0 : 1])
      if (r > a && r < b) cuts.push_back(r);
  } else {
    for (const auto& iv : intervals_)
      if (iv.lo > a && iv.lo < b) cuts.push_back(iv.lo);
  }
  if (part == Part::NegativeCut && eps > a && eps < b) cuts.push_back(eps);
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(b);

  auto k = [this, sign](double t) { return sign * g(sign * t); };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    if (hi <= lo) continue;
    const double mid = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
    const double km = k(mid);
    switch (part) {
      case Part::Full: acc += integrate_adaptive(k, lo, hi); break;
      case Part::Positive:
        if (km > 0.0) acc += integrate_adaptive(k, lo, hi);
        break;
      case Part::NegativeCut:
        if (km < 0.0) {
          if (eps > 0.0 && hi <= eps)
            acc -= integrate_adaptive([&k, eps](double t) { return t / eps * k(t); }, lo, hi);
          else
            acc -= integrate_adaptive(k, lo, hi);
        }
        break;
    }
  }
  return acc;
}

double Nonlinearity::sobolev_exponent() const {
  return dim_ == 2 ? kInf : 2.0 * dim_ / (dim_ - 2.0);
}

// ---- closed forms on t >= 0 ------------------------------------------------

double Nonlinearity::g_pos(double t) const {
  if (t < kTiny) return 0.0;
  switch (family_) {
    case Family::Logarithmic: return alpha_ * t * (2.0 * std::log(t));
    case Family::LogPlusPower: return alpha_ * t * (2.0 * std::log(t)) + mu_ * std::pow(t, p_ - 1.0);
    case Family::Saturation: return t * t * t / (1.0 + t * t);
    case Family::PowerSublinear: return -std::pow(t, omega_);
    case Family::Custom: break;
  }
  return custom_g_(t);
}

double Nonlinearity::G_pos(double t) const {
  if (t < kTiny) return 0.0;
  const double t2 = t * t;
  switch (family_) {
    case Family::Logarithmic: return 0.5 * alpha_ * ((2.0 * std::log(t)) - 1.0) * t2;
    case Family::LogPlusPower:
      return 0.5 * alpha_ * ((2.0 * std::log(t)) - 1.0) * t2 + mu_ / p_ * std::pow(t, p_);
    case Family::Saturation: {
      if (t2 < 1e-3) {
        // (x - log1p x)/2 by series, x = t^2
        const double x = t2;
        return 0.5 * x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * (0.2 - x / 6.0))));
      }
      return 0.5 * (t2 - std::log1p(t2));
    }
    case Family::PowerSublinear: return -std::pow(t, omega_ + 1.0) / (omega_ + 1.0);
    case Family::Custom: break;
  }
  return G(t);
}

double Nonlinearity::M_pos(double t) const {
  if (t < kTiny) return 0.0;
  const double t3 = t * t * t;
  switch (family_) {
    case Family::Logarithmic: return alpha_ * (t3 / 3.0 * (2.0 * std::log(t)) - 2.0 * t3 / 9.0);
    case Family::LogPlusPower:
      return alpha_ * (t3 / 3.0 * (2.0 * std::log(t)) - 2.0 * t3 / 9.0) + mu_ * std::pow(t, p_ + 1.0) / (p_ + 1.0);
    case Family::Saturation: return t3 / 3.0 - t + std::atan(t);
    case Family::PowerSublinear: return -std::pow(t, omega_ + 2.0) / (omega_ + 2.0);
    case Family::Custom: break;
  }
  return 0.0;
}

double Nonlinearity::G_plus_pos(double t) const {
  double acc = 0.0;
  for (const auto& iv : intervals_) {
    if (iv.sign < 0 || t <= iv.lo) continue;
    acc += G_pos(std::min(t, iv.hi)) - G_pos(iv.lo);
  }
  return acc;
}

double Nonlinearity::G_minus_pos(double t) const {
  double acc = 0.0;
  for (const auto& iv : intervals_) {
    if (iv.sign > 0 || t <= iv.lo) continue;
    acc -= G_pos(std::min(t, iv.hi)) - G_pos(iv.lo);
  }
  return acc;
}

double Nonlinearity::G_minus_eps_pos(double t, double eps) const {
  double acc = 0.0;
  for (const auto& iv : intervals_) {
    if (iv.sign > 0 || t <= iv.lo) continue;
    const double a = iv.lo;
    const double b = std::min(t, iv.hi);
    // ramp part: int_a^{min(b,eps)} (tau/eps)(-g) = -(M(.) - M(a))/eps
    if (a < eps) acc -= (M_pos(std::min(b, eps)) - M_pos(a)) / eps;
    // plateau part
    if (b > eps) acc -= G_pos(b) - G_pos(std::max(a, eps));
  }
  return acc;
}

// ---- public pointwise API -------------------------------------------------

double Nonlinearity::g(double s) const {
  if (family_ == Family::Custom) return custom_g_(s);
  return sgn(s) * g_pos(std::abs(s));
}

double Nonlinearity::G(double s) const {
  if (family_ == Family::Custom) {
    if (custom_G_) return custom_G_(s);
    return primitive_between(sgn(s), 0.0, std::abs(s), Part::Full);
  }
  return G_pos(std::abs(s));
}

double Nonlinearity::g_plus(double s) const {
  const double v = g(s);
  return s * v > 0.0 ? v : 0.0;
}

double Nonlinearity::g_minus(double s) const {
  const double v = g(s);
  return s * v < 0.0 ? -v : 0.0;
}

double Nonlinearity::G_plus(double s) const {
  if (family_ != Family::Custom) return G_plus_pos(std::abs(s));
  return primitive_between(sgn(s), 0.0, std::abs(s), Part::Positive);
}

double Nonlinearity::G_minus(double s) const {
  if (family_ != Family::Custom) return G_minus_pos(std::abs(s));
  return primitive_between(sgn(s), 0.0, std::abs(s), Part::NegativeCut);
}

double Nonlinearity::custom_G_minus_eps(double s, double eps) const {
  return primitive_between(sgn(s), 0.0, std::abs(s), Part::NegativeCut, eps);
}

double Nonlinearity::G_minus_eps(double s, double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
  if (family_ == Family::Custom) return custom_G_minus_eps(s, eps);
  return G_minus_eps_pos(std::abs(s), eps);
}

double Nonlinearity::g_eps(double s, double eps) const {
  if (eps == 0.0) return g(s);
  const double v = g(s);
  if (s * v >= 0.0) return v;  // g_- = 0 here
  const double phi = std::min(std::abs(s) / eps, 1.0);
  return phi * v;  // g_+ = 0, g_- = -v
}

double Nonlinearity::G_eps(double s, double eps) const {
  if (eps == 0.0) return G(s);
  if (family_ == Family::Custom) return G_plus(s) - custom_G_minus_eps(s, eps);
  const double t = std::abs(s);
  return G_plus_pos(t) - G_minus_eps_pos(t, eps);
}

double phi_eps(double s, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
  return std::min(std::abs(s) / eps, 1.0);
}

SplitValues eval_split(const Nonlinearity& spec, double s) {
  if (!std::isfinite(s)) throw DomainError("eval_split needs finite s");
  SplitValues v;
  v.g = spec.g(s);
  v.g_plus = s * v.g > 0.0 ? v.g : 0.0;
  v.g_minus = v.g_plus - v.g;
  v.G = spec.G(s);
  v.G_plus = spec.G_plus(s);
  v.G_minus = spec.G_minus(s);
  return v;
}

double G_minus_eps(const Nonlinearity& spec, double s, double eps) { return spec.G_minus_eps(s, eps); }

// ---- thresholds -----------------------------------------------------------

double mu_threshold(double alpha, double p) {
  if (!(alpha > 0.0)) throw DomainError("mu_threshold needs alpha > 0");
  if (!(p > 2.0)) throw DomainError("mu_threshold needs p > 2");
  return -alpha * p / (p - 2.0) * std::exp(-p / 2.0);
}

double gtilde_max(double alpha, double mu, double p) {
  if (!(alpha > 0.0)) throw DomainError("gtilde_max needs alpha > 0");
  if (!(p > 2.0)) throw DomainError("gtilde_max needs p > 2");
  if (!(mu < 0.0)) throw DomainError("gtilde_max needs mu < 0");
  // ln((alpha p/(mu(2-p)))^{2/(p-2)}) written as a product to avoid overflow
  const double log_arg = std::log(alpha * p / (mu * (2.0 - p)));
  return 0.5 * alpha * (2.0 / (p - 2.0) * log_arg - 1.0) - alpha / (p - 2.0);
}

EtaEstimate eta_coefficient(const Nonlinearity& spec) {
  const double crit = 2.0 + 4.0 / spec.dim();
  switch (spec.family()) {
    case Family::LogPlusPower: {
      if (spec.mu() <= 0.0) return {0.0, false};
      if (std::abs(spec.p() - crit) <= 1e-12) return {spec.mu() / spec.p(), false};
      return {spec.p() > crit ? kInf : 0.0, false};
    }
    case Family::Logarithmic:
    case Family::Saturation:
    case Family::PowerSublinear: return {0.0, false};
    case Family::Custom: break;
  }
  double tail = 0.0;
  for (double s : {1e8, -1e8}) tail = std::max(tail, spec.G_plus(s) / std::pow(std::abs(s), crit));
  return {tail, true};
}

// ---- assumption sampling --------------------------------------------------

bool AssumptionReport::any_fails() const {
  return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.verdict == Verdict::Fails; });
}

const AssumptionCheck& AssumptionReport::operator[](const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no assumption named " + name);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// G_+ sampled on increasing |s| points for one sign; custom families accumulate
// quadrature piecewise so each sample costs one short integral.
std::vector<double> sample_G_plus(const Nonlinearity& spec, const std::vector<double>& mags, double sign) {
  std::vector<double> out(mags.size());
  if (spec.closed_form()) {
    for (std::size_t k = 0; k < mags.size(); ++k) out[k] = spec.G_plus(sign * mags[k]);
    return out;
  }
  double acc = spec.G_plus(sign * mags.front());
  out[0] = acc;
  for (std::size_t k = 1; k < mags.size(); ++k) {
    acc += spec.primitive_between(sign, mags[k - 1], mags[k], Nonlinearity::Part::Positive);
    out[k] = acc;
  }
  return out;
}

std::vector<double> sample_G(const Nonlinearity& spec, const std::vector<double>& mags, double sign) {
  std::vector<double> out(mags.size());
  if (spec.closed_form()) {
    for (std::size_t k = 0; k < mags.size(); ++k) out[k] = spec.G(sign * mags[k]);
    return out;
  }
  double acc = spec.G(sign * mags.front());
  out[0] = acc;
  for (std::size_t k = 1; k < mags.size(); ++k) {
    acc += spec.primitive_between(sign, mags[k - 1], mags[k], Nonlinearity::Part::Full);
    out[k] = acc;
  }
  return out;
}

std::vector<double> decades(int k0, int k1) {
  std::vector<double> v;
  for (int k = k0; k <= k1; ++k) v.push_back(std::pow(10.0, k));
  return v;
}

AssumptionCheck check_g0(const Nonlinearity& spec) {
  AssumptionCheck c{"g0", Verdict::Holds, ""};
  const double g0 = spec.g(0.0);
  if (std::abs(g0) > kTiny) return {"g0", Verdict::Fails, "g(0) = " + fmt(g0)};
  for (double s = -1e6; s <= 1e6; s += 1e6 / 500.0)
    if (!std::isfinite(spec.g(s))) return {"g0", Verdict::Fails, "g not finite at " + fmt(s)};
  const double near = std::max(std::abs(spec.g(1e-12)), std::abs(spec.g(-1e-12)));
  if (near > 1e-6) return {"g0", Verdict::Fails, "|g| near 0 is " + fmt(near)};
  c.detail = "g(0)=0, |g(1e-12)|=" + fmt(near);
  return c;
}

AssumptionCheck check_g1(const Nonlinearity& spec) {
  double rG_first = 0, rG_last = 0, rG_max = 0, rg_first = 0, rg_last = 0;
  for (double sign : {1.0, -1.0}) {
    std::vector<double> mags;
    for (int k = 12; k >= 2; --k) mags.push_back(std::pow(10.0, -k));
    const auto Gp = sample_G_plus(spec, mags, sign);
    // mags ascending: index 0 is 1e-12 (closest to 0), last is 1e-2
    const std::size_t L = mags.size() - 1;
    const double s_near = mags[0], s_far = mags[L];
    rG_last = std::max(rG_last, std::abs(Gp[0]) / (s_near * s_near));
    rG_first = std::max(rG_first, std::abs(Gp[L]) / (s_far * s_far));
    for (std::size_t k = 0; k <= L; ++k) rG_max = std::max(rG_max, std::abs(Gp[k]) / (mags[k] * mags[k]));
    rg_last = std::max(rg_last, spec.g_plus(sign * s_near) / (sign * s_near));
    rg_first = std::max(rg_first, spec.g_plus(sign * s_far) / (sign * s_far));
  }
  const std::string detail = "G+/s^2: " + fmt(rG_first) + " -> " + fmt(rG_last) + ", g+/s: " + fmt(rg_first) +
                             " -> " + fmt(rg_last);
  if (rg_last > 100.0 * std::max(1.0, rg_first)) return {"g1", Verdict::Fails, detail};
  if (rG_last > 1e-8 && rG_last >= 0.5 * rG_first) return {"g1", Verdict::Fails, detail};
  if ((rG_last <= 1e-6 * std::max(1.0, rG_max) || rG_last <= 1e-12) && rg_last <= 10.0 * std::max(1.0, rg_first))
    return {"g1", Verdict::Holds, detail};
  return {"g1", Verdict::Inconclusive, detail};
}

AssumptionCheck check_g2(const Nonlinearity& spec) {
  const int N = spec.dim();
  if (N >= 3) {
    const double e = (N + 2.0) / (N - 2.0);
    double R6 = 0, R8 = 0;
    for (double sign : {1.0, -1.0}) {
      R6 = std::max(R6, std::abs(spec.g(sign * 1e6)) / std::pow(1e6, e));
      R8 = std::max(R8, std::abs(spec.g(sign * 1e8)) / std::pow(1e8, e));
    }
    const double growth = R6 > 0 ? R8 / R6 : (R8 > 0 ? kInf : 0.0);
    const std::string detail = "|g|/|s|^(2*-1): " + fmt(R6) + " -> " + fmt(R8);
    if (growth <= 1.0 + 1e-6) return {"g2", Verdict::Holds, detail};
    if (growth >= 1.5) return {"g2", Verdict::Fails, detail};
    return {"g2", Verdict::Inconclusive, detail};
  }
  // N = 2: ln|g(s)|/s^2 must stay below 4 pi
  const double four_pi = 4.0 * M_PI;
  std::array<double, 3> q{};
  const std::array<double, 3> ss{10.0, 20.0, 40.0};
  for (std::size_t k = 0; k < ss.size(); ++k) {
    const double gv = std::max(std::abs(spec.g(ss[k])), std::abs(spec.g(-ss[k])));
    q[k] = gv > 0.0 ? std::log(gv) / (ss[k] * ss[k]) : -kInf;
  }
  const std::string detail = "ln|g|/s^2 at s=40: " + fmt(q[2]);
  if (q[2] > four_pi) return {"g2", Verdict::Fails, detail};
  if (q[2] < 0.5 * four_pi && q[2] <= q[1]) return {"g2", Verdict::Holds, detail};
  return {"g2", Verdict::Inconclusive, detail};
}

AssumptionCheck check_g3(const Nonlinearity& spec) {
  const double crit = 2.0 + 4.0 / spec.dim();
  const auto mags = decades(2, 8);
  std::vector<double> r(mags.size(), 0.0);
  for (double sign : {1.0, -1.0}) {
    const auto Gp = sample_G_plus(spec, mags, sign);
    for (std::size_t k = 0; k < mags.size(); ++k) r[k] = std::max(r[k], std::abs(Gp[k]) / std::pow(mags[k], crit));
  }
  const double rmax = *std::max_element(r.begin(), r.end());
  const double r6 = r[4], r8 = r.back();
  const std::string detail = "G+/|s|^(2+4/N): " + fmt(r.front()) + " -> " + fmt(r8);
  if (!std::isfinite(r8)) return {"g3", Verdict::Fails, detail};
  if (r8 <= 1e-12 || r8 <= 1e-3 * rmax) return {"g3", Verdict::Holds, detail};
  if (r8 >= 0.95 * r6) return {"g3", Verdict::Fails, detail};
  return {"g3", Verdict::Inconclusive, detail};
}

// Log-grid scan of G over |s| in [1e-6, 1e6], refined by golden section around the best node.
AssumptionCheck check_g4(const Nonlinearity& spec, std::optional<double>& xi0, double& best_G) {
  constexpr int kPerDecade = 100;
  std::vector<double> mags;
  for (int k = 0; k <= 12 * kPerDecade; ++k) mags.push_back(std::pow(10.0, -6.0 + k / double(kPerDecade)));
  best_G = -kInf;
  double best_s = 0.0;
  std::size_t best_k = 0;
  double best_sign = 1.0;
  for (double sign : {1.0, -1.0}) {
    const auto Gv = sample_G(spec, mags, sign);
    for (std::size_t k = 0; k < mags.size(); ++k) {
      if (Gv[k] > best_G) {
        best_G = Gv[k];
        best_s = sign * mags[k];
        best_k = k;
        best_sign = sign;
      }
    }
  }
  // golden-section refinement in log|s| between neighbouring nodes
  if (best_k > 0 && best_k + 1 < mags.size()) {
    double a = std::log(mags[best_k - 1]), b = std::log(mags[best_k + 1]);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double x) { return spec.G(best_sign * std::exp(x)); };
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80; ++it) {
      if (fc > fd) {
        b = d; d = c; fd = fc; c = b - gr * (b - a); fc = f(c);
      } else {
        a = c; c = d; fc = fd; d = a + gr * (b - a); fd = f(d);
      }
    }
    const double x = 0.5 * (a + b);
    const double fx = f(x);
    if (fx > best_G) {
      best_G = fx;
      best_s = best_sign * std::exp(x);
    }
  }
  const std::string detail = "max G = " + fmt(best_G) + " at s = " + fmt(best_s);
  if (best_G > 0.0) {
    xi0 = best_s;
    return {"g4", Verdict::Holds, detail};
  }
  if (best_G > -1e-12) return {"g4", Verdict::Inconclusive, detail};
  return {"g4", Verdict::Fails, detail};
}

}  // namespace

AssumptionReport check_assumptions(const Nonlinearity& spec) {
  AssumptionReport rep;
  rep.checks.push_back(check_g0(spec));
  rep.checks.push_back(check_g1(spec));
  rep.checks.push_back(check_g2(spec));
  rep.checks.push_back(check_g3(spec));
  rep.checks.push_back(check_g4(spec, rep.xi0, rep.max_G_found));
  return rep;
}

ThresholdReport threshold_report(const Nonlinearity& spec) {
  ThresholdReport t;
  t.mu_star = std::numeric_limits<double>::quiet_NaN();
  t.gtilde_max = kInf;
  if (spec.family() == Family::LogPlusPower) {
    t.mu_star = mu_threshold(spec.alpha(), spec.p());
    if (spec.mu() < 0.0) t.gtilde_max = gtilde_max(spec.alpha(), spec.mu(), spec.p());
  }
  std::optional<double> xi0;
  double best = 0.0;
  const auto c = check_g4(spec, xi0, best);
  t.g4_holds = c.verdict == Verdict::Holds;
  t.xi0 = xi0;
  t.eta = eta_coefficient(spec).value;
  return t;
}

}  // namespace subnls
