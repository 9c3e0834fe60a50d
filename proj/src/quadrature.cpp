#include "subnls/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <string>

#include "subnls/errors.hpp"

namespace subnls {

namespace {

constexpr double kAbsTol = 1e-10;
constexpr double kRelTol = 1e-8;
constexpr unsigned kMaxDepth = 15;
// integrands of the form t ln t^2 defeat the Kronrod error estimate at the
// origin, so intervals starting at 0 are cut into geometric pieces first
constexpr int kOriginPieces = 24;
constexpr double kOriginRatio = 0.25;

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Piece {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

Piece gk(const std::function<double(double)>& f, double a, double b) {
  Piece p;
  p.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, kMaxDepth, 1e-2 * kRelTol,
                                                                          &p.error, &p.l1);
  return p;
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_adaptive(f, b, a);
  Piece total;
  if (a == 0.0) {
    double hi = b;
    for (int k = 0; k < kOriginPieces; ++k) {
      const double lo = hi * kOriginRatio;
      const auto p = gk(f, lo, hi);
      total.value += p.value;
      total.error += p.error;
      total.l1 += p.l1;
      hi = lo;
    }
    const auto p = gk(f, 0.0, hi);
    total.value += p.value;
    total.error += p.error;
    total.l1 += p.l1;
  } else {
    total = gk(f, a, b);
  }
  if (!std::isfinite(total.value) || total.error > std::max(kAbsTol, kRelTol * total.l1)) {
    throw QuadratureError("quadrature on [" + fmt_g(a) + ", " + fmt_g(b) + "] did not converge (error estimate " +
                          fmt_g(total.error) + ")");
  }
  return total.value;
}

}  // namespace subnls
