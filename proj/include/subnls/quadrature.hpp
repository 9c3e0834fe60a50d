#pragma once

#include <functional>

namespace subnls {

/// Adaptive 15-point Gauss-Kronrod quadrature of f over [a, b] (b < a allowed).
///
/// Accepts when the error estimate is below max(1e-10, 1e-8 * int |f|). Throws
/// QuadratureError when that is not reached within 2^15 subintervals.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b);

}  // namespace subnls
