// Serial reference kernels. Plain left-to-right loops; the OpenMP versions are
// tested against these.

#include "subnls/grid.hpp"
#include "subnls/kernels.hpp"
#include "subnls/nonlinearity.hpp"

namespace subnls::kernels::serial {

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * a[i] * b[i];
  return acc;
}

double kinetic(const RadialGrid& grid, std::span<const double> u) {
  const auto c = grid.face_coefficients();
  const std::size_t n = u.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double next = i + 1 < n ? u[i + 1] : 0.0;
    const double d = next - u[i];
    acc += c[i] * d * d;
  }
  return acc;
}

void laplacian(const RadialGrid& grid, std::span<const double> u, std::span<double> out) {
  const auto w = grid.weights();
  const auto c = grid.face_coefficients();
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double next = i + 1 < n ? u[i + 1] : 0.0;
    double flux = c[i] * (next - u[i]);
    if (i > 0) flux -= c[i - 1] * (u[i] - u[i - 1]);
    out[i] = flux / w[i];
  }
}

NonlinearSums nonlinear(const Nonlinearity& spec, double eps, std::span<const double> w,
                        std::span<const double> u, std::span<double> g_out) {
  NonlinearSums s;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ge = spec.g_eps(u[i], eps);
    if (!g_out.empty()) g_out[i] = ge;
    s.potential += w[i] * spec.G_eps(u[i], eps);
    s.moment += w[i] * ge * u[i];
  }
  return s;
}

}  // namespace subnls::kernels::serial
