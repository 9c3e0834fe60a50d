#include <omp.h>

#include <algorithm>
#include <exception>
#include <vector>

#include "subnls/grid.hpp"
#include "subnls/kernels.hpp"
#include "subnls/nonlinearity.hpp"

namespace subnls::kernels {

namespace omp {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

// Sums f(i) over [0, n): each fixed block is summed serially, blocks are
// combined in order afterwards, so the rounding is thread-count independent.
template <class F>
double blocked_sum(std::size_t n, F&& f) {
  const std::size_t nb = block_count(n);
  std::vector<double> partial(nb, 0.0);
  const long long nbl = static_cast<long long>(nb);
#pragma omp parallel for schedule(static) if (nb > 1 && !omp_in_parallel())
  for (long long b = 0; b < nbl; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b) {
  return blocked_sum(w.size(), [&](std::size_t i) { return w[i] * a[i] * b[i]; });
}

double kinetic(const RadialGrid& grid, std::span<const double> u) {
  const auto c = grid.face_coefficients();
  const std::size_t n = u.size();
  return blocked_sum(n, [&](std::size_t i) {
    const double next = i + 1 < n ? u[i + 1] : 0.0;
    const double d = next - u[i];
    return c[i] * d * d;
  });
}

void laplacian(const RadialGrid& grid, std::span<const double> u, std::span<double> out) {
  const auto w = grid.weights();
  const auto c = grid.face_coefficients();
  const long long n = static_cast<long long>(u.size());
#pragma omp parallel for schedule(static) if (n > static_cast<long long>(kBlock) && !omp_in_parallel())
  for (long long ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double next = ii + 1 < n ? u[i + 1] : 0.0;
    double flux = c[i] * (next - u[i]);
    if (i > 0) flux -= c[i - 1] * (u[i] - u[i - 1]);
    out[i] = flux / w[i];
  }
}

NonlinearSums nonlinear(const Nonlinearity& spec, double eps, std::span<const double> w,
                        std::span<const double> u, std::span<double> g_out) {
  const std::size_t n = u.size();
  const std::size_t nb = block_count(n);
  std::vector<double> pot(nb, 0.0), mom(nb, 0.0);
  // custom nonlinearities may throw from quadrature; exceptions must not leave the region
  std::vector<std::exception_ptr> errors(nb);
  const long long nbl = static_cast<long long>(nb);
#pragma omp parallel for schedule(static) if (nb > 1 && !omp_in_parallel())
  for (long long b = 0; b < nbl; ++b) {
    const auto bi = static_cast<std::size_t>(b);
    const std::size_t lo = bi * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double p = 0.0, m = 0.0;
    try {
      for (std::size_t i = lo; i < hi; ++i) {
        const double ge = spec.g_eps(u[i], eps);
        if (!g_out.empty()) g_out[i] = ge;
        p += w[i] * spec.G_eps(u[i], eps);
        m += w[i] * ge * u[i];
      }
    } catch (...) {
      errors[bi] = std::current_exception();
    }
    pot[bi] = p;
    mom[bi] = m;
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  NonlinearSums s;
  for (std::size_t b = 0; b < nb; ++b) {
    s.potential += pot[b];
    s.moment += mom[b];
  }
  return s;
}

}  // namespace omp

double weighted_dot(Backend b, std::span<const double> w, std::span<const double> x, std::span<const double> y) {
  return b == Backend::Serial ? serial::weighted_dot(w, x, y) : omp::weighted_dot(w, x, y);
}

double kinetic(Backend b, const RadialGrid& grid, std::span<const double> u) {
  return b == Backend::Serial ? serial::kinetic(grid, u) : omp::kinetic(grid, u);
}

void laplacian(Backend b, const RadialGrid& grid, std::span<const double> u, std::span<double> out) {
  if (b == Backend::Serial)
    serial::laplacian(grid, u, out);
  else
    omp::laplacian(grid, u, out);
}

NonlinearSums nonlinear(Backend b, const Nonlinearity& spec, double eps, std::span<const double> w,
                        std::span<const double> u, std::span<double> g_out) {
  return b == Backend::Serial ? serial::nonlinear(spec, eps, w, u, g_out) : omp::nonlinear(spec, eps, w, u, g_out);
}

}  // namespace subnls::kernels
