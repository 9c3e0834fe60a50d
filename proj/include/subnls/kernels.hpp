#pragma once

#include <cstddef>
#include <span>

namespace subnls {

class Nonlinearity;
class RadialGrid;

/// Kernel implementation selector. Serial is the reference; OpenMP splits the
/// node range into fixed-size blocks and combines block sums in index order, so
/// its results do not depend on the thread count.
enum class Backend { Serial, OpenMP };

/// Totals of one nonlinear sweep over the nodes.
struct NonlinearSums {
  double potential = 0.0;  // sum_i w_i G^eps(u_i)
  double moment = 0.0;     // sum_i w_i g^eps(u_i) u_i
};

namespace kernels {

inline constexpr std::size_t kBlock = 256;

namespace serial {

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double kinetic(const RadialGrid& grid, std::span<const double> u);
void laplacian(const RadialGrid& grid, std::span<const double> u, std::span<double> out);
/// Writes g^eps(u_i) into `g_out` (may be empty) and returns the weighted sums.
NonlinearSums nonlinear(const Nonlinearity& spec, double eps, std::span<const double> w,
                        std::span<const double> u, std::span<double> g_out);

}  // namespace serial

namespace omp {

double weighted_dot(std::span<const double> w, std::span<const double> a, std::span<const double> b);
double kinetic(const RadialGrid& grid, std::span<const double> u);
void laplacian(const RadialGrid& grid, std::span<const double> u, std::span<double> out);
NonlinearSums nonlinear(const Nonlinearity& spec, double eps, std::span<const double> w,
                        std::span<const double> u, std::span<double> g_out);

}  // namespace omp

double weighted_dot(Backend b, std::span<const double> w, std::span<const double> x, std::span<const double> y);
double kinetic(Backend b, const RadialGrid& grid, std::span<const double> u);
void laplacian(Backend b, const RadialGrid& grid, std::span<const double> u, std::span<double> out);
NonlinearSums nonlinear(Backend b, const Nonlinearity& spec, double eps, std::span<const double> w,
                        std::span<const double> u, std::span<double> g_out);

}  // namespace kernels
}  // namespace subnls
