#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "subnls/kernels.hpp"

namespace subnls {

/// Uniform radial discretization of a ball of radius r_max in R^N.
///
/// Nodes r_i = i h, i = 0..n, with h = r_max/(n+1); node 0 is the origin and
/// r_{n+1} = r_max carries the Dirichlet value 0. Each node owns the spherical
/// shell between its neighbouring midpoints, so the quadrature weight is the
/// exact shell volume (= omega_{N-1} r_i^{N-1} h + O(h^3)). Fluxes live on the
/// midpoints r_{i+1/2}. With these choices the discrete Laplacian is symmetric
/// in the weighted inner product and kinetic(u) = -<Lap u, u>_w holds exactly.
class RadialGrid {
 public:
  RadialGrid(int dim, double r_max, int n);

  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  int interior_nodes() const { return n_; }
  /// Number of unknowns (origin plus interior nodes).
  std::size_t size() const { return static_cast<std::size_t>(n_) + 1; }
  double h() const { return h_; }
  double r(std::size_t i) const { return static_cast<double>(i) * h_; }
  /// Surface area of the unit sphere S^{N-1}.
  double sphere_area() const { return omega_; }

  std::span<const double> weights() const { return weights_; }
  /// omega r_{i+1/2}^{N-1} / h for faces i = 0..n (face n touches the boundary).
  std::span<const double> face_coefficients() const { return faces_; }
  /// Volume of the half cell [r_{n+1/2}, r_max] attached to the Dirichlet node.
  double boundary_weight() const { return boundary_weight_; }
  double ball_volume() const;

 private:
  int dim_;
  double r_max_;
  int n_;
  double h_;
  double omega_;
  std::vector<double> weights_;
  std::vector<double> faces_;
  double boundary_weight_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr make_grid(int dim, double r_max, int n);

/// Surface area of the unit sphere in R^N, 2 pi^{N/2} / Gamma(N/2).
double unit_sphere_area(int dim);

/// Real radial profile on a grid; value-like, cheap to copy.
struct RadialField {
  GridPtr grid;
  std::vector<double> values;

  RadialField() = default;
  explicit RadialField(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
  RadialField(GridPtr g, std::vector<double> v);

  static RadialField sample(GridPtr g, const std::function<double(double)>& f);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> view() const { return values; }
  std::span<double> view() { return values; }

  RadialField& operator*=(double c);
  RadialField& operator+=(const RadialField& o);
  RadialField& operator-=(const RadialField& o);
  double max_abs() const;
};

RadialField operator*(double c, RadialField u);
RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);

/// sum_i w_i u_i v_i
double dot(const RadialField& u, const RadialField& v, Backend b = Backend::OpenMP);
double norm(const RadialField& u, Backend b = Backend::OpenMP);

double mass(const RadialField& u, Backend b = Backend::OpenMP);
/// int |grad u|^2 (not halved).
double kinetic(const RadialField& u, Backend b = Backend::OpenMP);
double integrate(const RadialField& u, const std::function<double(double)>& h);
RadialField laplacian_radial(const RadialField& u, Backend b = Backend::OpenMP);

/// Smallest eigenvalue of -Lap with the Dirichlet condition at r_max (Sturm bisection).
double lowest_dirichlet_eigenvalue(const RadialGrid& grid);

/// Solve (shift - Lap) x = rhs on the grid (shift > 0); symmetric tridiagonal in the weighted form.
RadialField solve_shifted_laplacian(const RadialField& rhs, double shift);

}  // namespace subnls
