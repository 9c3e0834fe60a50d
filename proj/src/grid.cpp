#include "subnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subnls/errors.hpp"

namespace subnls {

double unit_sphere_area(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

RadialGrid::RadialGrid(int dim, double r_max, int n) : dim_(dim), r_max_(r_max), n_(n) {
  if (dim < 2) throw DomainError("grid dimension must be >= 2");
  if (!(r_max > 0.0)) throw DomainError("r_max must be positive");
  if (n < 2) throw DomainError("grid needs at least 2 interior nodes");
  h_ = r_max / (n + 1);
  omega_ = unit_sphere_area(dim);
  const double N = dim;
  auto ball = [&](double r) { return omega_ / N * std::pow(r, N); };

  weights_.resize(size());
  faces_.resize(size());
  weights_[0] = ball(0.5 * h_);
  for (std::size_t i = 1; i < size(); ++i) weights_[i] = ball((i + 0.5) * h_) - ball((i - 0.5) * h_);
  for (std::size_t i = 0; i < size(); ++i) faces_[i] = omega_ * std::pow((i + 0.5) * h_, N - 1.0) / h_;
  boundary_weight_ = ball(r_max) - ball((n + 0.5) * h_);
}

double RadialGrid::ball_volume() const { return omega_ / dim_ * std::pow(r_max_, dim_); }

GridPtr make_grid(int dim, double r_max, int n) { return std::make_shared<const RadialGrid>(dim, r_max, n); }

// ---- fields ---------------------------------------------------------------

RadialField::RadialField(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw DomainError("field size does not match grid");
}

RadialField RadialField::sample(GridPtr g, const std::function<double(double)>& f) {
  RadialField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(g->r(i));
  return u;
}

RadialField& RadialField::operator*=(double c) {
  for (auto& v : values) v *= c;
  return *this;
}

RadialField& RadialField::operator+=(const RadialField& o) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& o) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
  return *this;
}

double RadialField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

RadialField operator*(double c, RadialField u) { return u *= c; }
RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }

// ---- integrals and operators ----------------------------------------------

double dot(const RadialField& u, const RadialField& v, Backend b) {
  return kernels::weighted_dot(b, u.grid->weights(), u.view(), v.view());
}

double norm(const RadialField& u, Backend b) { return std::sqrt(dot(u, u, b)); }

double mass(const RadialField& u, Backend b) { return dot(u, u, b); }

double kinetic(const RadialField& u, Backend b) { return kernels::kinetic(b, *u.grid, u.view()); }

double integrate(const RadialField& u, const std::function<double(double)>& h) {
  const auto w = u.grid->weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += w[i] * h(u[i]);
  return acc;
}

RadialField laplacian_radial(const RadialField& u, Backend b) {
  RadialField out(u.grid);
  kernels::laplacian(b, *u.grid, u.view(), out.view());
  return out;
}

double lowest_dirichlet_eigenvalue(const RadialGrid& grid) {
  // symmetrized tridiagonal V^{-1/2} S V^{-1/2}
  const auto w = grid.weights();
  const auto c = grid.face_coefficients();
  const std::size_t n = grid.size();
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = (c[i] + (i > 0 ? c[i - 1] : 0.0)) / w[i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = -c[i] / std::sqrt(w[i] * w[i + 1]);

  // number of eigenvalues below x from the signs of the LDL^T pivots
  auto count_below = [&](double x) {
    std::size_t count = 0;
    double q = d[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
      if (q == 0.0) q = 1e-300;
      q = d[i] - x - e[i - 1] * e[i - 1] / q;
      if (q < 0.0) ++count;
    }
    return count;
  };
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = d[i];
    if (i > 0) row += std::abs(e[i - 1]);
    if (i + 1 < n) row += std::abs(e[i]);
    hi = std::max(hi, row);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

RadialField solve_shifted_laplacian(const RadialField& rhs, double shift) {
  const auto& grid = *rhs.grid;
  const auto w = grid.weights();
  const auto c = grid.face_coefficients();
  const std::size_t n = grid.size();
  // (shift V + S) x = V rhs, S the stiffness matrix; Thomas algorithm
  std::vector<double> diag(n), upper(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = shift * w[i] + c[i] + (i > 0 ? c[i - 1] : 0.0);
    upper[i] = -c[i];
    y[i] = w[i] * rhs[i];
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double m = upper[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    y[i] -= m * y[i - 1];
  }
  RadialField x(rhs.grid);
  x[n - 1] = y[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (y[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace subnls
