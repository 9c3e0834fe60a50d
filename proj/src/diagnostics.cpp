#include "subnls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subnls/errors.hpp"
#include "subnls/gn.hpp"

namespace subnls {

namespace {

double rel(double lhs, double rhs) { return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-30); }

NonlinearSums sums_of(const SolverResult& r, const Nonlinearity& spec, std::span<double> g_out = {}) {
  return kernels::nonlinear(Backend::OpenMP, spec, r.eps, r.u.grid->weights(), r.u.view(), g_out);
}

}  // namespace

double pohozaev_residual(const SolverResult& result, const Nonlinearity& spec) {
  if (!result.u.grid) return 0.0;
  const int N = result.u.grid->dim();
  const double K = kinetic(result.u), m = mass(result.u);
  const auto s = sums_of(result, spec);
  return rel((N - 2) * K + N * result.lambda * m, 2.0 * N * s.potential);
}

double nehari_residual(const SolverResult& result, const Nonlinearity& spec) {
  if (!result.u.grid) return 0.0;
  const double K = kinetic(result.u), m = mass(result.u);
  const auto s = sums_of(result, spec);
  return rel(K + result.lambda * m, s.moment);
}

double energy_identity_residual(const SolverResult& result, int dim) {
  return rel(result.energy, result.kinetic / dim - 0.5 * result.lambda * result.mass);
}

ShapeCheck shape_check(const RadialField& u, double tol) {
  ShapeCheck c;
  if (u.size() == 0) return c;
  const double inf = u.max_abs();
  const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
  c.sign_ok = *lo * *hi >= -tol * inf * inf;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[i - 1]) + tol * inf) {
      c.monotone_ok = false;
      break;
    }
  return c;
}

double boundary_leak(const RadialField& u) {
  double leak = 0.0;
  const double r0 = 0.9 * u.grid->r_max();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u.grid->r(i) >= r0) leak = std::max(leak, std::abs(u[i]));
  return leak;
}

ResidualBundle residual_bundle(const SolverResult& result, const Nonlinearity& spec) {
  ResidualBundle b;
  if (!result.u.grid) return b;
  b.pohozaev_rel = pohozaev_residual(result, spec);
  b.nehari_rel = nehari_residual(result, spec);
  std::vector<double> g(result.u.size());
  sums_of(result, spec, g);
  RadialField r = laplacian_radial(result.u);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = -r[i] + result.lambda * result.u[i] - g[i];
  b.kkt_norm = norm(r);
  const auto shape = shape_check(result.u);
  b.sign_ok = shape.sign_ok;
  b.monotone_ok = shape.monotone_ok;
  b.boundary_leak = boundary_leak(result.u);
  return b;
}

MassCondition mass_condition(const Nonlinearity& spec, double rho) {
  if (eta_coefficient(spec).value == 0.0) return mass_condition(spec, rho, 0.0, 0.0);
  const auto gn = gn_constant(spec.dim(), 2.0 + 4.0 / spec.dim());
  return mass_condition(spec, rho, gn.value, gn.uncertainty);
}

MassCondition mass_condition(const Nonlinearity& spec, double rho, double gn, double gn_uncertainty) {
  if (!(rho > 0.0)) throw DomainError("mass_condition needs rho > 0");
  const int N = spec.dim();
  MassCondition c;
  c.eta = eta_coefficient(spec).value;
  c.gn = gn;
  c.gn_uncertainty = gn_uncertainty;
  if (c.eta == 0.0) {
    c.rho_star = std::numeric_limits<double>::infinity();
    return c;
  }
  const double coeff = 2.0 * c.eta * std::pow(gn, 2.0 + 4.0 / N);
  c.value = coeff * std::pow(rho, 4.0 / N);
  c.holds = c.value < 1.0;
  c.rho_star = std::pow(1.0 / coeff, N / 4.0);
  return c;
}

std::string to_string(Existence e) {
  switch (e) {
    case Existence::ExistsLargeRho: return "exists_large_rho";
    case Existence::Boundary: return "boundary";
    case Existence::NoNontrivial: return "no_nontrivial";
  }
  return "unknown";
}

NonexistenceReport nonexistence_verdict(double alpha, double mu, double p, int dim) {
  if (dim < 1) throw DomainError("dimension must be positive");
  if (!(alpha > 0.0)) throw DomainError("nonexistence_verdict needs alpha > 0");
  if (!(p > 2.0)) throw DomainError("nonexistence_verdict needs p > 2");
  if (dim >= 3 && p > 2.0 * dim / (dim - 2.0)) throw DomainError("nonexistence_verdict needs p <= 2N/(N-2)");
  if (!std::isfinite(mu)) throw DomainError("mu must be finite");
  NonexistenceReport r;
  r.mu_star = mu_threshold(alpha, p);
  const double d = mu - r.mu_star;
  if (std::abs(d) <= 1e-12 * std::abs(r.mu_star)) {
    r.verdict = Existence::Boundary;
    r.note = "mu at the threshold: G <= 0 everywhere, so no nontrivial solution exists";
  } else if (d < 0.0) {
    r.verdict = Existence::NoNontrivial;
    r.note = "mu below the threshold: G < 0 for s != 0, so no nontrivial solution exists";
  } else {
    r.verdict = Existence::ExistsLargeRho;
    if (mu <= 0.0)
      r.note = "threshold < mu <= 0: a ground state exists for rho large enough";
    else if (p < 2.0 + 4.0 / dim)
      r.note = "mu > 0 with p < 2 + 4/N: a ground state exists for rho large enough";
    else
      r.note = "mu > 0 with p >= 2 + 4/N: existence additionally needs the mass condition";
  }
  return r;
}

bool EnergyMapReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

const PropertyCheck& EnergyMapReport::operator[](const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw DomainError("no property check named " + name);
}

EnergyMapReport energy_map_properties(const std::vector<EnergyMapPoint>& points, double rel_tol) {
  std::vector<std::pair<double, double>> curve;  // (m = rho^2, c)
  for (const auto& p : points)
    if (p.converged && std::isfinite(p.c_value)) curve.emplace_back(p.rho * p.rho, p.c_value);
  if (curve.size() < 3) throw DomainError("energy_map_properties needs at least 3 converged points");
  std::sort(curve.begin(), curve.end());

  double cmax = 0.0;
  for (const auto& [m, c] : curve) cmax = std::max(cmax, std::abs(c));
  const double tol = rel_tol * cmax;
  const double m_lo = curve.front().first, m_hi = curve.back().first;
  const double span_tol = 1e-12 * m_hi;

  auto in_range = [&](double m) { return m >= m_lo - span_tol && m <= m_hi + span_tol; };
  auto c_at = [&](double m) {
    m = std::clamp(m, m_lo, m_hi);
    auto it = std::lower_bound(curve.begin(), curve.end(), std::make_pair(m, -std::numeric_limits<double>::infinity()));
    if (it == curve.begin()) return it->second;
    if (it == curve.end()) return curve.back().second;
    if (it->first == m) return it->second;
    const auto& [m1, c1] = *(it - 1);
    const auto& [m2, c2] = *it;
    return c1 + (c2 - c1) * (m - m1) / (m2 - m1);
  };

  auto make = [&](std::string name) {
    PropertyCheck c;
    c.name = std::move(name);
    c.tolerance = tol;
    c.margin = std::numeric_limits<double>::infinity();
    return c;
  };
  auto record = [](PropertyCheck& c, double slack) {
    c.margin = std::min(c.margin, slack);
    ++c.cases;
  };

  auto mono = make("monotone");
  for (std::size_t k = 1; k < curve.size(); ++k) record(mono, curve[k - 1].second - curve[k].second);

  auto sub = make("subadditive");
  for (std::size_t i = 0; i < curve.size(); ++i)
    for (std::size_t j = i; j < curve.size(); ++j) {
      const double m = curve[i].first + curve[j].first;
      if (in_range(m)) record(sub, curve[i].second + curve[j].second - c_at(m));
    }

  auto scal = make("scaling");
  for (std::size_t i = 0; i < curve.size(); ++i)
    for (std::size_t j = i + 1; j < curve.size(); ++j) {
      const double s = curve[j].first / curve[i].first;
      record(scal, s * curve[i].second - curve[j].second);
    }

  auto div = make("divergence_proxy");
  if (in_range(0.5 * m_hi)) record(div, 2.0 * c_at(0.5 * m_hi) - tol - curve.back().second);

  EnergyMapReport rep;
  for (auto* c : {&mono, &sub, &scal}) {
    if (c->cases == 0) c->margin = 0.0;
    c->pass = c->margin >= -tol;
    rep.checks.push_back(*c);
  }
  div.pass = div.cases > 0 && div.margin > 0.0;
  if (div.cases == 0) div.margin = 0.0;
  rep.checks.push_back(div);
  return rep;
}

}  // namespace subnls
