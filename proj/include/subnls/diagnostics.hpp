#pragma once

#include <string>
#include <vector>

#include "subnls/minimizer.hpp"
#include "subnls/nonlinearity.hpp"

namespace subnls {

/// Relative residual of (N-2) K + N lambda m = 2N int G^eps(u), with G^eps = G when result.eps == 0.
double pohozaev_residual(const SolverResult& result, const Nonlinearity& spec);

/// Relative residual of K + lambda m = int g^eps(u) u.
double nehari_residual(const SolverResult& result, const Nonlinearity& spec);

/// Relative residual of J = K/N - lambda m/2, which follows from the Pohozaev identity.
double energy_identity_residual(const SolverResult& result, int dim);

struct ShapeCheck {
  bool sign_ok = true;
  bool monotone_ok = true;
};

/// sign_ok: min(u) max(u) >= -tol |u|_inf^2; monotone_ok: |u_i| nonincreasing up to tol |u|_inf.
ShapeCheck shape_check(const RadialField& u, double tol = 1e-8);

/// max |u| on the outer 10% of the grid.
double boundary_leak(const RadialField& u);

ResidualBundle residual_bundle(const SolverResult& result, const Nonlinearity& spec);

struct MassCondition {
  double value = 0.0;  // 2 eta C^{2+4/N} rho^{4/N}
  bool holds = true;   // value < 1
  double eta = 0.0;
  double gn = 0.0;
  double gn_uncertainty = 0.0;
  double rho_star = 0.0;  // rho where value = 1; +inf when eta = 0
};

/// Uses eta_coefficient and gn_constant(N, 2 + 4/N).
MassCondition mass_condition(const Nonlinearity& spec, double rho);
/// Same with a precomputed constant and its uncertainty.
MassCondition mass_condition(const Nonlinearity& spec, double rho, double gn, double gn_uncertainty = 0.0);

enum class Existence { ExistsLargeRho, Boundary, NoNontrivial };
std::string to_string(Existence e);

struct NonexistenceReport {
  Existence verdict = Existence::ExistsLargeRho;
  double mu_star = 0.0;
  std::string note;  // extra hypotheses behind the existence side
};

/// Compares mu with the threshold -alpha p/(p-2) e^{-p/2} within 1e-12 (relative to |threshold|).
NonexistenceReport nonexistence_verdict(double alpha, double mu, double p, int dim);

struct PropertyCheck {
  std::string name;
  bool pass = true;
  double margin = 0.0;  // worst slack; negative when violated
  double tolerance = 0.0;
  int cases = 0;
};

struct EnergyMapReport {
  std::vector<PropertyCheck> checks;  // monotone, subadditive, scaling, divergence_proxy
  bool all_pass() const;
  const PropertyCheck& operator[](const std::string& name) const;
};

/// Checks on the sampled curve rho -> c(rho). Targets off the rho-grid are interpolated
/// linearly in m = rho^2 and skipped outside the sampled range. `rel_tol` scales max |c|.
/// Throws DomainError with fewer than 3 converged points.
EnergyMapReport energy_map_properties(const std::vector<EnergyMapPoint>& points, double rel_tol = 1e-2);

}  // namespace subnls
