#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subnls/grid.hpp"
#include "subnls/nonlinearity.hpp"

namespace subnls {

struct GridParams {
  double r_max = 20.0;
  int n = 2000;
};

struct StepControl {
  double initial_step = 1e-3;
  double backtrack = 0.5;     // step reduction factor per backtrack
  int max_backtracks = 60;
  int max_iterations = 200000;
  double armijo = 1e-4;       // sufficient-decrease constant
  double max_step = 1e6;
};

std::vector<double> default_eps_schedule();

struct SolveConfig {
  Nonlinearity spec = Nonlinearity::logarithmic(3, 1.0);
  GridParams grid;
  double rho = 1.0;
  std::vector<double> eps_schedule = default_eps_schedule();
  StepControl step;
  double tol_grad = 1e-7;   // on the weighted norm of the KKT residual
  double tol_mass = 1e-10;  // relative: on_sphere <=> mass >= rho^2 (1 - tol_mass)
  std::uint64_t seed = 0;   // 0: deterministic witness start; > 0: random start
  int rearrange_every = 0;  // 0 = off
  Backend backend = Backend::OpenMP;

  /// Throws ConfigError on an invalid configuration.
  void validate() const;
  GridPtr make_grid() const;
};

struct ResidualBundle {
  double pohozaev_rel = 0.0;
  double nehari_rel = 0.0;
  double kkt_norm = 0.0;  // weighted norm of -Lap u + lambda u - g^eps(u)
  bool sign_ok = true;
  bool monotone_ok = true;
  double boundary_leak = 0.0;  // max |u| on the outer 10% of the grid
};

struct SolverResult {
  RadialField u;
  double lambda = 0.0;
  double energy = 0.0;  // J_eps(u), or J(u) when eps == 0
  double eps = 0.0;     // 0 for the limit object
  double mass = 0.0;
  double kinetic = 0.0;
  int iterations = 0;
  bool converged = false;
  bool on_sphere = false;
  std::string status;  // "converged", "max-iterations", "collapsed"
  ResidualBundle diagnostics;
  std::vector<double> energy_history;  // J_eps after each accepted step
};

/// 1/2 kinetic(u) - sum_i w_i G^eps(u_i); eps == 0 gives the unregularized J.
double energy_eps(const RadialField& u, const Nonlinearity& spec, double eps, Backend b = Backend::OpenMP);

/// Weighted-L2 gradient -Lap u - g^eps(u).
RadialField grad_energy_eps(const RadialField& u, const Nonlinearity& spec, double eps,
                            Backend b = Backend::OpenMP);

/// Nearest point of the disc {mass <= rho^2} in the weighted L2 metric.
RadialField project_disc(const RadialField& u, double rho);

/// Lagrange multiplier from the Nehari pairing, [sum w g^eps(u) u - kinetic(u)] / mass(u).
double extract_lambda(const RadialField& u, const Nonlinearity& spec, double eps, Backend b = Backend::OpenMP);

/// Deterministic start: a smoothed plateau at a level where G > 0, dilated to mass rho^2.
/// Among candidate levels the lowest-energy dilate is returned. Falls back to a
/// Gaussian of mass rho^2 (with a warning) when G <= 0 at every candidate level.
RadialField initial_guess(const Nonlinearity& spec, GridPtr grid, double rho);

/// Random positive mixture of Gaussian bumps with mass rho^2.
RadialField random_start(GridPtr grid, double rho, std::uint64_t seed);

/// Discrete decreasing rearrangement of |u| (cells filled outward by volume; mass preserved).
RadialField decreasing_rearrangement(const RadialField& u);

/// Projected gradient descent for J_eps over the disc from `start`.
SolverResult solve_ground_state(const SolveConfig& config, double eps, const RadialField& start);
/// Same, from initial_guess (seed 0) or random_start (seed > 0).
SolverResult solve_ground_state(const SolveConfig& config, double eps);

struct ContinuationResult {
  std::vector<SolverResult> stages;
  SolverResult limit;             // unregularized energy and multiplier on the last iterate
  bool aborted = false;           // a stage did not converge
  bool energies_monotone = true;  // c_eps nondecreasing as eps decreases
  bool bounded_by_limit = true;   // every c_eps <= J(limit)
  std::string message;
};

ContinuationResult continuation(const SolveConfig& config);

struct EnergyMapPoint {
  double rho = 0.0;
  double c_value = 0.0;
  double eps = 0.0;  // 0 for values of the unregularized limit
  bool converged = false;
};

/// One continuation per rho, run in parallel over points with `jobs` workers (0 = default).
std::vector<EnergyMapPoint> energy_map(const SolveConfig& config, const std::vector<double>& rho_list,
                                       int jobs = 0, std::vector<ContinuationResult>* details = nullptr);

}  // namespace subnls
