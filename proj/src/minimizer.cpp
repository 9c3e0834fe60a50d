#include "subnls/minimizer.hpp"

#include <omp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "subnls/diagnostics.hpp"
#include "subnls/errors.hpp"

namespace subnls {

std::vector<double> default_eps_schedule() { return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4}; }

void SolveConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("rho must be positive");
  if (eps_schedule.empty()) throw ConfigError("eps_schedule must not be empty");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    const double e = eps_schedule[i];
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("eps_schedule entries must lie in (0,1)");
    if (i > 0 && !(e < eps_schedule[i - 1])) throw ConfigError("eps_schedule must be strictly decreasing");
  }
  if (!(grid.r_max > 0.0)) throw ConfigError("r_max must be positive");
  if (grid.n < 2) throw ConfigError("n must be at least 2");
  if (!(tol_grad > 0.0)) throw ConfigError("tol_grad must be positive");
  if (!(tol_mass > 0.0)) throw ConfigError("tol_mass must be positive");
  if (rearrange_every < 0) throw ConfigError("rearrange_every must be >= 0");
  if (!(step.initial_step > 0.0) || !(step.backtrack > 0.0 && step.backtrack < 1.0) || step.max_backtracks < 1 ||
      step.max_iterations < 1 || !(step.armijo > 0.0 && step.armijo < 1.0) || !(step.max_step > 0.0))
    throw ConfigError("invalid step control");
}

GridPtr SolveConfig::make_grid() const { return subnls::make_grid(spec.dim(), grid.r_max, grid.n); }

// ---- energy and gradient --------------------------------------------------

namespace {

struct Eval {
  double J = 0.0;
  double K = 0.0;
  double m = 0.0;
  double moment = 0.0;  // sum w g^eps(u) u
  RadialField grad;
};

Eval evaluate(const RadialField& u, const Nonlinearity& spec, double eps, Backend b) {
  Eval e;
  e.grad = RadialField(u.grid);
  std::vector<double> g(u.size());
  const auto sums = kernels::nonlinear(b, spec, eps, u.grid->weights(), u.view(), g);
  kernels::laplacian(b, *u.grid, u.view(), e.grad.view());
  for (std::size_t i = 0; i < u.size(); ++i) e.grad[i] = -e.grad[i] - g[i];
  e.K = kinetic(u, b);
  e.m = mass(u, b);
  e.moment = sums.moment;
  e.J = 0.5 * e.K - sums.potential;
  return e;
}

}  // namespace

double energy_eps(const RadialField& u, const Nonlinearity& spec, double eps, Backend b) {
  const auto sums = kernels::nonlinear(b, spec, eps, u.grid->weights(), u.view(), {});
  return 0.5 * kinetic(u, b) - sums.potential;
}

RadialField grad_energy_eps(const RadialField& u, const Nonlinearity& spec, double eps, Backend b) {
  return evaluate(u, spec, eps, b).grad;
}

RadialField project_disc(const RadialField& u, double rho) {
  const double m = mass(u);
  if (m <= rho * rho * (1.0 + 1e-14)) return u;  // rounding slack keeps the map idempotent
  RadialField v = u;
  v *= rho / std::sqrt(m);
  return v;
}

double extract_lambda(const RadialField& u, const Nonlinearity& spec, double eps, Backend b) {
  const double m = mass(u, b);
  if (!(m > 0.0)) throw DomainError("extract_lambda needs a nonzero field");
  const auto sums = kernels::nonlinear(b, spec, eps, u.grid->weights(), u.view(), {});
  return (sums.moment - kinetic(u, b)) / m;
}

// ---- starting points --------------------------------------------------------

namespace {

// Smoothed plateau: 1 on [0, core], cos^2 ramp of width `ramp`, 0 beyond.
struct ProfileShape {
  double core;
  double ramp;

  double operator()(double r) const {
    if (r <= core) return 1.0;
    if (r >= core + ramp) return 0.0;
    const double c = std::cos(0.5 * M_PI * (r - core) / ramp);
    return c * c;
  }
  double support() const { return core + ramp; }

  // int_{R^N} shape^2 dx: exact ball volume inside plus Simpson on the ramp
  double l2_mass(int dim) const {
    const double omega = unit_sphere_area(dim);
    const int n = 2000;
    const double h = ramp / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double r = core + i * h;
      const double f = std::pow((*this)(r), 2) * std::pow(r, dim - 1);
      s += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * f;
    }
    return omega / dim * std::pow(core, dim) + omega * s * h / 3.0;
  }
};

constexpr ProfileShape kShapes[] = {{4.0, 1.0}, {1.0, 1.0}, {0.0, 1.0}};

void normalize_mass(RadialField& u, double rho) {
  const double m = mass(u);
  if (m > 0.0) u *= rho / std::sqrt(m);
}

RadialField gaussian_start(GridPtr grid, double rho) {
  auto u = RadialField::sample(grid, [](double r) { return std::exp(-0.5 * r * r); });
  normalize_mass(u, rho);
  return u;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

RadialField initial_guess(const Nonlinearity& spec, GridPtr grid, double rho) {
  const int N = grid->dim();
  RadialField best;
  double best_J = std::numeric_limits<double>::infinity();
  for (const auto& shape : kShapes) {
    const double base_mass = shape.l2_mass(N);
    for (int k = -12; k <= 12; ++k) {
      const double level = std::pow(10.0, k / 4.0);
      if (!(spec.G(level) > 0.0)) continue;
      // u(sigma r) with sigma^N = |u|_2^2 / rho^2 has mass rho^2
      const double sigma = std::pow(level * level * base_mass / (rho * rho), 1.0 / N);
      const double support = shape.support() / sigma;
      if (support > 0.9 * grid->r_max() || support < 10.0 * grid->h()) continue;
      auto u = RadialField::sample(grid, [&](double r) { return level * shape(sigma * r); });
      normalize_mass(u, rho);
      const double J = energy_eps(u, spec, 0.0);
      if (J < best_J) {
        best_J = J;
        best = std::move(u);
      }
    }
  }
  if (best.grid) return best;
  spdlog::warn("no level with G > 0 fits the grid; starting from a Gaussian of mass rho^2");
  return gaussian_start(grid, rho);
}

RadialField random_start(GridPtr grid, double rho, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int terms = 1 + static_cast<int>(rng() % 3);
  RadialField u(grid);
  for (int t = 0; t < terms; ++t) {
    const double amp = 0.5 + uniform01(rng);
    const double width = 0.5 + 2.5 * uniform01(rng);
    const double center = 3.0 * uniform01(rng);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = (grid->r(i) - center) / width;
      u[i] += amp * std::exp(-x * x);
    }
  }
  normalize_mass(u, rho);
  return u;
}

RadialField decreasing_rearrangement(const RadialField& u) {
  const auto w = u.grid->weights();
  const std::size_t n = u.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(u[a]) > std::abs(u[b]); });
  double signed_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) signed_sum += w[i] * u[i];
  const double sign = signed_sum < 0.0 ? -1.0 : 1.0;

  // the level function places |u|^2 of the k-th largest value on a volume w[order[k]];
  // target cell j receives the average of that function over its own volume
  RadialField out(u.grid);
  std::size_t k = 0;
  double left = n > 0 ? w[order[0]] : 0.0;  // volume left in source piece k
  for (std::size_t j = 0; j < n; ++j) {
    double need = w[j], acc = 0.0;
    while (need > 0.0 && k < n) {
      const double take = std::min(need, left);
      acc += take * u[order[k]] * u[order[k]];
      need -= take;
      left -= take;
      if (left <= 0.0) {
        ++k;
        if (k < n) left = w[order[k]];
      }
    }
    out[j] = sign * std::sqrt(acc / w[j]);
  }
  return out;
}

// ---- descent ----------------------------------------------------------------

SolverResult solve_ground_state(const SolveConfig& config, double eps, const RadialField& start) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("solve_ground_state needs eps in (0,1)");
  const auto& spec = config.spec;
  const auto& sc = config.step;
  const Backend be = config.backend;
  const double rho2 = config.rho * config.rho;

  RadialField u = project_disc(start, config.rho);
  Eval ev = evaluate(u, spec, eps, be);
  double tau = sc.initial_step;

  SolverResult res;
  res.eps = eps;
  res.status = "max-iterations";
  res.energy_history.push_back(ev.J);

  int it = 0;
  for (; it < sc.max_iterations; ++it) {
    if (ev.m <= 1e-8 * rho2) {
      res.status = "collapsed";
      break;
    }
    const bool on_sphere = ev.m >= rho2 * (1.0 - config.tol_mass);
    const double lam = (ev.moment - ev.K) / ev.m;
    const double lam_hat = on_sphere ? std::max(0.0, lam) : 0.0;
    RadialField r = ev.grad;
    if (lam_hat != 0.0) r += lam_hat * u;
    if (norm(r, be) <= config.tol_grad) {
      res.status = "converged";
      break;
    }

    if (config.rearrange_every > 0 && it > 0 && it % config.rearrange_every == 0) {
      RadialField ur = decreasing_rearrangement(u);
      Eval er = evaluate(ur, spec, eps, be);
      if (er.J < ev.J) {
        u = std::move(ur);
        ev = std::move(er);
        res.energy_history.push_back(ev.J);
        continue;
      }
    }

    double t = tau;
    bool accepted = false;
    RadialField v;
    Eval evv;
    for (int bt = 0; bt < sc.max_backtracks; ++bt) {
      v = u;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= t * ev.grad[i];
      v = project_disc(v, config.rho);
      const RadialField d = v - u;
      const double slope = dot(ev.grad, d, be);
      evv = evaluate(v, spec, eps, be);
      // rounding level of J: near convergence the Armijo decrease drops below it
      const double noise = 1e-13 * (std::abs(ev.J) + ev.K);
      if (evv.J <= ev.J + sc.armijo * slope + noise) {
        accepted = true;
        break;
      }
      t *= sc.backtrack;
    }
    if (!accepted)
      throw StepFailure("energy increased after " + std::to_string(sc.max_backtracks) +
                        " backtracking steps at iteration " + std::to_string(it));

    // Barzilai-Borwein proposal from the change of the KKT residual
    const RadialField s = v - u;
    const double lam_v = evv.m > 0.0 ? (evv.moment - evv.K) / evv.m : 0.0;
    const bool v_sphere = evv.m >= rho2 * (1.0 - config.tol_mass);
    RadialField y = evv.grad - ev.grad;
    if (on_sphere && v_sphere) {
      const double l = std::max(0.0, 0.5 * (lam + lam_v));
      y += l * s;
    }
    const double ss = dot(s, s, be), sy = dot(s, y, be);
    tau = sy > 0.0 ? std::clamp(ss / sy, 1e-12, sc.max_step) : std::min(2.0 * t, sc.max_step);

    u = std::move(v);
    ev = std::move(evv);
    res.energy_history.push_back(ev.J);
  }

  res.u = u;
  res.iterations = it;
  res.energy = ev.J;
  res.mass = ev.m;
  res.kinetic = ev.K;
  res.lambda = ev.m > 0.0 ? (ev.moment - ev.K) / ev.m : 0.0;
  res.on_sphere = ev.m >= rho2 * (1.0 - config.tol_mass);
  res.converged = res.status == "converged";
  if (res.converged && ev.m < 1e-6 * rho2) {
    // stationary only because the field has nearly vanished
    res.converged = false;
    res.status = "collapsed";
  }
  res.diagnostics = residual_bundle(res, spec);
  spdlog::debug("eps={} status={} iterations={} J={} lambda={}", eps, res.status, it, res.energy, res.lambda);
  return res;
}

SolverResult solve_ground_state(const SolveConfig& config, double eps) {
  auto grid = config.make_grid();
  const RadialField start =
      config.seed == 0 ? initial_guess(config.spec, grid, config.rho) : random_start(grid, config.rho, config.seed);
  return solve_ground_state(config, eps, start);
}

// ---- continuation -----------------------------------------------------------

ContinuationResult continuation(const SolveConfig& config) {
  config.validate();
  auto grid = config.make_grid();
  RadialField u =
      config.seed == 0 ? initial_guess(config.spec, grid, config.rho) : random_start(grid, config.rho, config.seed);

  ContinuationResult out;
  int total_iterations = 0;
  for (double eps : config.eps_schedule) {
    auto stage = solve_ground_state(config, eps, u);
    total_iterations += stage.iterations;
    u = stage.u;
    const bool ok = stage.converged;
    const std::string status = stage.status;
    out.stages.push_back(std::move(stage));
    if (!ok) {
      out.aborted = true;
      std::ostringstream msg;
      msg << "stage eps=" << eps << " ended with status " << status;
      out.message = msg.str();
      break;
    }
  }

  SolverResult& lim = out.limit;
  lim.u = u;
  lim.eps = 0.0;
  lim.energy = energy_eps(u, config.spec, 0.0, config.backend);
  lim.mass = mass(u, config.backend);
  lim.kinetic = kinetic(u, config.backend);
  lim.lambda = lim.mass > 0.0 ? extract_lambda(u, config.spec, 0.0, config.backend) : 0.0;
  lim.iterations = total_iterations;
  lim.converged = !out.aborted;
  lim.on_sphere = out.stages.back().on_sphere;
  lim.status = out.aborted ? "aborted" : "converged";
  lim.diagnostics = residual_bundle(lim, config.spec);

  const double e_tol = 1e-9 * std::max(1.0, std::abs(lim.energy));
  for (std::size_t k = 1; k < out.stages.size(); ++k)
    if (out.stages[k].energy < out.stages[k - 1].energy - e_tol) out.energies_monotone = false;
  for (const auto& s : out.stages)
    if (s.energy > lim.energy + e_tol) out.bounded_by_limit = false;
  return out;
}

std::vector<EnergyMapPoint> energy_map(const SolveConfig& config, const std::vector<double>& rho_list, int jobs,
                                       std::vector<ContinuationResult>* details) {
  for (double r : rho_list)
    if (!(r > 0.0)) throw DomainError("energy_map needs positive rho values");
  const long long n = static_cast<long long>(rho_list.size());
  std::vector<EnergyMapPoint> points(rho_list.size());
  std::vector<ContinuationResult> runs(rho_list.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    SolveConfig c = config;
    c.rho = rho_list[i];
    EnergyMapPoint p;
    p.rho = c.rho;
    try {
      runs[i] = continuation(c);
      p.c_value = runs[i].limit.energy;
      p.eps = 0.0;
      p.converged = runs[i].limit.converged;
    } catch (const std::exception& e) {
      p.c_value = std::numeric_limits<double>::quiet_NaN();
      p.converged = false;
      runs[i].aborted = true;
      runs[i].message = e.what();
    }
    points[i] = p;
  }
  if (details) *details = std::move(runs);
  return points;
}

}  // namespace subnls
