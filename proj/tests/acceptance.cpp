// Acceptance run: one PASS/FAIL line per criterion, then supplementary lines.
// Exits 0 once every criterion has been evaluated; the verdicts are in the output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "subnls/diagnostics.hpp"
#include "subnls/gn.hpp"
#include "subnls/minimizer.hpp"
#include "subnls/orlicz.hpp"

using namespace subnls;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("CRITERION %d %s  %s: %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), detail.c_str());
  std::fflush(stdout);
}

void info(const std::string& title, const std::string& detail) {
  std::printf("SUPPLEMENT  %s: %s\n", title.c_str(), detail.c_str());
  std::fflush(stdout);
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

SolveConfig ground_state_config(double rho) {
  SolveConfig c;
  c.spec = Nonlinearity::log_power(3, 1.0, 0.0, 4.0);
  c.rho = rho;
  c.grid = {20.0, 2000};
  c.rearrange_every = 100;
  return c;
}

RadialField mixture(GridPtr g, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> U(-1.0, 1.0), W(0.3, 2.0), C(0.0, 4.0);
  RadialField u(g);
  for (int k = 0; k < 3; ++k) {
    const double a = scale * U(rng), w = W(rng), c = C(rng);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = (g->r(i) - c) / w;
      u[i] += a * std::exp(-x * x);
    }
  }
  return u;
}

// ---- 1 ----------------------------------------------------------------------

void threshold_reproduction() {
  const auto t0 = Clock::now();
  double worst_rel = 0.0, worst_gt = 0.0, worst_numeric = 0.0;
  int points = 0;
  for (double alpha : {0.25, 1.0, 2.0, 7.5})
    for (double p : {2.5, 3.0, 10.0 / 3.0, 4.0, 6.0}) {
      const double oracle = -alpha * p / (p - 2.0) * std::exp(-p / 2.0);
      const double mu = mu_threshold(alpha, p);
      worst_rel = std::max(worst_rel, std::abs(mu - oracle) / std::abs(oracle));
      worst_gt = std::max(worst_gt, std::abs(gtilde_max(alpha, mu, p)));
      // brute-force max of (alpha/2)(ln s^2 - 1) + (mu/p) s^{p-2} in log s
      const double numeric = oracle::golden_max(
          [&](double x) {
            const double s = std::exp(x);
            return 0.5 * alpha * (2.0 * x - 1.0) + oracle / p * std::pow(s, p - 2.0);
          },
          -5.0, 5.0);
      worst_numeric = std::max(worst_numeric, std::abs(numeric));
      ++points;
    }
  const double t = seconds_since(t0);
  report(1, points == 20 && worst_rel <= 1e-12 && worst_gt <= 1e-10 && t < 1.0, "threshold reproduction",
         fmt("%d points, max rel err %.2e (tol 1e-12), max |gtilde_max| at threshold %.2e (tol 1e-10), "
             "brute-force max %.2e, %.3f s (limit 1 s)",
             points, worst_rel, worst_gt, worst_numeric, t));
}

// ---- 2 and 3 --------------------------------------------------------------------

ContinuationResult timed_continuation(const SolveConfig& cfg, double& seconds) {
  const auto t0 = Clock::now();
  ContinuationResult res = continuation(cfg);
  seconds = seconds_since(t0);
  return res;
}

std::string ground_state_summary(const ContinuationResult& c, double rho) {
  const auto& r = c.limit;
  const double mass_rel = std::abs(r.mass - rho * rho) / (rho * rho);
  return fmt("converged=%d energy=%.6g lambda=%.6g mass_rel_dev=%.1e pohozaev=%.1e nehari=%.1e sign_ok=%d "
             "monotone_ok=%d stages=%zu",
             r.converged, r.energy, r.lambda, mass_rel, r.diagnostics.pohozaev_rel, r.diagnostics.nehari_rel,
             r.diagnostics.sign_ok, r.diagnostics.monotone_ok, c.stages.size());
}

bool ground_state_ok(const ContinuationResult& c, double rho) {
  const auto& r = c.limit;
  return !c.aborted && r.converged && r.energy < 0.0 && r.lambda > 0.0 &&
         std::abs(r.mass - rho * rho) <= 1e-6 * rho * rho && r.diagnostics.pohozaev_rel <= 1e-3 &&
         r.diagnostics.nehari_rel <= 1e-3 && r.diagnostics.sign_ok && r.diagnostics.monotone_ok;
}

// repeats the warm-started stages one by one to time them individually
double worst_stage_seconds(const SolveConfig& cfg) {
  auto grid = cfg.make_grid();
  RadialField u = initial_guess(cfg.spec, grid, cfg.rho);
  double worst = 0.0;
  for (double eps : cfg.eps_schedule) {
    const auto t0 = Clock::now();
    auto r = solve_ground_state(cfg, eps, u);
    worst = std::max(worst, seconds_since(t0));
    if (!r.converged) break;
    u = r.u;
  }
  return worst;
}

void ground_state_run() {
  const double rho = 10.0;
  const auto cfg = ground_state_config(rho);
  double total = 0.0;
  const auto c = timed_continuation(cfg, total);
  const double stage = worst_stage_seconds(cfg);
  const bool ok = ground_state_ok(c, rho) && stage <= 60.0 && total <= 600.0;
  std::string detail = ground_state_summary(c, rho) + fmt(", worst stage %.1f s, total %.1f s", stage, total);
  if (!c.message.empty()) detail += " [" + c.message + "]";
  report(2, ok, "ground state at rho=10", detail);
}

void eps_monotonicity() {
  const double rho = 25.0;
  const auto cfg = ground_state_config(rho);
  double total = 0.0;
  const auto c = timed_continuation(cfg, total);
  bool mono = !c.aborted && c.stages.size() == cfg.eps_schedule.size();
  double worst_drop = 0.0;
  for (std::size_t k = 1; k < c.stages.size(); ++k) {
    const double drop = c.stages[k - 1].energy - c.stages[k].energy;  // must be <= 0 up to rounding
    worst_drop = std::max(worst_drop, drop);
    if (drop > 1e-9 * std::abs(c.stages[k].energy)) mono = false;
  }
  double de = INFINITY, dl = INFINITY;
  if (c.stages.size() >= 2) {
    const auto& a = c.stages[c.stages.size() - 2];
    const auto& b = c.stages.back();
    de = std::abs(a.energy - b.energy) / std::abs(b.energy);
    dl = std::abs(a.lambda - b.lambda) / std::abs(b.lambda);
  }
  report(3, mono && de <= 1e-3 && dl <= 1e-3, "eps-monotonicity and limit (rho=25)",
         fmt("stages=%zu nondecreasing=%d (largest decrease %.2e), last-two rel diff energy %.2e lambda %.2e "
             "(tol 1e-3), bounded_by_limit=%d, %.1f s",
             c.stages.size(), mono, worst_drop, de, dl, c.bounded_by_limit, total));

  // the same run against the closed-form minimizer A exp(-r^2/2)
  const double m = rho * rho, L = std::log(m / std::pow(M_PI, 1.5));
  const double lam = L - 3.0, J = 0.5 * m * (4.0 - L);
  info("ground state at rho=25", ground_state_summary(c, rho) +
                                     fmt(", closed form lambda=%.6g energy=%.6g, rel err %.1e / %.1e, ok=%d", lam, J,
                                         std::abs(c.limit.lambda - lam) / lam,
                                         std::abs(c.limit.energy - J) / std::abs(J), ground_state_ok(c, rho)));
}

// ---- 4 ----------------------------------------------------------------------------

void energy_map_properties_run() {
  const auto cfg = ground_state_config(20.0);
  std::vector<double> rhos;
  for (int k = 0; k < 8; ++k) rhos.push_back(20.0 + 20.0 * k / 7.0);
  const auto t0 = Clock::now();
  const auto points = energy_map(cfg, rhos, 4);
  const double t = seconds_since(t0);
  int converged = 0;
  for (const auto& p : points) converged += p.converged;
  std::string detail = fmt("%d/8 converged, ", converged);
  bool ok = converged == 8;
  try {
    const auto rep = energy_map_properties(points, 1e-2);
    for (const auto& c : rep.checks)
      detail += fmt("%s %s (margin %.3g, tol %.3g, %d cases); ", c.name.c_str(), c.pass ? "pass" : "fail", c.margin,
                    c.tolerance, c.cases);
    ok = ok && rep.all_pass();
  } catch (const std::exception& e) {
    ok = false;
    detail += e.what();
  }
  ok = ok && t <= 1800.0;
  report(4, ok, "energy-map properties on rho in [20,40]", detail + fmt("%.1f s, --jobs 4", t));
}

// ---- 5 ----------------------------------------------------------------------------

void nonexistence_consistency() {
  const double mu = 2.0 * mu_threshold(1.0, 4.0);
  const auto verdict = nonexistence_verdict(1.0, mu, 4.0, 3);
  SolveConfig cfg = ground_state_config(10.0);
  cfg.grid = {10.0, 400};
  cfg.spec = Nonlinearity::log_power(3, 1.0, mu, 4.0);
  double best = INFINITY;
  bool saturating = false;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto c = continuation(cfg);
    for (const auto& s : c.stages) {
      best = std::min(best, s.energy);
      if (s.converged && s.on_sphere) saturating = true;
    }
    best = std::min(best, c.limit.energy);
    if (c.limit.converged && c.limit.on_sphere) saturating = true;
  }
  const bool analytic = verdict.verdict == Existence::NoNontrivial;
  const bool empirical = best >= -1e-6 && !saturating;
  report(5, analytic && empirical, "nonexistence consistency at mu = 2 mu*",
         fmt("verdict %s, best energy over 5 starts %.3e (>= -1e-6), sphere-saturating stationary point %s, "
             "agreement %s, %.1f s",
             to_string(verdict.verdict).c_str(), best, saturating ? "found" : "none",
             analytic == empirical ? "yes" : "NO", seconds_since(t0)));
}

// ---- 6 ----------------------------------------------------------------------------

void gradient_correctness() {
  const auto g = make_grid(3, 10.0, 500);
  const std::vector<Nonlinearity> specs{Nonlinearity::logarithmic(3, 1.0), Nonlinearity::log_power(3, 1.0, -0.2, 4.0),
                                        Nonlinearity::saturation(3), Nonlinearity::power_sublinear(3, 0.5),
                                        Nonlinearity::log_power(3, 2.0, 0.5, 3.0)};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> E(1e-3, 0.5);
  double worst = INFINITY;
  int triples = 0;
  for (int k = 0; k < 50; ++k) {
    const auto& spec = specs[static_cast<std::size_t>(k) % specs.size()];
    // positive u and a relative perturbation stay clear of the kink of s ln s^2 at 0
    RadialField u = mixture(g, rng, 2.0);
    for (auto& x : u.values) x = std::abs(x) + 1e-3;
    RadialField v = mixture(g, rng, 1.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= u[i];
    double eps = 0.0;
    for (bool clear = false; !clear;) {
      eps = E(rng);
      clear = true;
      for (std::size_t i = 0; i < u.size() && clear; ++i) clear = std::abs(u[i] - eps) > 2e-2 * std::abs(v[i]);
    }
    const double exact = dot(grad_energy_eps(u, spec, eps), v);
    auto err = [&](double t) {
      const double fd = (energy_eps(u + t * v, spec, eps) - energy_eps(u + (-t) * v, spec, eps)) / (2.0 * t);
      return std::abs(fd - exact) + 1e-300;
    };
    const double order = std::log10(err(1e-2) / err(1e-3));
    worst = std::min(worst, order);
    ++triples;
  }
  report(6, triples == 50 && worst >= 1.9, "gradient correctness",
         fmt("%d (u, v, eps) triples over 5 families, steps 1e-2 and 1e-3, minimum observed order %.4f (>= 1.9)",
             triples, worst));
}

// ---- 7 ----------------------------------------------------------------------------

void operator_oracles() {
  const auto g3 = make_grid(3, 12.0, 2000);
  const auto gauss = RadialField::sample(g3, [](double r) { return std::exp(-0.5 * r * r); });
  const double m_ref = std::pow(M_PI, 1.5), k_ref = 1.5 * std::pow(M_PI, 1.5);
  const double m_err = std::abs(mass(gauss) - m_ref) / m_ref;
  const double k_err = std::abs(kinetic(gauss) - k_ref) / k_ref;

  std::mt19937_64 rng(7);
  double sbp = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto u = mixture(g3, rng, 2.0), v = mixture(g3, rng, 2.0);
    const double a = dot(laplacian_radial(u), v), b = dot(u, laplacian_radial(v));
    const double kin = kinetic(u), neg = -dot(laplacian_radial(u), u);
    sbp = std::max({sbp, std::abs(a - b) / (std::abs(a) + std::abs(b)), std::abs(kin - neg) / kin});
  }

  const double j01 = 2.404825557695773;
  const auto g2 = make_grid(2, 1.0, 2000);
  const double eig = lowest_dirichlet_eigenvalue(*g2);
  const double e_err = std::abs(eig - j01 * j01) / (j01 * j01);
  report(7, m_err <= 1e-3 && k_err <= 1e-3 && sbp <= 1e-10 && e_err <= 1e-3, "quadrature and operator oracles",
         fmt("Gaussian mass rel err %.2e, kinetic rel err %.2e (tol 1e-3); summation by parts %.2e (tol 1e-10); "
             "N=2 Dirichlet eigenvalue %.8f vs j01^2 = %.8f, rel err %.2e (tol 1e-3)",
             m_err, k_err, sbp, eig, j01 * j01, e_err));
}

// ---- 8 ----------------------------------------------------------------------------

void orlicz_suite() {
  const auto g = make_grid(3, 8.0, 400);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> cd(-5.0, 5.0);
  const std::vector<NFunction> families{NFunction::log_matched(1.0), NFunction::log_matched_power_tail(0.5, 3.0),
                                        NFunction::pure_q(1.5)};
  double worst_mod = 0.0, worst_hom = 0.0, worst_tri = -INFINITY;
  int fields = 0;
  for (int k = 0; k < 100; ++k) {
    const auto& A = families[static_cast<std::size_t>(k) % families.size()];
    const auto u = mixture(g, rng, 2.0), v = mixture(g, rng, 2.0);
    const double nu = luxemburg_norm(u, A), nv = luxemburg_norm(v, A);
    RadialField s = u;
    s *= 1.0 / nu;
    worst_mod = std::max(worst_mod, std::abs(modular(s, A) - 1.0));
    const double c = cd(rng);
    worst_hom = std::max(worst_hom, std::abs(luxemburg_norm(c * u, A) - std::abs(c) * nu) / (std::abs(c) * nu));
    worst_tri = std::max(worst_tri, (luxemburg_norm(u + v, A) - nu - nv) / (nu + nv));
    ++fields;
  }

  const double knot = std::exp(-3.0);
  double glue = 0.0;
  for (double alpha : {0.5, 1.0, 3.0}) {
    // the outer branch is active at the knot; compare it with the inner formula
    const double inner_A = -alpha * knot * knot * std::log(knot * knot);
    const double inner_a = -2.0 * alpha * knot * (std::log(knot * knot) + 1.0);
    for (const auto& A : {NFunction::log_matched(alpha), NFunction::log_matched_power_tail(alpha, 3.0)})
      glue = std::max({glue, std::abs(A.A(knot) - inner_A) / inner_A, std::abs(A.a(knot) - inner_a) / inner_a});
  }

  double ratio = 0.0;
  for (double q : {1.2, 1.5, 2.0, 3.0, 5.0}) {
    const auto b = check_delta2_nabla2(NFunction::pure_q(q));
    ratio = std::max({ratio, std::abs(b.c_delta - q) / q, std::abs(b.c_nabla - q) / q});
  }
  const bool ok = fields == 100 && worst_mod <= 1e-8 && worst_hom <= 1e-8 && worst_tri <= 1e-12 && glue <= 1e-10 &&
                  ratio <= 1e-12;
  report(8, ok, "Orlicz suite",
         fmt("%d random fields: modular |I(u/k*) - 1| max %.2e (tol 1e-8), homogeneity rel err max %.2e, triangle "
             "worst excess %.2e; C1 gluing rel err %.2e (tol 1e-10); PureQ ratio rel err %.2e",
             fields, worst_mod, worst_hom, worst_tri, glue, ratio));
}

// ---- 9 ----------------------------------------------------------------------------

void mass_condition_flip() {
  const int N = 3;
  const double p = 2.0 + 4.0 / N, mu = 1.0;
  const auto spec = Nonlinearity::log_power(N, 1.0, mu, p);
  const auto gn = gn_constant(N, p);
  const double C = gn.value;
  const double rho_star = std::pow(p / (2.0 * mu * std::pow(C, p)), N / 4.0);
  // relative shift of rho* when C moves by its uncertainty
  const double band = std::max(p * N / 4.0 * gn.uncertainty / C, 1e-9);
  const auto below = mass_condition(spec, rho_star * (1.0 - band), C, gn.uncertainty);
  const auto above = mass_condition(spec, rho_star * (1.0 + band), C, gn.uncertainty);
  const double star_err = std::abs(below.rho_star - rho_star) / rho_star;
  const bool ok = below.holds && !above.holds && star_err <= band;
  report(9, ok, "mass condition flips at rho*",
         fmt("C=%.10f +- %.2e, rho*=%.8f, band %.2e: holds below=%d, holds above=%d, reported rho* rel dev %.2e",
             C, gn.uncertainty, rho_star, band, below.holds, above.holds, star_err));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  threshold_reproduction();
  ground_state_run();
  eps_monotonicity();
  energy_map_properties_run();
  nonexistence_consistency();
  gradient_correctness();
  operator_oracles();
  orlicz_suite();
  mass_condition_flip();
  std::printf("SUMMARY %d/9 criteria pass, %.1f s\n", 9 - failures, seconds_since(t0));
  return 0;
}
