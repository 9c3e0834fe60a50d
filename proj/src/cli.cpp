#include "subnls/cli.hpp"

#include <omp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "subnls/config.hpp"
#include "subnls/diagnostics.hpp"
#include "subnls/errors.hpp"
#include "subnls/field_io.hpp"
#include "subnls/gn.hpp"
#include "subnls/report.hpp"
#include "subnls/version.hpp"

namespace subnls {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  int jobs = 0;
  std::string out;
  std::string format;
};

void setup_logging() {
  static std::once_flag once;
  std::call_once(once, [] { spdlog::set_default_logger(spdlog::stderr_color_mt("subnls")); });
  const char* env = std::getenv("SUBNLS_LOG");
  const std::string level = env ? env : "warn";
  if (level == "error")
    spdlog::set_level(spdlog::level::err);
  else if (level == "warn")
    spdlog::set_level(spdlog::level::warn);
  else if (level == "info")
    spdlog::set_level(spdlog::level::info);
  else if (level == "debug")
    spdlog::set_level(spdlog::level::debug);
  else
    throw ConfigError("SUBNLS_LOG must be error, warn, info or debug, got '" + level + "'");
}

RunConfig load_with_overrides(const CommonOptions& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (!o.format.empty()) cfg.format = parse_format(o.format);
  return cfg;
}

bool wants_json(OutputFormat f) { return f != OutputFormat::Csv; }
bool wants_csv(OutputFormat f) { return f != OutputFormat::Json; }

void write_json(const fs::path& path, const nlohmann::json& j) { write_file_atomic(path.string(), j.dump(2) + "\n"); }

std::optional<NonexistenceReport> verdict_for(const Nonlinearity& spec) {
  try {
    if (spec.family() == Family::LogPlusPower)
      return nonexistence_verdict(spec.alpha(), spec.mu(), spec.p(), spec.dim());
    if (spec.family() == Family::Logarithmic) return nonexistence_verdict(spec.alpha(), 0.0, 4.0, spec.dim());
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

nlohmann::json verdict_json(const std::optional<NonexistenceReport>& v) {
  if (!v) return nullptr;
  return {{"verdict", to_string(v->verdict)}, {"mu_star", v->mu_star}, {"note", v->note}};
}

// ---- solve ----------------------------------------------------------------

int cmd_solve(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_with_overrides(o);
  const std::string digest = config_digest(cfg);
  const auto& sc = cfg.solve;
  const int runs_n = static_cast<int>(cfg.seeds.size());
  std::vector<ContinuationResult> runs(cfg.seeds.size());
  std::vector<std::string> failures(cfg.seeds.size());
  const int threads = o.jobs > 0 ? o.jobs : 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int k = 0; k < runs_n; ++k) {
    SolveConfig c = sc;
    c.seed = cfg.seeds[static_cast<std::size_t>(k)];
    try {
      runs[static_cast<std::size_t>(k)] = continuation(c);
    } catch (const StepFailure& e) {
      failures[static_cast<std::size_t>(k)] = e.what();
    }
  }

  // lowest limit energy among converged sphere points, else the first run that produced anything
  int best = -1;
  for (int k = 0; k < runs_n; ++k) {
    const auto& r = runs[static_cast<std::size_t>(k)];
    if (!failures[static_cast<std::size_t>(k)].empty() || r.stages.empty()) continue;
    const bool ok = r.limit.converged && r.limit.on_sphere;
    if (best < 0) {
      best = k;
      continue;
    }
    const auto& b = runs[static_cast<std::size_t>(best)];
    const bool b_ok = b.limit.converged && b.limit.on_sphere;
    if ((ok && !b_ok) || (ok == b_ok && r.limit.energy < b.limit.energy)) best = k;
  }
  if (best < 0) {
    err << "error: solver step failure: " << failures.front() << "\n";
    return kExitNotConverged;
  }
  const auto& chosen = runs[static_cast<std::size_t>(best)];
  const bool converged = chosen.limit.converged && chosen.limit.on_sphere;

  const auto verdict = verdict_for(sc.spec);
  std::string note;
  if (!converged) {
    note = chosen.message.empty() ? "no sphere-saturating minimizer found" : chosen.message;
    if (verdict && verdict->verdict != Existence::ExistsLargeRho)
      note += "; nonexistence: " + to_string(verdict->verdict) + " (" + verdict->note + ")";
    else if (chosen.limit.energy >= 0.0)
      note += "; the flow reached energy >= 0, so rho may be below the existence range";
  }

  fs::create_directories(cfg.out_dir);
  std::optional<std::string> profile_path;
  if (wants_csv(cfg.format)) {
    profile_path = (cfg.out_dir / "profile.csv").string();
    std::ostringstream csv;
    write_profile_csv(csv, chosen.limit.u);
    write_file_atomic(*profile_path, csv.str());
  }
  if (wants_json(cfg.format)) {
    auto j = result_json(chosen.limit, sc.rho, profile_path);
    j["seed"] = cfg.seeds[static_cast<std::size_t>(best)];
    j["status"] = chosen.limit.status;
    j["energies_monotone"] = chosen.energies_monotone;
    j["bounded_by_limit"] = chosen.bounded_by_limit;
    j["energy_identity_residual"] = energy_identity_residual(chosen.limit, sc.spec.dim());
    j["shape"] = {{"sign_ok", chosen.limit.diagnostics.sign_ok},
                  {"monotone_ok", chosen.limit.diagnostics.monotone_ok},
                  {"boundary_leak", chosen.limit.diagnostics.boundary_leak}};
    j["nonexistence"] = verdict_json(verdict);
    j["note"] = note;
    auto& stages = j["stages"] = nlohmann::json::array();
    for (const auto& s : chosen.stages) {
      auto sj = result_json(s, sc.rho, std::nullopt);
      sj.erase("profile_csv_path");
      sj["status"] = s.status;
      stages.push_back(sj);
    }
    auto& all = j["runs"] = nlohmann::json::array();
    for (int k = 0; k < runs_n; ++k) {
      const auto& r = runs[static_cast<std::size_t>(k)];
      nlohmann::json rj = {{"seed", cfg.seeds[static_cast<std::size_t>(k)]}};
      if (!failures[static_cast<std::size_t>(k)].empty()) {
        rj["error"] = failures[static_cast<std::size_t>(k)];
      } else {
        rj["converged"] = r.limit.converged && r.limit.on_sphere;
        rj["energy"] = r.limit.energy;
        rj["lambda"] = r.limit.lambda;
        rj["message"] = r.message;
      }
      all.push_back(rj);
    }
    write_json(cfg.out_dir / "result.json", stamped(j, digest));
  }

  out << (converged ? "converged" : "not converged") << ": J=" << chosen.limit.energy
      << " lambda=" << chosen.limit.lambda << " mass=" << chosen.limit.mass
      << " pohozaev=" << chosen.limit.diagnostics.pohozaev_rel << " stages=" << chosen.stages.size() << "\n";
  if (!converged) {
    err << "note: " << note << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

// ---- sweep-rho --------------------------------------------------------------

int cmd_sweep(const CommonOptions& o, double rho_min, double rho_max, int steps, std::ostream& out,
              std::ostream& err) {
  if (!(rho_min > 0.0)) throw CLI::ValidationError("--rho-min", "must be positive");
  if (!(rho_max > rho_min)) throw CLI::ValidationError("--rho-max", "must exceed --rho-min");
  if (steps < 3) throw CLI::ValidationError("--steps", "must be at least 3");
  const RunConfig cfg = load_with_overrides(o);
  const std::string digest = config_digest(cfg);
  std::vector<double> rhos;
  for (int k = 0; k < steps; ++k) rhos.push_back(rho_min + (rho_max - rho_min) * k / (steps - 1));

  SolveConfig sc = cfg.solve;
  sc.seed = cfg.seeds.front();
  std::vector<ContinuationResult> details;
  const auto points = energy_map(sc, rhos, o.jobs, &details);

  fs::create_directories(cfg.out_dir / "points");
  std::string inputs = digest;
  for (double r : rhos) inputs += "," + std::to_string(r);
  const std::string inputs_digest = fnv1a_hex(inputs);

  bool all_converged = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    all_converged = all_converged && points[k].converged;
    if (!points[k].converged) err << "point rho=" << points[k].rho << " failed: " << details[k].message << "\n";
    if (wants_json(cfg.format)) {
      const auto& lim = details[k].limit;
      auto j = lim.u.grid ? result_json(lim, points[k].rho, std::nullopt) : nlohmann::json::object();
      j["rho"] = points[k].rho;
      j["message"] = details[k].message;
      write_json(cfg.out_dir / "points" / ("point_" + std::to_string(k) + ".json"), stamped(j, digest));
    }
  }
  if (wants_csv(cfg.format)) write_file_atomic((cfg.out_dir / "energy_map.csv").string(), energy_map_csv(points));

  bool props_pass = false;
  nlohmann::json props = nlohmann::json::array();
  try {
    const auto rep = energy_map_properties(points);
    props_pass = rep.all_pass();
    for (const auto& c : rep.checks) {
      props.push_back(property_json(c, inputs_digest));
      out << c.name << ": " << (c.pass ? "pass" : "FAIL") << " margin=" << c.margin << " tol=" << c.tolerance
          << " cases=" << c.cases << (c.name == "divergence_proxy" ? " (proxy)" : "") << "\n";
    }
  } catch (const DomainError& e) {
    err << "properties not evaluated: " << e.what() << "\n";
  }
  if (wants_json(cfg.format)) {
    nlohmann::json j = {{"properties", props}, {"inputs_digest", inputs_digest}, {"all_pass", props_pass}};
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : points)
      pts.push_back({{"rho", p.rho}, {"c_value", std::isfinite(p.c_value) ? nlohmann::json(p.c_value) : nullptr},
                     {"eps", p.eps}, {"converged", p.converged}});
    j["points"] = pts;
    write_json(cfg.out_dir / "properties.json", stamped(j, digest));
  }
  return all_converged && props_pass ? kExitOk : kExitNotConverged;
}

// ---- check --------------------------------------------------------------------

int cmd_check(const CommonOptions& o, std::ostream& out) {
  const RunConfig cfg = load_with_overrides(o);
  const std::string digest = config_digest(cfg);
  const auto& spec = cfg.solve.spec;
  const auto rep = check_assumptions(spec);
  bool fails = rep.any_fails();

  out << "nonlinearity " << to_string(spec.family()) << " in dimension " << spec.dim() << "\n";
  for (const auto& c : rep.checks) out << "  (" << c.name << ") " << to_string(c.verdict) << ": " << c.detail << "\n";

  nlohmann::json j;
  j["assumptions"] = assumptions_json(rep);
  const auto th = threshold_report(spec);
  j["threshold"] = threshold_json(th);
  if (std::isfinite(th.mu_star)) out << "  mu threshold " << th.mu_star << ", max G~ " << th.gtilde_max << "\n";

  const auto verdict = verdict_for(spec);
  j["nonexistence"] = verdict_json(verdict);
  if (verdict) out << "  existence: " << to_string(verdict->verdict) << " (" << verdict->note << ")\n";

  const auto mc = mass_condition(spec, cfg.solve.rho);
  j["mass_condition"] = mass_condition_json(mc);
  out << "  mass condition at rho=" << cfg.solve.rho << ": value " << mc.value << (mc.holds ? " < 1" : " >= 1")
      << "\n";

  if (cfg.orlicz) {
    const auto A = cfg.orlicz->make();
    const auto nj = nfunction_json(A);
    const auto r = check_nfunction(A);
    const bool ok = r.all();
    fails = fails || !ok;
    j["orlicz"] = nj;
    out << "  N-function " << to_string(A.family()) << ": Delta2/nabla2 " << (A.ratio_bounds().holds ? "hold" : "fail")
        << " (" << A.ratio_bounds().c_nabla << " <= s a/A <= " << A.ratio_bounds().c_delta << ")"
        << (ok ? "" : ", N-function axioms fail") << "\n";
  }
  j["pass"] = !fails;
  if (wants_json(cfg.format)) {
    fs::create_directories(cfg.out_dir);
    write_json(cfg.out_dir / "check.json", stamped(j, digest));
  }
  out << (fails ? "assumption check failed" : "all checks hold") << "\n";
  return fails ? kExitAssumption : kExitOk;
}

// ---- gn, threshold ------------------------------------------------------------

int cmd_gn(int dim, double p, int fields, std::ostream& out) {
  if (dim < 1) throw CLI::ValidationError("--dim", "must be positive");
  const double crit = dim <= 2 ? std::numeric_limits<double>::infinity() : 2.0 * dim / (dim - 2.0);
  if (!(p > 2.0 && p < crit)) throw CLI::ValidationError("--p", "needs 2 < p < 2N/(N-2)");
  const auto est = gn_constant(dim, p);
  const auto v = validate_gn(dim, p, est.value, fields);
  out.precision(12);
  out << "C(N=" << dim << ", p=" << p << ") ~ " << est.value << " +- " << est.uncertainty
      << (est.converged ? "" : " (iteration limit reached)") << "\n";
  out << "random fields: " << v.fields << ", violations: " << v.violations << ", max quotient " << v.max_quotient
      << "\n";
  return v.violations == 0 ? kExitOk : kExitNotConverged;
}

int cmd_threshold(double alpha, double p, std::optional<double> mu, int dim, std::ostream& out) {
  if (!(alpha > 0.0)) throw CLI::ValidationError("--alpha", "must be positive");
  if (!(p > 2.0)) throw CLI::ValidationError("--p", "must exceed 2");
  out.precision(17);
  const double star = mu_threshold(alpha, p);
  out << "mu_threshold " << star << "\n";
  if (mu) {
    if (*mu < 0.0)
      out << "gtilde_max " << gtilde_max(alpha, *mu, p) << "\n";
    else
      out << "gtilde_max inf\n";
    try {
      const auto v = nonexistence_verdict(alpha, *mu, p, dim);
      out << "verdict " << to_string(v.verdict) << "\n";
    } catch (const DomainError& e) {
      throw CLI::ValidationError("--p", e.what());
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Normalized ground states for strongly sublinear nonlinear Schroedinger equations", "subnls"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOptions solve_o, sweep_o, check_o;
  auto add_common = [](CLI::App* sub, CommonOptions& o, bool jobs) {
    sub->add_option("--config", o.config, "Run file (INI)")->required();
    if (jobs) sub->add_option("--jobs", o.jobs, "Parallel workers")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", o.out, "Output directory (overrides output.directory)");
    sub->add_option("--format", o.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  };
  auto* solve = app.add_subcommand("solve", "Continuation in eps for one mass");
  add_common(solve, solve_o, true);

  auto* sweep = app.add_subcommand("sweep-rho", "Energy map over a range of masses");
  add_common(sweep, sweep_o, true);
  double rho_min = 0.0, rho_max = 0.0;
  int steps = 8;
  sweep->add_option("--rho-min", rho_min)->required();
  sweep->add_option("--rho-max", rho_max)->required();
  sweep->add_option("--steps", steps, "Number of masses (>= 3)");

  auto* check = app.add_subcommand("check", "Assumption, threshold and Orlicz report");
  add_common(check, check_o, false);

  auto* gn = app.add_subcommand("gn", "Gagliardo-Nirenberg constant estimate");
  int gn_dim = 3, gn_fields = 1000;
  double gn_p = 0.0;
  gn->add_option("--dim,-N", gn_dim)->required();
  gn->add_option("--p", gn_p)->required();
  gn->add_option("--fields", gn_fields, "Random fields for validation")->check(CLI::PositiveNumber);

  auto* thr = app.add_subcommand("threshold", "Nonexistence threshold for alpha s ln s^2 + mu |s|^(p-2) s");
  double t_alpha = 1.0, t_p = 0.0;
  std::optional<double> t_mu;
  int t_dim = 3;
  thr->add_option("--alpha", t_alpha);
  thr->add_option("--p", t_p)->required();
  thr->add_option("--mu", t_mu);
  thr->add_option("--dim,-N", t_dim);

  try {
    app.parse(argc, argv);
    setup_logging();
    if (*solve) return cmd_solve(solve_o, out, err);
    if (*sweep) return cmd_sweep(sweep_o, rho_min, rho_max, steps, out, err);
    if (*check) return cmd_check(check_o, out);
    if (*gn) return cmd_gn(gn_dim, gn_p, gn_fields, out);
    if (*thr) return cmd_threshold(t_alpha, t_p, t_mu, t_dim, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StepFailure& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitNotConverged;
  }
  return kExitUsage;
}

}  // namespace subnls
