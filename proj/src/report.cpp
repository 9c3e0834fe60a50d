#include "subnls/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "subnls/version.hpp"

namespace subnls {

namespace {

// JSON has no inf/nan; keep them visible as strings rather than null
nlohmann::json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json result_json(const SolverResult& r, double rho, const std::optional<std::string>& profile_csv_path) {
  nlohmann::json j;
  j["rho"] = num(rho);
  j["eps"] = num(r.eps);
  j["lambda"] = num(r.lambda);
  j["energy"] = num(r.energy);
  j["mass"] = num(r.mass);
  j["kinetic"] = num(r.kinetic);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["on_sphere"] = r.on_sphere;
  j["pohozaev_residual"] = num(r.diagnostics.pohozaev_rel);
  j["nehari_residual"] = num(r.diagnostics.nehari_rel);
  j["profile_csv_path"] = profile_csv_path ? nlohmann::json(*profile_csv_path) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json property_json(const PropertyCheck& c, const std::string& inputs_digest) {
  return {{"check_name", c.name},
          {"pass", c.pass},
          {"margin", num(c.margin)},
          {"tolerance", num(c.tolerance)},
          {"inputs_digest", inputs_digest},
          {"cases", c.cases}};
}

nlohmann::json assumptions_json(const AssumptionReport& rep) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& c : rep.checks) j[c.name] = {{"verdict", to_string(c.verdict)}, {"detail", c.detail}};
  j["xi0"] = rep.xi0 ? num(*rep.xi0) : nlohmann::json(nullptr);
  j["max_G_found"] = num(rep.max_G_found);
  return j;
}

nlohmann::json threshold_json(const ThresholdReport& rep) {
  return {{"mu_star", num(rep.mu_star)},
          {"gtilde_max", num(rep.gtilde_max)},
          {"g4_holds", rep.g4_holds},
          {"xi0", rep.xi0 ? num(*rep.xi0) : nlohmann::json(nullptr)},
          {"eta", num(rep.eta)}};
}

nlohmann::json mass_condition_json(const MassCondition& mc) {
  return {{"value", num(mc.value)},       {"holds", mc.holds},
          {"eta", num(mc.eta)},           {"gn_constant", num(mc.gn)},
          {"gn_uncertainty", num(mc.gn_uncertainty)}, {"rho_star", num(mc.rho_star)}};
}

nlohmann::json nfunction_json(const NFunction& A) {
  const auto b = check_delta2_nabla2(A);
  const auto r = check_nfunction(A);
  return {{"family", to_string(A.family())},
          {"c_delta", num(b.c_delta)},
          {"c_nabla", num(b.c_nabla)},
          {"sampled_range", {b.s_lo, b.s_hi}},
          {"delta2_nabla2_hold", b.holds},
          {"nonnegative", r.nonnegative},
          {"even", r.even},
          {"convex", r.convex},
          {"sa_convex", r.sa_convex},
          {"small_ratio_to_zero", r.small_ratio_to_zero},
          {"large_ratio_to_inf", r.large_ratio_to_inf}};
}

std::string energy_map_csv(const std::vector<EnergyMapPoint>& points) {
  std::string out = "rho,c_value,eps,converged\n";
  char line[160];
  for (const auto& p : points) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%d\n", p.rho, p.c_value, p.eps, p.converged ? 1 : 0);
    out += line;
  }
  return out;
}

nlohmann::json stamped(nlohmann::json body, const std::string& digest) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  body["version"] = kVersion;
  body["config_digest"] = digest;
  body["timestamp"] = buf;
  return body;
}

}  // namespace subnls
