#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "subnls/diagnostics.hpp"
#include "subnls/minimizer.hpp"
#include "subnls/nonlinearity.hpp"
#include "subnls/orlicz.hpp"

namespace subnls {

/// {rho, eps, lambda, energy, mass, kinetic, iterations, converged, on_sphere,
///  pohozaev_residual, nehari_residual, profile_csv_path}; the path is null when absent.
nlohmann::json result_json(const SolverResult& r, double rho, const std::optional<std::string>& profile_csv_path);

/// {check_name, pass, margin, tolerance, inputs_digest} plus the number of cases.
nlohmann::json property_json(const PropertyCheck& c, const std::string& inputs_digest);

nlohmann::json assumptions_json(const AssumptionReport& rep);
nlohmann::json threshold_json(const ThresholdReport& rep);
nlohmann::json mass_condition_json(const MassCondition& mc);
nlohmann::json nfunction_json(const NFunction& A);

/// CSV with header `rho,c_value,eps,converged`.
std::string energy_map_csv(const std::vector<EnergyMapPoint>& points);

/// Adds version, config_digest and timestamp (the only field that differs between reruns).
nlohmann::json stamped(nlohmann::json body, const std::string& digest);

}  // namespace subnls
