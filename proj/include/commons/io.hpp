#pragma once

// JSON and CSV surfaces shared by the CLI and the tests.
//
// Network:   {"n": int, "weights": [[...]], "normalized": bool}
//            normalized = true means the rows already sum to one and are
//            checked strictly; false asks for row normalisation on load.
// Model:     {"network": Network, "b": [...], "rho": [...]} plus either
//            {"alpha": [...], "nu": [...]} (nu defaults to 1 - alpha) or
//            {"theta": [...], "delta": x}. A ScenarioConfig document is a
//            valid model file.
// Scenario:  {"label", "delta", "seed", "theta", "b", "rho", "network"}

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "commons/dynamics.hpp"
#include "commons/network.hpp"
#include "commons/scenarios.hpp"
#include "commons/stability.hpp"
#include "commons/sustainability.hpp"

namespace commons::io {

using nlohmann::json;

struct Model {
  Network network;
  AgentParams params;
  std::optional<Vector> theta;
  std::optional<double> delta;
};

/// Schema failures throw Error(kSchema) with a JSON-pointer location.
Network network_from_json(const json& j, const std::string& where = "");
json to_json(const Network& net);

Model model_from_json(const json& j);
json model_to_json(const Network& net, const AgentParams& params);

json to_json(const AssumptionReport& r);
json to_json(const SpectralReport& r);
json to_json(const SustainabilityBox& box);
json to_json(const SustainabilityCertificate& cert);
json to_json(const ScenarioConfig& cfg);
json to_json(const Equilibrium& eq);

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double x);

/// Header for the trajectory CSV: t,v,dv,x,w_1..w_n,y_1..y_n,V.
void write_trajectory_header(std::ostream& os, std::size_t agents);

/// One CSV row for a shifted-coordinate sample.
void write_trajectory_row(std::ostream& os, double t, std::span<const double> state,
                          std::span<const double> rate, const Equilibrium& eq,
                          double lyapunov_value);

}  // namespace commons::io
