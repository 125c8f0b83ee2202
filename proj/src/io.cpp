#include "commons/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "commons/error.hpp"

namespace commons::io {
namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kSchema, (where.empty() ? "/" : where) + ": " + what);
}

const json& field(const json& j, const std::string& where, const char* key) {
  if (!j.is_object()) schema(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) schema(where + "/" + key, "missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  return j.get<double>();
}

Vector numbers(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array of numbers");
  Vector out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "/" + std::to_string(i)));
  }
  return out;
}

void expect_length(const Vector& v, std::size_t n, const std::string& where) {
  if (v.size() != n) {
    schema(where, "expected " + std::to_string(n) + " entries, got " +
                      std::to_string(v.size()));
  }
}

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

// JSON has no infinity; emit null for non-finite values.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

Network network_from_json(const json& j, const std::string& where) {
  const json& jw = field(j, where, "weights");
  if (!jw.is_array()) schema(where + "/weights", "expected an array of rows");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < jw.size(); ++i) {
    rows.push_back(numbers(jw[i], where + "/weights/" + std::to_string(i)));
    if (rows.back().size() != jw.size()) {
      schema(where + "/weights/" + std::to_string(i),
             "row length differs from row count");
    }
  }
  if (j.contains("n")) {
    const json& jn = j["n"];
    if (!jn.is_number_integer() || jn.get<long long>() != static_cast<long long>(rows.size())) {
      schema(where + "/n", "must equal the number of weight rows");
    }
  }
  bool normalized = true;
  if (j.contains("normalized")) {
    if (!j["normalized"].is_boolean()) schema(where + "/normalized", "expected a boolean");
    normalized = j["normalized"].get<bool>();
  }
  try {
    return build_network(Matrix::from_rows(rows), !normalized);
  } catch (const Error& e) {
    schema(where + "/weights", e.what());
  }
}

json to_json(const Network& net) {
  return {{"n", net.size()}, {"weights", net.weights().to_rows()}, {"normalized", true}};
}

Model model_from_json(const json& j) {
  if (!j.is_object()) schema("", "expected an object");
  Network net = network_from_json(field(j, "", "network"), "/network");
  const std::size_t n = net.size();
  Vector b = numbers(field(j, "", "b"), "/b");
  expect_length(b, n, "/b");
  Vector rho = numbers(field(j, "", "rho"), "/rho");
  expect_length(rho, n, "/rho");

  Vector alpha;
  Vector nu;
  std::optional<Vector> theta;
  std::optional<double> delta;
  if (j.contains("alpha")) {
    alpha = numbers(j["alpha"], "/alpha");
    expect_length(alpha, n, "/alpha");
    if (j.contains("nu")) {
      nu = numbers(j["nu"], "/nu");
      expect_length(nu, n, "/nu");
    } else {
      nu.resize(n);
      for (std::size_t i = 0; i < n; ++i) nu[i] = 1.0 - alpha[i];
    }
  } else if (j.contains("theta")) {
    theta = numbers(j["theta"], "/theta");
    expect_length(*theta, n, "/theta");
    delta = number(field(j, "", "delta"), "/delta");
    try {
      auto w = delta_parameterization(*theta, *delta);
      alpha = std::move(w.alpha);
      nu = std::move(w.nu);
    } catch (const Error& e) {
      schema("/theta", e.what());
    }
  } else {
    schema("/alpha", "missing (or provide theta and delta)");
  }
  try {
    AgentParams params = make_params(std::move(alpha), std::move(nu), std::move(b),
                                     std::move(rho));
    return Model{std::move(net), std::move(params), std::move(theta), delta};
  } catch (const Error& e) {
    schema("", e.what());
  }
}

json model_to_json(const Network& net, const AgentParams& params) {
  return {{"network", to_json(net)},
          {"alpha", params.alpha()},
          {"nu", params.nu()},
          {"b", params.b()},
          {"rho", params.rho()}};
}

json to_json(const AssumptionReport& r) {
  // Agent indices in reports are 1-based to match how models are described.
  const auto one_based = [](const std::vector<std::size_t>& v) {
    json out = json::array();
    for (std::size_t i : v) out.push_back(i + 1);
    return out;
  };
  json per_agent = json::array();
  for (bool ok : r.social_dominance_per_agent) per_agent.push_back(ok);
  return {
      {"all_pass", r.all_pass()},
      {"row_stochastic", r.row_stochastic},
      {"strongly_connected", r.strongly_connected},
      {"social_dominance", r.social_dominance},
      {"equilibrium_feasible", r.equilibrium_feasible},
      {"details",
       {{"max_row_sum_error", r.max_row_sum_error},
        {"unreachable_from_agent_1", one_based(r.unreachable_from_first)},
        {"cannot_reach_agent_1", one_based(r.cannot_reach_first)},
        {"social_dominance_per_agent", per_agent},
        {"social_dominance_slack", r.social_dominance_slack},
        {"violating_agents", one_based(r.violating_agents)},
        {"condition_number", finite_or_null(r.condition_number)},
        {"total_equilibrium_consumption",
         optional_number(r.total_equilibrium_consumption)}}}};
}

json to_json(const SpectralReport& r) {
  return {{"eigenvalues", r.eigenvalues},
          {"psd", r.psd},
          {"one_in_nullspace", r.one_in_nullspace},
          {"rank_deficiency", r.rank_deficiency},
          {"gershgorin_dominant", r.gershgorin_dominant},
          {"min_gershgorin_margin", r.min_gershgorin_margin}};
}

json to_json(const SustainabilityBox& box) {
  return {{"v_min", box.v_min}, {"v_max", box.v_max}, {"d_min", box.d_min},
          {"d_max", box.d_max}, {"t_max", box.t_max}};
}

json to_json(const SustainabilityCertificate& cert) {
  const auto& c = cert.constants;
  json bounds = json::array();
  for (const auto& b : cert.condition_bounds) bounds.push_back(optional_number(b));
  return {{"constants",
           {{"beta", c.beta},
            {"C1", c.C1},
            {"C2", c.C2},
            {"xi", c.xi},
            {"sum_b_alpha", c.sensitivity}}},
          {"condition_bounds", bounds},
          {"consumption_norm_bound", consumption_norm_bound(c)},
          {"feasible", cert.feasible},
          {"t_norm", cert.t_norm},
          {"t_norm_bound", optional_number(cert.t_norm_bound)},
          {"certified", cert.certified},
          {"binding_index", cert.binding_index + 1}};
}

json to_json(const ScenarioConfig& cfg) {
  return {{"label", std::string(to_string(cfg.label))},
          {"delta", cfg.delta},
          {"seed", cfg.seed},
          {"theta", cfg.theta},
          {"b", cfg.b},
          {"rho", cfg.rho},
          {"network", to_json(cfg.network)}};
}

json to_json(const Equilibrium& eq) {
  return {{"y0", eq.y0}, {"gamma0", eq.gamma0}, {"x0", eq.x0}};
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trajectory_header(std::ostream& os, std::size_t agents) {
  os << "t,v,dv,x";
  for (std::size_t i = 1; i <= agents; ++i) os << ",w_" << i;
  for (std::size_t i = 1; i <= agents; ++i) os << ",y_" << i;
  os << ",V\n";
}

void write_trajectory_row(std::ostream& os, double t, std::span<const double> state,
                          std::span<const double> rate, const Equilibrium& eq,
                          double lyapunov_value) {
  std::string line = format_double(t);
  const auto put = [&line](double x) {
    line += ',';
    line += format_double(x);
  };
  put(state[0]);
  put(rate[0]);
  put(std::exp(state[0] + eq.gamma0));
  for (std::size_t i = 1; i < state.size(); ++i) put(state[i]);
  for (std::size_t i = 1; i < state.size(); ++i) put(state[i] + eq.y0[i - 1]);
  put(lyapunov_value);
  line += '\n';
  os << line;
}

}  // namespace commons::io
