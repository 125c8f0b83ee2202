#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>

#include "commons/dynamics.hpp"
#include "commons/network.hpp"

namespace commons {

/// Seeded generator used for every random draw in the project: the standard
/// 64-bit Mersenne Twister (std::mt19937_64, whose output sequence is fixed
/// by the C++ standard) with hand-rolled uniform mappings, so a seed yields
/// the same numbers on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open_closed() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, bound), rejection-sampled (no modulo bias).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

enum class Society { kProSocial, kProEcological, kEqual, kCustom };

std::string_view to_string(Society s) noexcept;
std::optional<Society> parse_society(std::string_view name) noexcept;

// Scale factors reproducing the reference regime averages on the reference
// theta: alpha-bar = 0.9822 (pro-ecological), 0.0644 (pro-social) and
// 0.5261 (equal, delta = 1 / mean(theta) so that delta theta_i ~ 1).
inline constexpr double kProEcologicalDelta = 0.1;
inline constexpr double kProSocialDelta = 100.0;

/// The 25 reference sociabilities used for the random-graph experiments.
const std::array<double, 25>& paper_theta() noexcept;

struct Weights {
  Vector alpha;
  Vector nu;
};

/// alpha_i = 1 / (1 + delta theta_i), nu_i = 1 - alpha_i.
Weights delta_parameterization(const Vector& theta, double delta);

/// Random digraph with m directed edges drawn without replacement, resampled
/// until strongly connected; each row carries uniform weight 1 / out-degree.
Network random_network(std::size_t n, std::size_t m, std::uint64_t seed);

/// The sociability profile satisfying social dominance on net: the
/// stationary vector of the influence weights, scaled to the given mean.
Vector consistent_theta(const Network& net, double mean);

/// Complete-graph network on which the given theta satisfies social
/// dominance with equality (a reversible walk with stationary vector theta).
Network reversible_network(const Vector& theta);

struct ScenarioConfig {
  Society label = Society::kCustom;
  double delta = 1.0;
  std::uint64_t seed = 0;
  Vector theta;
  Vector b;
  Vector rho;
  Network network;
  AgentParams params;
};

double preset_delta(Society label, const Vector& theta);

/// Seeded starting point used by the scenario suite: v(0) = 0 and
/// w_i(0) ~ U[0, 2/n], i.e. about one unit of excess total consumption.
ShiftedState scenario_initial_state(std::size_t agents, std::uint64_t seed);

/// Builds a config for a named society; throws AssumptionThreeViolated when
/// theta does not satisfy social dominance on net.
ScenarioConfig preset(Society label, const Vector& theta, const Network& net,
                      const Vector& b, const Vector& rho, std::uint64_t seed = 0);

/// Config from an explicit theta/delta pair (label custom unless given).
ScenarioConfig make_scenario(Society label, double delta, const Vector& theta,
                             const Network& net, const Vector& b,
                             const Vector& rho, std::uint64_t seed);

struct SuiteOptions {
  std::size_t agents = 25;
  std::size_t edges = 114;
  std::uint64_t seed = 0;
  std::optional<double> uniform_b;  // otherwise b_i ~ U(0, 1]
};

/// Pro-social, equal and pro-ecological configs sharing one seeded network,
/// theta, b and rho (rho redrawn until every society has a feasible
/// equilibrium, at most 100 draws).
std::array<ScenarioConfig, 3> scenario_suite(const SuiteOptions& opt);

}  // namespace commons
