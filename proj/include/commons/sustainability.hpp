#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "commons/dynamics.hpp"
#include "commons/integrator.hpp"
#include "commons/network.hpp"

namespace commons {

/// Admissible region for (v, dv/dt) over [0, t_max].
struct SustainabilityBox {
  double v_min = 0.0;
  double v_max = 0.0;
  double d_min = 0.0;
  double d_max = 0.0;
  double t_max = 0.0;
};

/// Throws InvalidBox naming the first violated requirement.
void validate_box(const SustainabilityBox& box);

struct SustainabilityConstants {
  double beta = 0.0;          // max_i b_i nu_i
  double C1 = 0.0;            // ||w0||_1 + t_max x0 (e^{v_max} - 1) sum_i b_i alpha_i
  double C2 = 0.0;            // beta ||T||_1 t_max
  std::array<double, 4> xi{};
  double sensitivity = 0.0;   // sum_i b_i alpha_i
  double t_norm = 0.0;        // ||T||_1
};

SustainabilityConstants sustainability_constants(const AgentParams& params,
                                                 const Network& net,
                                                 const Equilibrium& eq,
                                                 const SustainabilityBox& box,
                                                 double v0,
                                                 std::span<const double> w0);

/// Groenwall bound on ||w(t)||_1 while v stays below v_max: C1 exp(C2).
double consumption_norm_bound(const SustainabilityConstants& c);

/// Lower bound on v(t) over the horizon while v stays below v_max:
/// v0 - t_max x0 (e^{v_max} - 1) - t_max C1 exp(C2).
double resource_lower_bound(const SustainabilityConstants& c,
                            const SustainabilityBox& box, double v0);

/// ||T||_1 ceiling from a single xi condition; absent when xi_i <= C1.
std::optional<double> condition_bound(const SustainabilityConstants& c,
                                      const SustainabilityBox& box,
                                      std::size_t index);

struct SustainabilityCertificate {
  SustainabilityConstants constants;
  std::array<std::optional<double>, 4> condition_bounds;
  bool feasible = false;
  double t_norm = 0.0;
  std::optional<double> t_norm_bound;
  bool certified = false;
  std::size_t binding_index = 0;  // 0-based index of the smallest xi
};

SustainabilityCertificate certify(const AgentParams& params, const Network& net,
                                  const Equilibrium& eq,
                                  const SustainabilityBox& box, double v0,
                                  std::span<const double> w0);

/// Smallest box for which the certificate holds with equality at horizon
/// t_max; throws WindowInfeasible when no such box exists.
SustainabilityBox minimal_window(const AgentParams& params, const Network& net,
                                 const Equilibrium& eq, double t_max, double v0,
                                 std::span<const double> w0);

/// max_i |xi_i - e^{C2} C1| / xi_i for a box; zero for an exact minimal window.
double window_residual(const SustainabilityConstants& c);

enum class BoxBound { kVMin, kVMax, kDMin, kDMax };
std::string_view to_string(BoxBound b) noexcept;

struct BoxViolation {
  double time = 0.0;
  BoxBound bound = BoxBound::kVMin;
  double value = 0.0;
};

struct BoxVerdict {
  bool sustainable = true;
  std::optional<BoxViolation> first_violation;
};

/// Checks every stored sample with t <= t_max against the box; dv comes from
/// the stored rates.
BoxVerdict box_invariance(const Trajectory& traj, const SustainabilityBox& box);

}  // namespace commons
