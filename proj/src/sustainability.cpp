#include "commons/sustainability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "commons/error.hpp"

namespace commons {
namespace {

constexpr double kHorizonSlack = 1e-9;

}  // namespace

void validate_box(const SustainabilityBox& box) {
  const auto fail = [](const char* what) {
    throw Error(ErrorCode::kInvalidBox, what);
  };
  if (!(std::isfinite(box.v_min) && std::isfinite(box.v_max) &&
        std::isfinite(box.d_min) && std::isfinite(box.d_max) &&
        std::isfinite(box.t_max))) {
    fail("box bounds must be finite");
  }
  if (!(box.v_min < box.v_max)) fail("requires v_min < v_max");
  if (!(box.v_max > 0.0)) fail("requires v_max > 0");
  if (!(box.d_min < 0.0 && 0.0 < box.d_max)) fail("requires d_min < 0 < d_max");
  if (!(box.t_max > 0.0)) fail("requires t_max > 0");
}

SustainabilityConstants sustainability_constants(const AgentParams& params,
                                                 const Network& net,
                                                 const Equilibrium& eq,
                                                 const SustainabilityBox& box,
                                                 double v0,
                                                 std::span<const double> w0) {
  validate_box(box);
  const std::size_t n = net.size();
  if (params.size() != n || w0.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "w0 or params length");
  }
  if (!(box.v_min < v0 && v0 < box.v_max)) {
    throw Error(ErrorCode::kInitialStateOutsideBox,
                "requires v_min < v(0) < v_max, got v(0) = " + std::to_string(v0));
  }

  SustainabilityConstants c;
  double w_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    c.beta = std::max(c.beta, params.b()[i] * params.nu()[i]);
    c.sensitivity += params.b()[i] * params.alpha()[i];
    w_norm += std::fabs(w0[i]);
  }
  const double x0 = std::exp(eq.gamma0);
  const double t = box.t_max;
  const double upper = x0 * std::expm1(box.v_max);
  c.t_norm = one_norm(interaction_matrix(net));
  c.C1 = w_norm + t * upper * c.sensitivity;
  c.C2 = c.beta * c.t_norm * t;
  c.xi[0] = upper;
  c.xi[1] = (v0 - t * upper - box.v_min) / t;
  c.xi[2] = box.d_max + x0 * std::expm1(box.v_min);
  c.xi[3] = -box.d_min - upper;
  return c;
}

double consumption_norm_bound(const SustainabilityConstants& c) {
  return c.C1 * std::exp(c.C2);
}

double resource_lower_bound(const SustainabilityConstants& c,
                            const SustainabilityBox& box, double v0) {
  return v0 - box.t_max * c.xi[0] - box.t_max * consumption_norm_bound(c);
}

std::optional<double> condition_bound(const SustainabilityConstants& c,
                                      const SustainabilityBox& box,
                                      std::size_t index) {
  const double xi = c.xi.at(index);
  if (!(xi > c.C1)) return std::nullopt;
  if (c.beta == 0.0) return INFINITY;
  return std::log(xi / c.C1) / (c.beta * box.t_max);
}

SustainabilityCertificate certify(const AgentParams& params, const Network& net,
                                  const Equilibrium& eq,
                                  const SustainabilityBox& box, double v0,
                                  std::span<const double> w0) {
  SustainabilityCertificate cert;
  cert.constants = sustainability_constants(params, net, eq, box, v0, w0);
  const auto& c = cert.constants;
  cert.t_norm = c.t_norm;
  // Ties resolve to the smallest index.
  cert.binding_index = static_cast<std::size_t>(
      std::min_element(c.xi.begin(), c.xi.end()) - c.xi.begin());
  for (std::size_t i = 0; i < 4; ++i) {
    cert.condition_bounds[i] = condition_bound(c, box, i);
  }
  cert.feasible = c.xi[cert.binding_index] > c.C1;
  if (cert.feasible) {
    cert.t_norm_bound = cert.condition_bounds[cert.binding_index];
    cert.certified = cert.t_norm <= *cert.t_norm_bound;
  }
  return cert;
}

SustainabilityBox minimal_window(const AgentParams& params, const Network& net,
                                 const Equilibrium& eq, double t_max, double v0,
                                 std::span<const double> w0) {
  const std::size_t n = net.size();
  if (params.size() != n || w0.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "w0 or params length");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::kInvalidBox, "requires t_max > 0");
  }
  double beta = 0.0;
  double sensitivity = 0.0;
  double w_norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    beta = std::max(beta, params.b()[i] * params.nu()[i]);
    sensitivity += params.b()[i] * params.alpha()[i];
    w_norm += std::fabs(w0[i]);
  }
  const double x0 = std::exp(eq.gamma0);
  const double gain = std::exp(beta * one_norm(interaction_matrix(net)) * t_max);

  // xi_1 = gain * C1 and C1 = ||w0||_1 + t_max xi_1 sum(b alpha): linear in
  // the target value u = x0 (e^{v_max} - 1).
  const double denom = 1.0 - gain * t_max * sensitivity;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::kWindowInfeasible,
                "e^{C2} t_max sum(b alpha) = " + std::to_string(1.0 - denom) +
                    " must be below 1");
  }
  const double u = gain * w_norm / denom;
  if (!(u > 0.0)) {
    throw Error(ErrorCode::kWindowInfeasible,
                "zero initial consumption deviation gives a degenerate window");
  }

  SustainabilityBox box;
  box.t_max = t_max;
  box.v_max = std::log1p(u / x0);
  box.v_min = v0 - 2.0 * t_max * u;
  box.d_min = -2.0 * u;
  box.d_max = u - x0 * std::expm1(box.v_min);
  if (!(box.v_min < v0 && v0 < box.v_max)) {
    throw Error(ErrorCode::kWindowInfeasible,
                "v(0) = " + std::to_string(v0) + " lies outside the window (" +
                    std::to_string(box.v_min) + ", " + std::to_string(box.v_max) + ")");
  }
  if (!(box.d_max > 0.0)) {
    throw Error(ErrorCode::kWindowInfeasible, "window has d_max <= 0");
  }
  return box;
}

double window_residual(const SustainabilityConstants& c) {
  const double target = std::exp(c.C2) * c.C1;
  double worst = 0.0;
  for (double xi : c.xi) worst = std::max(worst, std::fabs(xi - target) / std::fabs(xi));
  return worst;
}

std::string_view to_string(BoxBound b) noexcept {
  switch (b) {
    case BoxBound::kVMin: return "v_min";
    case BoxBound::kVMax: return "v_max";
    case BoxBound::kDMin: return "d_min";
    case BoxBound::kDMax: return "d_max";
  }
  return "unknown";
}

BoxVerdict box_invariance(const Trajectory& traj, const SustainabilityBox& box) {
  validate_box(box);
  if (traj.samples() == 0 || traj.times().back() < box.t_max - kHorizonSlack) {
    throw Error(ErrorCode::kHorizonNotCovered,
                "trajectory ends before t_max = " + std::to_string(box.t_max));
  }
  BoxVerdict verdict;
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const double t = traj.time(k);
    if (t > box.t_max + kHorizonSlack) break;
    const double v = traj.state(k)[0];
    const double dv = traj.rate(k)[0];
    std::optional<BoxViolation> hit;
    if (!(v >= box.v_min)) hit = BoxViolation{t, BoxBound::kVMin, v};
    else if (!(v <= box.v_max)) hit = BoxViolation{t, BoxBound::kVMax, v};
    else if (!(dv >= box.d_min)) hit = BoxViolation{t, BoxBound::kDMin, dv};
    else if (!(dv <= box.d_max)) hit = BoxViolation{t, BoxBound::kDMax, dv};
    if (hit) {
      verdict.sustainable = false;
      verdict.first_violation = hit;
      break;
    }
  }
  return verdict;
}

}  // namespace commons
