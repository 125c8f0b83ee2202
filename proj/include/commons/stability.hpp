#pragma once

#include <cstddef>

#include "commons/dynamics.hpp"
#include "commons/integrator.hpp"
#include "commons/network.hpp"

namespace commons {

inline constexpr double kPsdRelativeTolerance = 1e-8;
inline constexpr double kNullspaceRelativeTolerance = 1e-9;
inline constexpr double kRankRelativeTolerance = 1e-8;
inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kDescentTolerance = 1e-8;

/// V(v, w) = e^v - v - 1 + 1/2 e^{-gamma0} w^T (AB)^{-1} w.
double lyapunov(double v, std::span<const double> w, const AgentParams& params,
                const Equilibrium& eq);

/// Closed-form dV/dt along the shifted flow:
///   -e^{gamma0} (e^v - 1)^2 - e^{-gamma0} w^T Theta T w.
double lyapunov_rate(double v, std::span<const double> w,
                     const AgentParams& params, const Network& net,
                     const Equilibrium& eq);

/// T^T Theta + Theta T with Theta = diag(nu_i / alpha_i).
Matrix gram_matrix(const Network& net, const AgentParams& params);

struct SpectralReport {
  Vector eigenvalues;  // ascending
  bool psd = false;
  bool one_in_nullspace = false;
  std::size_t rank_deficiency = 0;
  // Every column has diagonal >= sum of |off-diagonal| entries: the
  // Gershgorin sufficient condition for nonnegative eigenvalues.
  bool gershgorin_dominant = false;
  double min_gershgorin_margin = 0.0;
};

SpectralReport spectral_certificate(const Matrix& m);

struct DescentReport {
  bool monotone = true;
  double max_increase = 0.0;
  double initial = 0.0;
  double final = 0.0;
};

/// Evaluates V at every stored sample of a shifted-coordinate trajectory.
DescentReport descent_check(const Trajectory& traj, const AgentParams& params,
                            const Network& net, const Equilibrium& eq);

}  // namespace commons
