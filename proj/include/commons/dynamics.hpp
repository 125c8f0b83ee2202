#pragma once

#include <span>

#include "commons/matrix.hpp"
#include "commons/network.hpp"

namespace commons {

/// Resource stock x (relative to carrying capacity) and consumption efforts y.
struct OriginalState {
  double x = 1.0;
  Vector y;
};

struct OriginalRate {
  double dx = 0.0;
  Vector dy;
};

/// Log-resource deviation v = ln x - gamma0 and consumption deviation
/// w = y - y0.
struct ShiftedState {
  double v = 0.0;
  Vector w;
};

struct ShiftedRate {
  double dv = 0.0;
  Vector dw;
};

struct Equilibrium {
  Vector y0;
  double gamma0 = 0.0;
  double x0 = 1.0;
};

OriginalRate original_field(const OriginalState& s, const AgentParams& params,
                            const Network& net);

/// Throws InfeasibleEquilibrium when A 1 1^T + V T is ill-conditioned or the
/// total equilibrium consumption is not below one.
Equilibrium equilibrium(const AgentParams& params, const Network& net);

ShiftedState to_shifted(const OriginalState& s, const Equilibrium& eq);
OriginalState from_shifted(const ShiftedState& s, const Equilibrium& eq);

/// Right-hand side of the shifted system, prepared once per model so the
/// integrator can call it on flat [v, w_1..w_n] buffers without allocating.
class ShiftedField {
 public:
  ShiftedField(const AgentParams& params, const Network& net,
               const Equilibrium& eq);

  std::size_t size() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return n_ + 1; }
  double x0() const noexcept { return x0_; }

  /// state and rate are [v, w...]; rate may not alias state.
  void operator()(std::span<const double> state, std::span<double> rate) const;

  ShiftedRate evaluate(const ShiftedState& s) const;

 private:
  std::size_t n_;
  double x0_;
  Matrix t_;
  Vector b_alpha_;
  Vector b_nu_;
};

ShiftedRate shifted_field(const ShiftedState& s, const AgentParams& params,
                          const Network& net, const Equilibrium& eq);

/// Packs a shifted state into the integrator's flat layout and back.
Vector flatten(const ShiftedState& s);
ShiftedState unflatten(std::span<const double> flat);

}  // namespace commons
