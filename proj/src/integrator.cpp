#include "commons/integrator.hpp"

#include <cmath>
#include <string>

#include "commons/kernels.hpp"

namespace commons {
namespace {

bool finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double selected_norm(std::span<const double> s, Component which) {
  const auto& k = kernels::active();
  switch (which) {
    case Component::kResource:
      return std::fabs(s[0]);
    case Component::kConsumption:
      return k.norm_inf(s.data() + 1, s.size() - 1);
    case Component::kAll:
      break;
  }
  return k.norm_inf(s.data(), s.size());
}

}  // namespace

void Trajectory::append(double t, std::span<const double> state,
                        std::span<const double> rate) {
  times_.push_back(t);
  states_.insert(states_.end(), state.begin(), state.end());
  rates_.insert(rates_.end(), rate.begin(), rate.end());
}

std::optional<ErrorCode> integrate(const VectorField& field,
                                   std::span<const double> state0, double t_end,
                                   double h, const SampleObserver& observer) {
  if (!(h > 0.0) || !(t_end > 0.0) || h > t_end || !std::isfinite(t_end)) {
    throw Error(ErrorCode::kInvalidStep, "need 0 < h <= t_end, got h = " +
                                             std::to_string(h) + ", t_end = " +
                                             std::to_string(t_end));
  }
  const std::size_t d = state0.size();
  const auto& k = kernels::active();
  Vector x(state0.begin(), state0.end());
  Vector k1(d), k2(d), k3(d), k4(d), tmp(d);

  // Whole steps plus an optional shortened final step.
  const double ratio = t_end / h;
  auto full = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  const double tail = t_end - static_cast<double>(full) * h;
  const bool partial = tail > 1e-9 * h;

  field(x, k1);
  if (!finite(x) || !finite(k1)) return ErrorCode::kNonFiniteState;
  if (!observer(0.0, x, k1)) return std::nullopt;

  const std::size_t steps = full + (partial ? 1 : 0);
  for (std::size_t s = 0; s < steps; ++s) {
    const double hs = s < full ? h : tail;
    k.waxpy(x.data(), 0.5 * hs, k1.data(), tmp.data(), d);
    field(tmp, k2);
    k.waxpy(x.data(), 0.5 * hs, k2.data(), tmp.data(), d);
    field(tmp, k3);
    k.waxpy(x.data(), hs, k3.data(), tmp.data(), d);
    field(tmp, k4);
    k.rk4_combine(x.data(), k1.data(), k2.data(), k3.data(), k4.data(), hs, d);

    const double t = s < full ? static_cast<double>(s + 1) * h : t_end;
    field(x, k1);
    if (!finite(x) || !finite(k1)) return ErrorCode::kNonFiniteState;
    if (!observer(t, x, k1)) return std::nullopt;
  }
  return std::nullopt;
}

Trajectory integrate(const VectorField& field, std::span<const double> state0,
                     double t_end, double h) {
  Trajectory traj(state0.size(), h);
  const auto err = integrate(field, state0, t_end, h,
                             [&](double t, std::span<const double> x,
                                 std::span<const double> r) {
                               traj.append(t, x, r);
                               return true;
                             });
  if (err) traj.set_error(*err);
  return traj;
}

void ConvergenceTracker::observe(double t, std::span<const double> state) {
  if (selected_norm(state, which_) < tol_) {
    if (!candidate_) candidate_ = t;
  } else {
    candidate_.reset();
  }
}

std::optional<double> convergence_time(const Trajectory& traj, double tol,
                                       Component which) {
  ConvergenceTracker tracker(tol, which);
  for (std::size_t i = 0; i < traj.samples(); ++i) {
    tracker.observe(traj.time(i), traj.state(i));
  }
  return tracker.result();
}

}  // namespace commons
