#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "commons/dynamics.hpp"
#include "commons/error.hpp"

namespace commons {

inline constexpr double kDefaultStep = 0.01;

/// state -> rate on flat buffers of equal length.
using VectorField =
    std::function<void(std::span<const double> state, std::span<double> rate)>;

/// Samples of a fixed-step integration. Sample k holds the time, the state
/// and the field evaluated at that state, each stored row-major with
/// dimension() entries per sample.
class Trajectory {
 public:
  Trajectory(std::size_t dimension, double step)
      : dim_(dimension), step_(step) {}

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t samples() const noexcept { return times_.size(); }
  double step() const noexcept { return step_; }

  const Vector& times() const noexcept { return times_; }
  double time(std::size_t k) const noexcept { return times_[k]; }
  std::span<const double> state(std::size_t k) const noexcept {
    return {states_.data() + k * dim_, dim_};
  }
  std::span<const double> rate(std::size_t k) const noexcept {
    return {rates_.data() + k * dim_, dim_};
  }
  ShiftedState shifted_state(std::size_t k) const { return unflatten(state(k)); }

  /// Set when integration stopped early on a non-finite value.
  const std::optional<ErrorCode>& error() const noexcept { return error_; }
  bool ok() const noexcept { return !error_.has_value(); }

  void append(double t, std::span<const double> state, std::span<const double> rate);
  void set_error(ErrorCode code) { error_ = code; }

 private:
  std::size_t dim_;
  double step_;
  Vector times_;
  Vector states_;
  Vector rates_;
  std::optional<ErrorCode> error_;
};

/// Receives every accepted sample; return false to stop early.
using SampleObserver = std::function<bool(
    double t, std::span<const double> state, std::span<const double> rate)>;

/// Classical RK4 from t = 0 to t_end with step h; the last step is shortened
/// to land on t_end. Returns the error code if a non-finite state or rate
/// appears; the offending sample is not delivered.
std::optional<ErrorCode> integrate(const VectorField& field,
                                   std::span<const double> state0, double t_end,
                                   double h, const SampleObserver& observer);

Trajectory integrate(const VectorField& field, std::span<const double> state0,
                     double t_end, double h = kDefaultStep);

enum class Component { kAll, kResource, kConsumption };

/// Earliest stored time after which the inf-norm of the selected part of the
/// state stays below tol through the end of the trajectory.
std::optional<double> convergence_time(const Trajectory& traj, double tol,
                                       Component which = Component::kAll);

/// Streaming form of convergence_time for observers that cannot keep the
/// whole trajectory.
class ConvergenceTracker {
 public:
  ConvergenceTracker(double tol, Component which) : tol_(tol), which_(which) {}
  void observe(double t, std::span<const double> state);
  std::optional<double> result() const { return candidate_; }

 private:
  double tol_;
  Component which_;
  std::optional<double> candidate_;
};

}  // namespace commons
