#include "commons/dynamics.hpp"

#include <cmath>
#include <string>

#include "commons/error.hpp"
#include "commons/kernels.hpp"
#include "linalg.hpp"

namespace commons {
namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " has length " + std::to_string(got) +
                    ", expected " + std::to_string(want));
  }
}

}  // namespace

OriginalRate original_field(const OriginalState& s, const AgentParams& params,
                            const Network& net) {
  const std::size_t n = net.size();
  require_size(params.size(), n, "params");
  require_size(s.y.size(), n, "y");
  if (!(s.x > 0.0)) {
    throw Error(ErrorCode::kNonPositiveResource, "x = " + std::to_string(s.x));
  }
  OriginalRate r;
  double total = 0.0;
  for (double y : s.y) total += y;
  r.dx = (1.0 - s.x) * s.x - s.x * total;
  r.dy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double social = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      social += net.weight(i, j) * (s.y[i] - s.y[j]);
    }
    r.dy[i] = params.b()[i] * (params.alpha()[i] * (s.x - params.rho()[i]) -
                               params.nu()[i] * social);
  }
  return r;
}

Equilibrium equilibrium(const AgentParams& params, const Network& net) {
  const std::size_t n = net.size();
  require_size(params.size(), n, "params");
  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = params.alpha()[i] * (1.0 - params.rho()[i]);
  }
  const auto sol =
      detail::solve(equilibrium_matrix(net, params), rhs, kConditionLimit);
  if (!sol.x) {
    throw Error(ErrorCode::kInfeasibleEquilibrium,
                "A11^T + VT condition number " + std::to_string(sol.condition));
  }
  double total = 0.0;
  for (double y : *sol.x) total += y;
  if (!(total < 1.0 - kDominanceSlack)) {
    throw Error(ErrorCode::kInfeasibleEquilibrium,
                "total equilibrium consumption " + std::to_string(total) +
                    " is not below 1");
  }
  Equilibrium eq;
  eq.y0 = *sol.x;
  eq.gamma0 = std::log1p(-total);
  eq.x0 = 1.0 - total;
  return eq;
}

ShiftedState to_shifted(const OriginalState& s, const Equilibrium& eq) {
  require_size(s.y.size(), eq.y0.size(), "y");
  if (!(s.x > 0.0)) {
    throw Error(ErrorCode::kNonPositiveResource, "x = " + std::to_string(s.x));
  }
  ShiftedState out;
  out.v = std::log(s.x) - eq.gamma0;
  out.w.resize(s.y.size());
  for (std::size_t i = 0; i < s.y.size(); ++i) out.w[i] = s.y[i] - eq.y0[i];
  return out;
}

OriginalState from_shifted(const ShiftedState& s, const Equilibrium& eq) {
  require_size(s.w.size(), eq.y0.size(), "w");
  OriginalState out;
  out.x = std::exp(s.v + eq.gamma0);
  out.y.resize(s.w.size());
  for (std::size_t i = 0; i < s.w.size(); ++i) out.y[i] = s.w[i] + eq.y0[i];
  return out;
}

ShiftedField::ShiftedField(const AgentParams& params, const Network& net,
                           const Equilibrium& eq)
    : n_(net.size()),
      x0_(std::exp(eq.gamma0)),
      t_(interaction_matrix(net)),
      b_alpha_(n_),
      b_nu_(n_) {
  require_size(params.size(), n_, "params");
  require_size(eq.y0.size(), n_, "y0");
  for (std::size_t i = 0; i < n_; ++i) {
    b_alpha_[i] = params.b()[i] * params.alpha()[i];
    b_nu_[i] = params.b()[i] * params.nu()[i];
  }
}

void ShiftedField::operator()(std::span<const double> state,
                              std::span<double> rate) const {
  const auto& k = kernels::active();
  thread_local Vector tw;
  tw.resize(n_);
  const double* w = state.data() + 1;
  const double growth = x0_ * std::expm1(state[0]);
  k.matvec(t_.data(), w, tw.data(), n_, n_);
  rate[0] = -growth - k.sum(w, n_);
  k.scaled_diff(growth, b_alpha_.data(), b_nu_.data(), tw.data(),
                rate.data() + 1, n_);
}

ShiftedRate ShiftedField::evaluate(const ShiftedState& s) const {
  require_size(s.w.size(), n_, "w");
  const Vector flat = flatten(s);
  Vector rate(flat.size());
  (*this)(flat, rate);
  return {rate[0], Vector(rate.begin() + 1, rate.end())};
}

ShiftedRate shifted_field(const ShiftedState& s, const AgentParams& params,
                          const Network& net, const Equilibrium& eq) {
  return ShiftedField(params, net, eq).evaluate(s);
}

Vector flatten(const ShiftedState& s) {
  Vector flat(s.w.size() + 1);
  flat[0] = s.v;
  std::copy(s.w.begin(), s.w.end(), flat.begin() + 1);
  return flat;
}

ShiftedState unflatten(std::span<const double> flat) {
  return {flat[0], Vector(flat.begin() + 1, flat.end())};
}

}  // namespace commons
