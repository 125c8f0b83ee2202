#include "commons/network.hpp"

#include <cmath>
#include <string>

#include "commons/error.hpp"
#include "linalg.hpp"

namespace commons {
namespace {

std::string at(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

std::vector<bool> reachable(const Network& net, bool reverse) {
  // Edge j -> i whenever w_ij > 0 (j influences i).
  const std::size_t n = net.size();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v) {
      const double w = reverse ? net.weight(u, v) : net.weight(v, u);
      if (w > 0.0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

Vector AgentParams::theta() const {
  Vector t(size());
  for (std::size_t i = 0; i < size(); ++i) t[i] = nu_[i] / alpha_[i];
  return t;
}

AgentParams make_params(Vector alpha, Vector nu, Vector b, Vector rho) {
  const std::size_t n = alpha.size();
  if (nu.size() != n || b.size() != n || rho.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "alpha, nu, b and rho must have equal length");
  }
  if (n < 2) throw Error(ErrorCode::kTooFewAgents, "need at least two agents");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string who = "agent " + std::to_string(i);
    if (!(alpha[i] > 0.0 && alpha[i] <= 1.0)) {
      throw Error(ErrorCode::kInvalidParams, who + ": alpha must lie in (0, 1]");
    }
    if (!(nu[i] >= 0.0 && nu[i] < 1.0)) {
      throw Error(ErrorCode::kInvalidParams, who + ": nu must lie in [0, 1)");
    }
    if (std::fabs(alpha[i] + nu[i] - 1.0) > kWeightSumTolerance) {
      throw Error(ErrorCode::kInvalidParams, who + ": alpha + nu must equal 1");
    }
    if (!(b[i] > 0.0) || !std::isfinite(b[i])) {
      throw Error(ErrorCode::kInvalidParams, who + ": b must be positive");
    }
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) {
      throw Error(ErrorCode::kInvalidParams, who + ": rho must be positive");
    }
  }
  return AgentParams(std::move(alpha), std::move(nu), std::move(b),
                     std::move(rho));
}

Network build_network(const Matrix& raw, bool normalize) {
  if (!raw.square()) {
    throw Error(ErrorCode::kNonSquare,
                std::to_string(raw.rows()) + "x" + std::to_string(raw.cols()));
  }
  const std::size_t n = raw.rows();
  if (n < 2) throw Error(ErrorCode::kTooFewAgents, "need at least two agents");

  Matrix w = raw;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = w(i, j);
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kNegativeWeight, "non-finite weight at " + at(i, j));
      }
      if (x < 0.0) throw Error(ErrorCode::kNegativeWeight, "at " + at(i, j));
      if (i == j && x != 0.0) {
        throw Error(ErrorCode::kNonzeroDiagonal, "at " + at(i, j));
      }
      row_sum += x;
    }
    if (!(row_sum > 0.0)) {
      throw Error(ErrorCode::kZeroOutDegreeRow,
                  "agent " + std::to_string(i) + " has no neighbours");
    }
    if (normalize) {
      for (double& x : w.row(i)) x /= row_sum;
    } else if (std::fabs(row_sum - 1.0) > kRowSumTolerance) {
      throw Error(ErrorCode::kRowSumMismatch,
                  "row " + std::to_string(i) + " sums to " + std::to_string(row_sum));
    }
  }
  return Network(std::move(w));
}

Matrix interaction_matrix(const Network& net) {
  const std::size_t n = net.size();
  Matrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t(i, j) = i == j ? 1.0 : -net.weight(i, j);
    }
  }
  return t;
}

double one_norm(const Matrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += std::fabs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

Matrix equilibrium_matrix(const Network& net, const AgentParams& params) {
  const std::size_t n = net.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = params.alpha()[i];
    const double v = params.nu()[i];
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = a + v * (i == j ? 1.0 : -net.weight(i, j));
    }
  }
  return m;
}

bool strongly_connected(const Network& net) {
  for (bool reverse : {false, true}) {
    for (bool r : reachable(net, reverse)) {
      if (!r) return false;
    }
  }
  return true;
}

std::vector<bool> social_dominance(const Network& net, const Vector& theta,
                                   Vector* slack) {
  const std::size_t n = net.size();
  if (theta.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "theta length differs from network");
  }
  std::vector<bool> ok(n);
  if (slack) slack->assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double incoming = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) incoming += net.weight(k, i) * theta[k];
    }
    const double s = theta[i] - incoming;
    ok[i] = s >= -kDominanceSlack;
    if (slack) (*slack)[i] = s;
  }
  return ok;
}

AssumptionReport check_assumptions(const Network& net, const AgentParams& params) {
  const std::size_t n = net.size();
  if (params.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "network has " + std::to_string(n) + " agents, params " +
                    std::to_string(params.size()));
  }
  AssumptionReport r;

  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double x : net.weights().row(i)) s += x;
    r.max_row_sum_error = std::max(r.max_row_sum_error, std::fabs(s - 1.0));
  }
  r.row_stochastic = r.max_row_sum_error <= kRowSumTolerance;

  const auto fwd = reachable(net, false);
  const auto rev = reachable(net, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (!fwd[i]) r.unreachable_from_first.push_back(i);
    if (!rev[i]) r.cannot_reach_first.push_back(i);
  }
  r.strongly_connected =
      r.unreachable_from_first.empty() && r.cannot_reach_first.empty();

  r.social_dominance_per_agent =
      social_dominance(net, params.theta(), &r.social_dominance_slack);
  r.social_dominance = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!r.social_dominance_per_agent[i]) {
      r.social_dominance = false;
      r.violating_agents.push_back(i);
    }
  }

  Vector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = params.alpha()[i] * (1.0 - params.rho()[i]);
  }
  const auto sol =
      detail::solve(equilibrium_matrix(net, params), rhs, kConditionLimit);
  r.condition_number = sol.condition;
  if (sol.x) {
    double total = 0.0;
    for (double y : *sol.x) total += y;
    r.total_equilibrium_consumption = total;
    r.equilibrium_feasible = total < 1.0 - kDominanceSlack;
  }
  return r;
}

}  // namespace commons
