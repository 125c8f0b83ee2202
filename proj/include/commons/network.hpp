#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "commons/matrix.hpp"

namespace commons {

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kDominanceSlack = 1e-12;
inline constexpr double kWeightSumTolerance = 1e-12;
inline constexpr double kConditionLimit = 1e12;

/// Directed agent graph with row-stochastic influence weights. weights(i, j)
/// is the influence agent j exerts on agent i. Instances are only produced by
/// build_network and are immutable.
class Network {
 public:
  std::size_t size() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }
  double weight(std::size_t i, std::size_t j) const noexcept {
    return weights_(i, j);
  }

 private:
  explicit Network(Matrix w) : weights_(std::move(w)) {}
  friend Network build_network(const Matrix&, bool);

  Matrix weights_;
};

/// Per-agent behavioural parameters. Construct through make_params.
class AgentParams {
 public:
  std::size_t size() const noexcept { return alpha_.size(); }
  const Vector& alpha() const noexcept { return alpha_; }
  const Vector& nu() const noexcept { return nu_; }
  const Vector& b() const noexcept { return b_; }
  const Vector& rho() const noexcept { return rho_; }
  /// Sociability nu_i / alpha_i.
  Vector theta() const;

 private:
  AgentParams(Vector alpha, Vector nu, Vector b, Vector rho)
      : alpha_(std::move(alpha)),
        nu_(std::move(nu)),
        b_(std::move(b)),
        rho_(std::move(rho)) {}
  friend AgentParams make_params(Vector, Vector, Vector, Vector);

  Vector alpha_;
  Vector nu_;
  Vector b_;
  Vector rho_;
};

AgentParams make_params(Vector alpha, Vector nu, Vector b, Vector rho);

struct AssumptionReport {
  bool row_stochastic = false;
  double max_row_sum_error = 0.0;

  bool strongly_connected = false;
  std::vector<std::size_t> unreachable_from_first;   // forward reachability
  std::vector<std::size_t> cannot_reach_first;       // reverse reachability

  bool social_dominance = false;
  std::vector<bool> social_dominance_per_agent;
  // theta_i - sum_{k != i} w_ki theta_k; negative beyond slack is a violation.
  Vector social_dominance_slack;
  std::vector<std::size_t> violating_agents;

  bool equilibrium_feasible = false;
  double condition_number = 0.0;
  // 1^T (A 1 1^T + V T)^{-1} A (1 - rho); absent when the matrix is singular.
  std::optional<double> total_equilibrium_consumption;

  bool all_pass() const noexcept {
    return row_stochastic && strongly_connected && social_dominance &&
           equilibrium_feasible;
  }
};

/// Validates raw weights and optionally row-normalises them.
Network build_network(const Matrix& raw_weights, bool normalize);

/// T = I - W: ones on the diagonal, -w_ij elsewhere.
Matrix interaction_matrix(const Network& net);

/// Induced 1-norm: largest absolute column sum.
double one_norm(const Matrix& m);

/// A 1 1^T + V T, the matrix whose inverse defines the equilibrium
/// consumption. Dimensions must already agree.
Matrix equilibrium_matrix(const Network& net, const AgentParams& params);

bool strongly_connected(const Network& net);

/// Per-agent check of theta_i >= sum_{k != i} w_ki theta_k (within slack).
std::vector<bool> social_dominance(const Network& net, const Vector& theta,
                                   Vector* slack = nullptr);

AssumptionReport check_assumptions(const Network& net, const AgentParams& params);

}  // namespace commons
