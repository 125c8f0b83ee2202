#include <gtest/gtest.h>

#include <cmath>

#include "commons/error.hpp"
#include "commons/network.hpp"
#include "commons/scenarios.hpp"
#include "support.hpp"

using namespace commons;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kSchema;
}

AgentParams from_theta(const Vector& theta) {
  Vector alpha(theta.size()), nu(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    alpha[i] = 1.0 / (1.0 + theta[i]);
    nu[i] = 1.0 - alpha[i];
  }
  return make_params(alpha, nu, Vector(theta.size(), 1.0), Vector(theta.size(), 0.5));
}

}  // namespace

TEST(BuildNetwork, AcceptsRowStochasticInput) {
  const Network net = build_network(Matrix{{0, 1}, {1, 0}}, false);
  EXPECT_EQ(net.size(), 2u);
  EXPECT_EQ(net.weight(0, 1), 1.0);
  EXPECT_EQ(net.weight(1, 0), 1.0);
}

TEST(BuildNetwork, NormalizesRows) {
  const Network net = build_network(Matrix{{0, 2, 2}, {1, 0, 3}, {5, 0, 0}}, true);
  EXPECT_EQ(net.weights(), (Matrix{{0, .5, .5}, {.25, 0, .75}, {1, 0, 0}}));
}

TEST(BuildNetwork, RejectsMalformedWeights) {
  EXPECT_EQ(code_of([] { build_network(Matrix{{0, 1}, {0, 0}}, true); }),
            ErrorCode::kZeroOutDegreeRow);
  EXPECT_EQ(code_of([] { build_network(Matrix{{0, 1}, {0, 0}}, false); }),
            ErrorCode::kZeroOutDegreeRow);
  EXPECT_EQ(code_of([] { build_network(Matrix(2, 3), true); }), ErrorCode::kNonSquare);
  EXPECT_EQ(code_of([] { build_network(Matrix{{0, -1}, {1, 0}}, true); }),
            ErrorCode::kNegativeWeight);
  EXPECT_EQ(code_of([] { build_network(Matrix{{1, 1}, {1, 0}}, true); }),
            ErrorCode::kNonzeroDiagonal);
  EXPECT_EQ(code_of([] { build_network(Matrix{{0, 0.9}, {1, 0}}, false); }),
            ErrorCode::kRowSumMismatch);
  EXPECT_EQ(code_of([] { build_network(Matrix{{0}}, true); }), ErrorCode::kTooFewAgents);
}

TEST(BuildNetwork, RowSumToleranceIsOneInABillion) {
  EXPECT_NO_THROW(build_network(Matrix{{0, 1 + 5e-10}, {1, 0}}, false));
  EXPECT_THROW(build_network(Matrix{{0, 1 + 5e-9}, {1, 0}}, false), Error);
}

TEST(InteractionMatrix, SmallestAndUniformNetworks) {
  EXPECT_EQ(interaction_matrix(build_network(Matrix{{0, 1}, {1, 0}}, false)),
            (Matrix{{1, -1}, {-1, 1}}));
  const Network uniform = build_network(Matrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, true);
  EXPECT_EQ(interaction_matrix(uniform),
            (Matrix{{1, -.5, -.5}, {-.5, 1, -.5}, {-.5, -.5, 1}}));
}

TEST(InteractionMatrix, AnnihilatesOnesOnRandomNetworks) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + rng.below(20);
    const std::size_t m = std::min(n * (n - 1), 2 * n + rng.below(n * n));
    const Matrix t = interaction_matrix(random_network(n, m, rng.below(1u << 30)));
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += t(i, j);
      EXPECT_NEAR(s, 0.0, 1e-12);
    }
  }
}

TEST(OneNorm, ColumnSums) {
  EXPECT_EQ(one_norm(Matrix{{1, -1}, {-1, 1}}), 2.0);
  EXPECT_EQ(one_norm(Matrix::identity(5)), 1.0);
  const Network uniform = build_network(Matrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}, true);
  EXPECT_EQ(one_norm(interaction_matrix(uniform)), 2.0);
}

TEST(OneNorm, InteractionMatrixAtLeastOne) {
  Rng rng(6);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 2 + rng.below(10);
    const Network net = random_network(n, std::min(n * (n - 1), 2 * n), rng.below(1u << 30));
    EXPECT_GE(one_norm(interaction_matrix(net)), 1.0);
  }
}

TEST(CheckAssumptions, SocialDominanceEqualityAndViolation) {
  const Network net = build_network(Matrix{{0, 1}, {1, 0}}, false);
  const auto ok = check_assumptions(net, from_theta({1, 1}));
  EXPECT_TRUE(ok.social_dominance);
  EXPECT_EQ(ok.social_dominance_per_agent, (std::vector<bool>{true, true}));

  const auto bad = check_assumptions(net, from_theta({1, 3}));
  EXPECT_FALSE(bad.social_dominance);
  EXPECT_EQ(bad.violating_agents, (std::vector<std::size_t>{0}));
  EXPECT_NEAR(bad.social_dominance_slack[0], -2.0, 1e-12);
  EXPECT_FALSE(bad.all_pass());
}

TEST(CheckAssumptions, TwoAgentEquilibriumFeasible) {
  const auto r = check_assumptions(testing_support::two_agent_network(),
                                   testing_support::two_agent_params());
  EXPECT_TRUE(r.equilibrium_feasible);
  ASSERT_TRUE(r.total_equilibrium_consumption.has_value());
  EXPECT_NEAR(*r.total_equilibrium_consumption, 0.7, 1e-12);
  EXPECT_NEAR(r.condition_number, 1.0, 1e-12);  // the matrix is the identity
  EXPECT_TRUE(r.all_pass());
}

TEST(CheckAssumptions, InfeasibleWhenMatrixIsSingular) {
  // Two disconnected pairs: the equilibrium system has no unique solution.
  const Network net = build_network(
      Matrix{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}, false);
  const auto params = make_params(Vector(4, 1e-14), Vector(4, 1 - 1e-14), Vector(4, 1),
                                  Vector(4, 0.5));
  const auto r = check_assumptions(net, params);
  EXPECT_FALSE(r.equilibrium_feasible);
  EXPECT_FALSE(r.all_pass());
}

TEST(CheckAssumptions, PositiveThresholdsKeepTotalConsumptionBelowOne) {
  // Weighting each agent's balance by pi_i / nu_i (pi stationary for W)
  // cancels the coupling, so x0 is a weighted mean of the thresholds.
  Rng rng(10);
  for (int k = 0; k < 100; ++k) {
    const auto inst = testing_support::random_instance(rng);
    const auto r = check_assumptions(inst.net, inst.params);
    ASSERT_TRUE(r.total_equilibrium_consumption.has_value());
    const Vector pi = inst.params.theta();  // proportional to the stationary vector here
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      const double weight = pi[i] * inst.params.alpha()[i] / inst.params.nu()[i];
      num += weight * inst.params.rho()[i];
      den += weight;
    }
    EXPECT_NEAR(1.0 - *r.total_equilibrium_consumption, num / den, 1e-10);
    EXPECT_LT(*r.total_equilibrium_consumption, 1.0);
  }
}

TEST(CheckAssumptions, DetectsDisconnectedGraphInBothDirections) {
  // Agent 0 listens to agent 1, but nobody listens to agent 0.
  const Network net = build_network(Matrix{{0, 1, 0}, {0, 0, 1}, {0, 1, 0}}, false);
  const auto r = check_assumptions(net, from_theta({1, 1, 1}));
  EXPECT_FALSE(r.strongly_connected);
  EXPECT_EQ(r.unreachable_from_first, (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(r.cannot_reach_first.empty());
}

TEST(CheckAssumptions, DimensionMismatch) {
  EXPECT_THROW(check_assumptions(testing_support::two_agent_network(), from_theta({1, 1, 1})),
               Error);
}

TEST(CheckAssumptions, PureFunction) {
  Rng rng(8);
  const auto inst = testing_support::random_instance(rng);
  const auto a = check_assumptions(inst.net, inst.params);
  const auto b = check_assumptions(inst.net, inst.params);
  EXPECT_EQ(a.social_dominance_slack, b.social_dominance_slack);
  EXPECT_EQ(a.condition_number, b.condition_number);
  EXPECT_EQ(a.total_equilibrium_consumption, b.total_equilibrium_consumption);
}

TEST(CheckAssumptions, AggregateIsConjunctionOfAgents) {
  Rng rng(9);
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 2 + rng.below(6);
    const Network net = random_network(n, std::min(n * (n - 1), 2 * n), rng.below(1u << 30));
    Vector theta(n);
    for (double& t : theta) t = rng.uniform(0.05, 2.0);
    const auto r = check_assumptions(net, from_theta(theta));
    bool all = true;
    for (bool ok : r.social_dominance_per_agent) all = all && ok;
    EXPECT_EQ(r.social_dominance, all);
    EXPECT_EQ(r.violating_agents.empty(), all);
  }
}

TEST(MakeParams, RejectsInvalidEntries) {
  EXPECT_EQ(code_of([] { make_params({0.0, 0.5}, {1.0, 0.5}, {1, 1}, {1, 1}); }),
            ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { make_params({0.5, 0.5}, {0.6, 0.5}, {1, 1}, {1, 1}); }),
            ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { make_params({0.5, 0.5}, {0.5, 0.5}, {0, 1}, {1, 1}); }),
            ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { make_params({0.5, 0.5}, {0.5, 0.5}, {1, 1}, {1, -1}); }),
            ErrorCode::kInvalidParams);
  EXPECT_EQ(code_of([] { make_params({0.5}, {0.5, 0.5}, {1, 1}, {1, 1}); }),
            ErrorCode::kDimensionMismatch);
}

TEST(MakeParams, ThetaAccessor) {
  const auto p = make_params({0.25, 1.0}, {0.75, 0.0}, {1, 1}, {1, 1});
  EXPECT_EQ(p.theta(), (Vector{3.0, 0.0}));
}
