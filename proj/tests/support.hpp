#pragma once
// Test fixtures and independent reference computations. Nothing here calls
// into the library's numerics: the references are written from the model
// equations with plain loops so they can catch errors in the optimized paths.

#include <functional>
#include <vector>

#include "commons/dynamics.hpp"
#include "commons/network.hpp"
#include "commons/scenarios.hpp"

namespace testing_support {

using commons::AgentParams;
using commons::Matrix;
using commons::Network;
using commons::Vector;

/// Two agents influencing each other fully, alpha = nu = 1/2, b = 1,
/// rho = (0.2, 0.4). Its equilibrium is y0 = (0.4, 0.3), x0 = 0.3.
Network two_agent_network();
AgentParams two_agent_params();

struct Instance {
  Network net;
  AgentParams params;
};

/// Random model passing every structural assumption: 2..max_agents agents,
/// social-dominance-consistent sociabilities and b, rho ~ U(0, 1].
Instance random_instance(commons::Rng& rng, std::size_t max_agents = 8);

namespace oracle {

/// Gaussian elimination with partial pivoting.
Vector solve(std::vector<Vector> a, Vector b);

struct Eq {
  Vector y0;
  double x0;
  double gamma0;
};
Eq equilibrium(const Network& net, const AgentParams& params);

/// Shifted vector field on [v, w...] written directly from the model.
Vector shifted_field(const Vector& state, const Network& net,
                     const AgentParams& params, double x0);

double lyapunov(double v, const Vector& w, const AgentParams& params, double gamma0);

/// Cyclic Jacobi rotations; eigenvalues ascending.
Vector symmetric_eigenvalues(std::vector<Vector> a);

using Field = std::function<Vector(const Vector&)>;
/// Classical RK4 with a fixed number of equal steps.
Vector rk4(const Field& f, Vector x, double t_end, std::size_t steps);

}  // namespace oracle
}  // namespace testing_support
