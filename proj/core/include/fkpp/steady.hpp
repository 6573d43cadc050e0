#pragma once

#include <vector>

#include "fkpp/convolution.hpp"
#include "fkpp/grid.hpp"
#include "fkpp/linalg.hpp"

namespace fkpp {

/// Discretised steady problem: grid plus the convolution operator built for it.
/// Immutable; concurrent solves on one instance are safe.
struct SteadyProblem {
    Params params;
    Grid grid;
    ConvolutionOperator conv;

    static SteadyProblem make(const Params& p, int n);
};

struct NewtonOptions {
    double tol_residual = 1e-10; // infinity norm
    int max_iter = 50;
    double damping = 1.0;        // initial step fraction, halved on residual increase
    int max_halvings = 6;
};

/// Steady residual: interior rows D u'' + u (1 - K u); Dirichlet boundary rows
/// u_0 and u_n; Neumann boundary rows the three-point one-sided derivative.
std::vector<double> residual(const SteadyProblem& p, const Profile& u);

/// Analytic Jacobian of residual(): D L + diag(1 - K u) - diag(u) K with the
/// linearised boundary rows. Banded when the convolution window is narrow.
LinearSystem jacobian(const SteadyProblem& p, const Profile& u);

/// Damped Newton; throws ConvergenceError / SingularJacobianError.
Profile newton_solve(const SteadyProblem& p, Profile guess, const NewtonOptions& opts = {});

/// Exact nontrivial Dirichlet steady state for a <= 1/2, 0 < D < a^2/pi^2:
///   u_s(x) = (pi / 2a)(1 - pi^2 D / a^2) sin(pi x / a).
/// Throws std::domain_error outside that parameter range.
Profile closed_form_dirichlet(const Params& p, const Grid& g);

/// Number of strict local maxima with value >= rel_threshold * max(u); plateaus
/// of equal values count once. For Neumann, boundary nodes count as peaks when
/// they are one-sided maxima above the threshold.
int count_peaks(const Profile& u, double rel_threshold = 0.1, Bc bc = Bc::dirichlet);

} // namespace fkpp
