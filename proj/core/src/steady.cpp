#include "fkpp/steady.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fkpp/errors.hpp"
#include "fkpp/operators.hpp"

namespace fkpp {

SteadyProblem SteadyProblem::make(const Params& p, int n) {
    validate(p);
    Grid g = build_grid(p, n);
    ConvolutionOperator conv = build_convolution(g, p);
    return SteadyProblem{p, std::move(g), std::move(conv)};
}

std::vector<double> residual(const SteadyProblem& p, const Profile& u) {
    check_profile(p.grid, u);
    const int n = p.grid.n;
    const double dx2 = p.grid.dx * p.grid.dx;
    const double D = p.params.D;
    const std::vector<double> conv = p.conv.apply(u);

    std::vector<double> r(n + 1);
    for (int i = 1; i < n; ++i)
        r[i] = D * (u[i - 1] - 2.0 * u[i] + u[i + 1]) / dx2 + u[i] * (1.0 - conv[i]);
    if (p.params.bc == Bc::dirichlet) {
        r[0] = u[0];
        r[n] = u[n];
    } else {
        r[0] = boundary_derivative_left(p.grid, u);
        r[n] = boundary_derivative_right(p.grid, u);
    }
    return r;
}

LinearSystem jacobian(const SteadyProblem& p, const Profile& u) {
    check_profile(p.grid, u);
    const int n = p.grid.n;
    const int m = n + 1;
    const double dx = p.grid.dx;
    const double dx2 = dx * dx;
    const double D = p.params.D;
    const std::vector<double> conv = p.conv.apply(u);

    const int hw = std::max(p.conv.band_halfwidth(), 2);
    const bool use_band = 2 * hw + 1 <= m; // dense is cheaper once the band covers the matrix
    LinearSystem J = use_band ? LinearSystem::banded(m, hw, hw) : LinearSystem::dense(m);

    for (int i = 1; i < n; ++i) {
        J.add(i, i - 1, D / dx2);
        J.add(i, i, -2.0 * D / dx2 + (1.0 - conv[i]));
        J.add(i, i + 1, D / dx2);
        const auto w = p.conv.row_weights(i);
        const int first = p.conv.row_begin(i);
        for (size_t k = 0; k < w.size(); ++k)
            J.add(i, first + static_cast<int>(k), -u[i] * w[k]);
    }
    if (p.params.bc == Bc::dirichlet) {
        J.set(0, 0, 1.0);
        J.set(n, n, 1.0);
    } else {
        J.set(0, 0, -3.0 / (2.0 * dx));
        J.set(0, 1, 4.0 / (2.0 * dx));
        J.set(0, 2, -1.0 / (2.0 * dx));
        J.set(n, n, 3.0 / (2.0 * dx));
        J.set(n, n - 1, -4.0 / (2.0 * dx));
        J.set(n, n - 2, 1.0 / (2.0 * dx));
    }
    return J;
}

Profile newton_solve(const SteadyProblem& p, Profile guess, const NewtonOptions& opts) {
    check_profile(p.grid, guess);
    if (opts.max_iter < 1) throw std::invalid_argument("newton: max_iter must be >= 1");
    if (!(opts.tol_residual > 0.0)) throw std::invalid_argument("newton: tol must be positive");

    Profile u = std::move(guess);
    std::vector<double> r = residual(p, u);
    double norm = inf_norm(r);

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (norm <= opts.tol_residual) return u;

        LinearFactor lu(jacobian(p, u));
        std::vector<double> delta(r.size());
        for (size_t i = 0; i < r.size(); ++i) delta[i] = -r[i];
        lu.solve_in_place(delta);

        // residual-monotone backtracking: a step that cannot decrease the
        // residual within max_halvings is a failure, not progress
        double lambda = opts.damping;
        Profile trial(u.size());
        std::vector<double> rt;
        double nt = 0.0;
        bool improved = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            for (size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + lambda * delta[i];
            rt = residual(p, trial);
            nt = inf_norm(rt);
            if (std::isfinite(nt) && nt < norm) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) {
            char msg[64];
            std::snprintf(msg, sizeof msg, "newton: stagnated at |r|_inf = %.3e", norm);
            throw ConvergenceError(msg, u, norm);
        }
        u.swap(trial);
        r.swap(rt);
        norm = nt;
    }
    if (norm <= opts.tol_residual) return u;
    char msg[96];
    std::snprintf(msg, sizeof msg, "newton: no convergence after %d iterations (|r|_inf = %.3e)",
                  opts.max_iter, norm);
    throw ConvergenceError(msg, u, norm);
}

Profile closed_form_dirichlet(const Params& p, const Grid& g) {
    const double pi = std::numbers::pi;
    if (p.a > 0.5)
        throw std::domain_error("closed-form Dirichlet state requires a <= 1/2");
    const double dcrit = p.a * p.a / (pi * pi);
    if (!(p.D > 0.0) || p.D >= dcrit)
        throw std::domain_error("closed-form Dirichlet state requires 0 < D < a^2/pi^2");
    const double amp = (pi / (2.0 * p.a)) * (1.0 - pi * pi * p.D / (p.a * p.a));
    Profile u(g.size());
    for (int i = 0; i <= g.n; ++i) u[i] = amp * std::sin(pi * g.x[i] / p.a);
    u[0] = 0.0;
    u[g.n] = 0.0;
    return u;
}

int count_peaks(const Profile& u, double rel_threshold, Bc bc) {
    if (!(rel_threshold > 0.0) || !(rel_threshold < 1.0))
        throw std::invalid_argument("count_peaks: rel_threshold must lie in (0, 1)");
    const int m = static_cast<int>(u.size());
    if (m == 0) return 0;
    const double umax = *std::max_element(u.begin(), u.end());
    if (!(umax > 0.0)) return 0;
    const double cut = rel_threshold * umax;

    int peaks = 0;
    int i = 0;
    while (i < m) {
        int j = i;
        while (j + 1 < m && u[j + 1] == u[i]) ++j; // plateau [i, j]
        const double v = u[i];
        if (i == 0 && j == m - 1) break; // a constant profile has no maxima
        const bool left_ok = (i == 0) ? (bc == Bc::neumann) : (u[i - 1] < v);
        const bool right_ok = (j == m - 1) ? (bc == Bc::neumann) : (u[j + 1] < v);
        if (left_ok && right_ok && v >= cut) ++peaks;
        i = j + 1;
    }
    return peaks;
}

} // namespace fkpp
