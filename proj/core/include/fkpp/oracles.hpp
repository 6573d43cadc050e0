#pragma once

#include <vector>

#include "fkpp/grid.hpp"

namespace fkpp {

struct SeriesOptions {
    int n_modes = 200;       // hard cap on retained Fourier modes
    double term_tol = 1e-14; // drop modes once |term| falls below this
    double quad_tol = 1e-10; // adaptive quadrature tolerance for M(t)
};

/// Exact Dirichlet solution for 0 < a <= 1/2, evaluated by Fourier series:
///   u(x,t) = J(t) sum_n A_n e^{-n^2 pi^2 D t / a^2} sin(n pi x / a),
/// with J(t) = e^t / (1 + a M(t)), M(t) the integral of e^s G(s), and G the
/// odd-mode sum fixed by the initial data. Construct once, evaluate at any t.
class DirichletSeries {
public:
    DirichletSeries(double a, double D, const Grid& g, const Profile& u0,
                    const SeriesOptions& opts = {});

    Profile eval(double t) const;
    double G(double t) const;
    double M(double t) const; // adaptive Simpson, tolerance opts.quad_tol
    double J(double t) const;
    double mean(double t) const; // spatial mean of u at time t
    const std::vector<double>& modes() const { return a_n_; }

private:
    double a_, d_;
    SeriesOptions opts_;
    Grid grid_;
    std::vector<double> a_n_; // A_n^0, 1-based stored at index n-1
    std::vector<double> tail_; // suffix max of |A_n^0| for safe truncation
};

/// Exact Neumann solution for 0 < a <= 1/2:
///   u(x,t) = N(t) (c_0/2 + sum_n c_n e^{-n^2 pi^2 D t / a^2} cos(n pi x / a)).
class NeumannSeries {
public:
    NeumannSeries(double a, double D, const Grid& g, const Profile& u0,
                  const SeriesOptions& opts = {});

    Profile eval(double t) const;
    double N(double t) const;
    const std::vector<double>& modes() const { return c_n_; } // c_0, c_1, ...

private:
    double a_, d_;
    SeriesOptions opts_;
    Grid grid_;
    std::vector<double> c_n_;
    std::vector<double> tail_; // suffix max of |c_n| for safe truncation
};

/// Convenience wrappers matching the per-call oracle interfaces.
Profile dirichlet_series(double a, double D, const Grid& g, const Profile& u0, double t,
                         const SeriesOptions& opts = {});
Profile neumann_series(double a, double D, const Grid& g, const Profile& u0, double t,
                       const SeriesOptions& opts = {});

/// Leading-order composite approximation to the Neumann steady state at the
/// midpoint for D >> 1:  a/(a - 1/4) + 1/(8 sqrt(D) sinh(a / 2 sqrt(D))) - 1/(4a).
double large_d_midpoint(double a, double D);

/// Interior level of the large-D Neumann steady state: a / (a - 1/4).
double large_d_core_constant(double a);

/// Leading-order small-D r-peak steady state. Dirichlet: r sine arches of
/// height pi/(2(lambda - 1/2)) separated by gaps of length 1/2, with
/// lambda = (a + 1/2)/r. Neumann: interior cosine arches plus boundary
/// half-peaks scaled by sqrt(2) in height and width, with
/// lambda = (a + (sqrt(2)-1)/2)/(r - 2 + sqrt(2)).
/// Throws std::domain_error if (a, r) lies outside the admissible window.
Profile small_d_profile(const Grid& g, double a, double D, int r, Bc bc);

/// Wavelength assigned to the r-peak state at domain size a.
double small_d_wavelength(double a, int r, Bc bc);

/// Branch curve r (1 - pi^2 D / (lambda(a,r) - 1/2)^2) for the r-peak echelon.
double small_d_branch_norm(double a, double D, int r, Bc bc);

struct DeltaConstants {
    double l;       // unique positive root of 6 tanh(l/2) = l
    double delta_m; // 2 l^-3 sinh(l/2)
    double delta_1; // 0.00297, quoted from the companion analysis (not recomputed)
};
DeltaConstants delta_constants();

enum class DecayRegime { subcritical, supercritical, marginal };

DecayRegime decay_regime(double a, double D);

/// Predicted large-t infinity-norm envelope: the steady-state sup for
/// D < a^2/pi^2, exp(-(pi^2 D/a^2 - 1) t) for D > a^2/pi^2 (unit amplitude),
/// and pi/(2 a t) in the marginal case.
double decay_envelope(double a, double D, double t);

/// Exponential decay rate pi^2 D / a^2 - 1 of the supercritical regime.
double decay_rate(double a, double D);

struct FisherLimitValue {
    double value = 0.0;
    bool nontrivial = false;
};

/// Steady state of the local Fisher limit on [0, abar] (valid for D >> 1 after
/// rescaling x = sqrt(D) xbar, a = sqrt(D) abar). Near the bifurcation at
/// abar = pi the weakly nonlinear form (3/4)(abar - pi) sin(pi xbar/abar) is
/// used; for larger abar the two-wall sech^2 composite.
FisherLimitValue local_fisher_limit_profile(double abar, double xbar);

} // namespace fkpp
