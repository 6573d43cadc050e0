#pragma once

#include <optional>
#include <vector>

#include "fkpp/linalg.hpp"
#include "fkpp/steady.hpp"

namespace fkpp {

enum class StabilityClass { stable, unstable, marginal };
enum class EigMode { dense, iterative };

struct StabilityResult {
    double sigma_max = 0.0;
    Profile eigenvector;               // normalised to unit infinity norm
    std::vector<double> spectrum_head; // k largest eigenvalues, descending
    StabilityClass classification = StabilityClass::marginal;
    double symmetry_defect = 0.0;      // asymmetry of the weighted similarity (diagnostic)
    double max_imag = 0.0;             // largest |Im| seen in a dense solve (expected ~0 up top)
    bool iterative_fallback = false;   // iterative mode fell back to a dense solve
};

/// Discrete linear-stability matrix about a steady state u_s:
///   M v = D v'' + (1 - K u_s) v - u_s (K v)
/// with boundary conditions eliminated. Dirichlet: the (n-1)x(n-1) interior
/// block (v = 0 at both ends). Neumann: the full (n+1)x(n+1) matrix with
/// reflection-ghost second-derivative rows at the walls, which reproduces the
/// discrete cosine modes exactly.
DenseMatrix stability_matrix(const SteadyProblem& p, const Profile& u_s);

/// Band halfwidth of the stability matrix (set by the convolution window).
int stability_band_halfwidth(const SteadyProblem& p);

/// Largest eigenvalue of a square matrix. Dense mode: full spectrum of the
/// matrix itself (the continuous problem is self-adjoint but its trapezium
/// discretisation is not exactly so; the eigenvalues are committed raw, with
/// the asymmetry of the weighted similarity W^(1/2) M W^(-1/2) reported as a
/// diagnostic, and they come out real in practice). Iterative mode: inverse
/// power iteration with the shift chosen above the target eigenvalue so the
/// rightmost eigenvalue dominates the resolvent, tolerance 1e-10 on the
/// Rayleigh-quotient change; falls back to dense after the iteration cap.
StabilityResult largest_eigenvalue(const DenseMatrix& m, EigMode mode = EigMode::dense,
                                   int k = 6, const std::vector<double>& weights = {},
                                   std::optional<double> sigma_hint = {});

/// Assemble, reduce, and solve the stability problem for a steady state.
/// sigma_hint warm-starts the iterative mode (e.g. from a neighbouring branch
/// point).
StabilityResult solve_stability(const SteadyProblem& p, const Profile& u_s,
                                EigMode mode = EigMode::dense, int k = 6,
                                std::optional<double> sigma_hint = {});

/// sigma < -tol*scale -> stable, sigma > +tol*scale -> unstable, else marginal
/// (tol = 1e-6; scale should be max(1, |u_s|_inf)).
StabilityClass classify(double sigma_max, double scale);

/// Max asymmetry |(W M)_{ij} - (W M)_{ji}| over non-boundary rows, relative to
/// the largest entry of W M, with W the diagonal trapezium-weight matrix.
/// Vanishes at constant states; O(1) for varying u_s (the convolution term is
/// not W-symmetrisable), which is why the committed spectra are the raw ones.
double weighted_symmetry_defect(const SteadyProblem& p, const Profile& u_s);

} // namespace fkpp
