#include "fkpp/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

// Reduced stability matrix plus the trapezium weights of the retained nodes.
struct ReducedProblem {
    DenseMatrix m;
    std::vector<double> w;
    int hw = 0; // band halfwidth of m
    bool dirichlet = false;
};

ReducedProblem assemble_reduced(const SteadyProblem& p, const Profile& u_s) {
    check_profile(p.grid, u_s);
    const int n = p.grid.n;
    const double dx = p.grid.dx;
    const double dx2 = dx * dx;
    const double D = p.params.D;
    const std::vector<double> conv_us = p.conv.apply(u_s);

    ReducedProblem red;
    red.dirichlet = (p.params.bc == Bc::dirichlet);
    red.hw = std::max(p.conv.band_halfwidth(), 2);

    if (red.dirichlet) {
        const int m = n - 1; // interior nodes 1..n-1
        red.m = DenseMatrix(m, m);
        red.w.assign(m, dx);
        for (int i = 1; i < n; ++i) {
            const int r = i - 1;
            if (i - 1 >= 1) red.m(r, i - 2) += D / dx2;
            red.m(r, r) += -2.0 * D / dx2 + (1.0 - conv_us[i]);
            if (i + 1 <= n - 1) red.m(r, i) += D / dx2;
            const auto wts = p.conv.row_weights(i);
            const int first = p.conv.row_begin(i);
            for (size_t k = 0; k < wts.size(); ++k) {
                const int j = first + static_cast<int>(k);
                if (j >= 1 && j <= n - 1) red.m(r, j - 1) += -u_s[i] * wts[k];
            }
        }
    } else {
        const int m = n + 1;
        red.m = DenseMatrix(m, m);
        red.w.assign(m, dx);
        red.w[0] = red.w[n] = 0.5 * dx;
        for (int i = 0; i <= n; ++i) {
            if (i == 0) { // reflection-ghost second derivative: 2(v_1 - v_0)/dx^2
                red.m(0, 0) += -2.0 * D / dx2;
                red.m(0, 1) += 2.0 * D / dx2;
            } else if (i == n) {
                red.m(n, n) += -2.0 * D / dx2;
                red.m(n, n - 1) += 2.0 * D / dx2;
            } else {
                red.m(i, i - 1) += D / dx2;
                red.m(i, i) += -2.0 * D / dx2;
                red.m(i, i + 1) += D / dx2;
            }
            red.m(i, i) += 1.0 - conv_us[i];
            const auto wts = p.conv.row_weights(i);
            const int first = p.conv.row_begin(i);
            for (size_t k = 0; k < wts.size(); ++k)
                red.m(i, first + static_cast<int>(k)) += -u_s[i] * wts[k];
        }
    }
    return red;
}

// Asymmetry of W^(1/2) M W^(-1/2) relative to its largest entry.
double similarity_defect(const DenseMatrix& m, const std::vector<double>& w) {
    const int n = m.rows();
    std::vector<double> sq(n, 1.0);
    if (!w.empty())
        for (int i = 0; i < n; ++i) sq[i] = std::sqrt(w[i]);
    double max_abs = 0.0, max_asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double sij = sq[i] * m(i, j) / sq[j];
            const double sji = sq[j] * m(j, i) / sq[i];
            max_abs = std::max({max_abs, std::abs(sij), std::abs(sji)});
            max_asym = std::max(max_asym, std::abs(sij - sji));
        }
    return max_abs > 0.0 ? max_asym / max_abs : 0.0;
}

int band_halfwidth_of(const DenseMatrix& m) {
    const int n = m.rows();
    int hw = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m(i, j) != 0.0) hw = std::max(hw, std::abs(i - j));
    return hw;
}

BandMatrix band_copy(const DenseMatrix& m, int hw) {
    const int n = m.rows();
    BandMatrix b(n, hw, hw);
    for (int i = 0; i < n; ++i) {
        const int jlo = std::max(0, i - hw);
        const int jhi = std::min(n - 1, i + hw);
        for (int j = jlo; j <= jhi; ++j) b.at(i, j) = m(i, j);
    }
    return b;
}

// (M - s I), factorisable; banded when the band is narrow.
LinearFactor shifted_factor(const DenseMatrix& m, int hw, double s) {
    const int n = m.rows();
    if (2 * hw + 1 <= n) {
        LinearSystem sys = LinearSystem::banded(n, hw, hw);
        sys.band() = band_copy(m, hw);
        for (int i = 0; i < n; ++i) sys.band().at(i, i) -= s;
        return LinearFactor(std::move(sys));
    }
    LinearSystem sys = LinearSystem::dense(n);
    sys.dense_ref() = m;
    for (int i = 0; i < n; ++i) sys.dense_ref()(i, i) -= s;
    return LinearFactor(std::move(sys));
}

std::vector<double> start_vector(int n, int seed = 0) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.3 * std::cos(2.5 * i + 0.7 * seed) +
                                       0.1 * std::sin(1.3 * i * (seed + 1));
    return v;
}

struct InverseIterResult {
    double sigma = 0.0;
    std::vector<double> vec;
    bool converged = false;
};

// Block shift-invert subspace iteration with Rayleigh-Ritz extraction. The
// shift sits above the (real) rightmost eigenvalue, so the block captures the
// cluster nearest the top and the largest Ritz value converges to sigma_max
// even when the leading eigenvalues are closely spaced (echelon states).
InverseIterResult shift_invert_top(const DenseMatrix& m, int hw, const BandMatrix* band,
                                   double s0, double tol, int max_outer) {
    const int n = m.rows();
    const int b = std::min(5, n);
    InverseIterResult out;
    auto mul = [&](const std::vector<double>& x) {
        return band ? band->multiply(x) : m.multiply(x);
    };

    // column-orthonormal start basis
    std::vector<std::vector<double>> v(b);
    for (int j = 0; j < b; ++j) v[j] = start_vector(n, j);
    auto orthonormalise = [&](std::vector<std::vector<double>>& w) {
        for (int j = 0; j < b; ++j) {
            for (int i = 0; i < j; ++i) {
                double dot = 0.0;
                for (int r = 0; r < n; ++r) dot += w[i][r] * w[j][r];
                for (int r = 0; r < n; ++r) w[j][r] -= dot * w[i][r];
            }
            double nrm = 0.0;
            for (double x : w[j]) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (!(nrm > 1e-300)) { // refill a collapsed direction
                w[j] = start_vector(n, j + 17);
                nrm = 0.0;
                for (double x : w[j]) nrm += x * x;
                nrm = std::sqrt(nrm);
            }
            for (double& x : w[j]) x /= nrm;
        }
    };
    orthonormalise(v);

    double s = s0;
    double theta_prev = 1e300;
    int outer_total = 0;
    for (int phase = 0; phase < 4 && outer_total < max_outer; ++phase) {
        LinearFactor fac = [&]() {
            try {
                return shifted_factor(m, hw, s);
            } catch (const SingularJacobianError&) {
                return shifted_factor(m, hw, s + 1e-8 * std::max(1.0, std::abs(s)));
            }
        }();
        bool reshift = false;
        for (int it = 0; it < 80 && outer_total < max_outer && !reshift; ++it, ++outer_total) {
            for (int j = 0; j < b; ++j) fac.solve_in_place(v[j]);
            orthonormalise(v);
            // Rayleigh-Ritz on the block
            std::vector<std::vector<double>> mv(b);
            for (int j = 0; j < b; ++j) mv[j] = mul(v[j]);
            DenseMatrix h(b, b);
            for (int i = 0; i < b; ++i)
                for (int j = 0; j < b; ++j) {
                    double dot = 0.0;
                    for (int r = 0; r < n; ++r) dot += v[i][r] * mv[j][r];
                    h(i, j) = dot;
                }
            // small dense eigenproblem for the Ritz values/vectors
            DenseMatrix hwork = h;
            std::vector<double> wr(b), wi(b), vr(static_cast<size_t>(b) * b);
            if (!small_eig(hwork, wr, wi, vr)) return out;
            int top = 0;
            for (int j = 1; j < b; ++j)
                if (wr[j] > wr[top]) top = j;
            const double theta = wr[top];
            std::vector<double> x(n, 0.0);
            for (int j = 0; j < b; ++j)
                for (int r = 0; r < n; ++r) x[r] += vr[static_cast<size_t>(j) * b + top] * v[j][r];
            double xn = 0.0;
            for (double q : x) xn += q * q;
            xn = std::sqrt(xn);
            if (!(xn > 0.0)) return out;
            for (double& q : x) q /= xn;

            if (std::abs(theta - theta_prev) < tol * std::max(1.0, std::abs(theta))) {
                std::vector<double> mx = mul(x);
                double rnorm = 0.0, mnorm = 1e-300;
                for (int r = 0; r < n; ++r) {
                    rnorm = std::max(rnorm, std::abs(mx[r] - theta * x[r]));
                    mnorm = std::max(mnorm, std::abs(mx[r]));
                }
                if (rnorm <= 1e-7 * std::max(1.0, mnorm)) {
                    out.sigma = theta;
                    out.vec = std::move(x);
                    out.converged = true;
                    return out;
                }
                reshift = true;
                s = theta + 0.01;
            }
            theta_prev = theta;
        }
        if (!reshift) s = theta_prev + 0.01; // stalled: tighten the shift
    }
    return out;
}

void normalise_inf(std::vector<double>& v) {
    double m = 0.0;
    int arg = 0;
    for (size_t i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > m) {
            m = std::abs(v[i]);
            arg = static_cast<int>(i);
        }
    if (m == 0.0) return;
    const double scale = (v[arg] > 0.0 ? 1.0 : -1.0) / m;
    for (double& x : v) x *= scale;
}

// Core solve on a reduced matrix; weights only feed the symmetry diagnostic.
StabilityResult eig_core(const DenseMatrix& m, int hw, EigMode mode, int k,
                         const std::vector<double>& w, std::optional<double> hint,
                         double scale) {
    const int n = m.rows();
    StabilityResult res;
    res.symmetry_defect = similarity_defect(m, w);

    const bool banded = 2 * hw + 1 <= n;
    BandMatrix bm;
    if (banded) bm = band_copy(m, hw);

    bool need_dense = (mode == EigMode::dense);
    if (mode == EigMode::iterative) {
        const double s0 = hint ? *hint + 0.1 : 2.0; // above sigma_max for this operator family
        InverseIterResult ii =
            shift_invert_top(m, hw, banded ? &bm : nullptr, s0, 1e-10, 10000);
        if (ii.converged) {
            res.sigma_max = ii.sigma;
            res.spectrum_head = {ii.sigma};
            res.eigenvector = std::move(ii.vec);
        } else {
            res.iterative_fallback = true;
            need_dense = true;
        }
    }
    if (need_dense) {
        auto ev = general_eigenvalues(m);
        std::vector<double> re(ev.size());
        for (size_t i = 0; i < ev.size(); ++i) {
            re[i] = ev[i].real();
            res.max_imag = std::max(res.max_imag, std::abs(ev[i].imag()));
        }
        std::sort(re.rbegin(), re.rend());
        re.resize(std::min<size_t>(re.size(), k));
        res.spectrum_head = re;
        res.sigma_max = re.front();
        // eigenvector by inverse iteration at a shift just above sigma_max
        const double delta = 1e-6 * std::max(1.0, std::abs(res.sigma_max));
        InverseIterResult ii = shift_invert_top(m, hw, banded ? &bm : nullptr,
                                                res.sigma_max + delta, 1e-12, 400);
        res.eigenvector = ii.converged ? std::move(ii.vec) : start_vector(n);
    }
    normalise_inf(res.eigenvector);
    res.classification = classify(res.sigma_max, scale);
    return res;
}

} // namespace

DenseMatrix stability_matrix(const SteadyProblem& p, const Profile& u_s) {
    return assemble_reduced(p, u_s).m;
}

int stability_band_halfwidth(const SteadyProblem& p) {
    return std::max(p.conv.band_halfwidth(), 2);
}

StabilityResult largest_eigenvalue(const DenseMatrix& m, EigMode mode, int k,
                                   const std::vector<double>& weights,
                                   std::optional<double> sigma_hint) {
    return eig_core(m, band_halfwidth_of(m), mode, k, weights, sigma_hint, 1.0);
}

StabilityResult solve_stability(const SteadyProblem& p, const Profile& u_s, EigMode mode, int k,
                                std::optional<double> sigma_hint) {
    ReducedProblem red = assemble_reduced(p, u_s);
    const double scale = std::max(1.0, inf_norm(u_s));
    StabilityResult res = eig_core(red.m, red.hw, mode, k, red.w, sigma_hint, scale);
    if (red.dirichlet) { // pad the boundary zeros back in
        Profile full(p.grid.size(), 0.0);
        for (int i = 0; i < red.m.rows(); ++i) full[i + 1] = res.eigenvector[i];
        res.eigenvector = std::move(full);
    }
    return res;
}

StabilityClass classify(double sigma_max, double scale) {
    const double tol = 1e-6 * scale;
    if (sigma_max < -tol) return StabilityClass::stable;
    if (sigma_max > tol) return StabilityClass::unstable;
    return StabilityClass::marginal;
}

double weighted_symmetry_defect(const SteadyProblem& p, const Profile& u_s) {
    ReducedProblem red = assemble_reduced(p, u_s);
    const int n = red.m.rows();
    double max_abs = 0.0, max_asym = 0.0;
    const int lo = red.dirichlet ? 0 : 1;
    const int hi = red.dirichlet ? n : n - 1;
    for (int i = lo; i < hi; ++i)
        for (int j = lo; j < hi; ++j) {
            const double wij = red.w[i] * red.m(i, j);
            max_abs = std::max(max_abs, std::abs(wij));
            if (j > i) {
                const double wji = red.w[j] * red.m(j, i);
                max_asym = std::max(max_asym, std::abs(wij - wji));
            }
        }
    return max_abs > 0.0 ? max_asym / max_abs : 0.0;
}

} // namespace fkpp
