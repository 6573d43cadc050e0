#include "fkpp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace fkpp {

namespace {

constexpr double kPi = std::numbers::pi;

double trapz_weighted(const Grid& g, const Profile& u, const std::function<double(double)>& f) {
    double s = 0.5 * (u.front() * f(g.x.front()) + u.back() * f(g.x.back()));
    for (int i = 1; i < g.n; ++i) s += u[i] * f(g.x[i]);
    return s * g.dx;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

void require_small_interval(double a) {
    if (!(a > 0.0) || a > 0.5)
        throw std::domain_error("series solution requires 0 < a <= 1/2");
}

} // namespace

DirichletSeries::DirichletSeries(double a, double D, const Grid& g, const Profile& u0,
                                 const SeriesOptions& opts)
    : a_(a), d_(D), opts_(opts), grid_(g) {
    require_small_interval(a);
    check_profile(g, u0);
    if (opts.n_modes < 8) throw std::invalid_argument("series: need at least 8 modes");
    a_n_.resize(opts.n_modes);
    for (int n = 1; n <= opts.n_modes; ++n)
        a_n_[n - 1] = (2.0 / a_) * trapz_weighted(
                          g, u0, [&](double y) { return std::sin(n * kPi * y / a_); });
    tail_.assign(a_n_.size() + 1, 0.0);
    for (int n = static_cast<int>(a_n_.size()) - 1; n >= 0; --n)
        tail_[n] = std::max(tail_[n + 1], std::abs(a_n_[n]));
}

double DirichletSeries::G(double t) const {
    double s = 0.0;
    for (int n = 1; n <= opts_.n_modes; n += 2) {
        const double decay = std::exp(-n * n * kPi * kPi * d_ * t / (a_ * a_));
        if (t > 0.0 && decay * tail_[n - 1] < opts_.term_tol) break;
        s += a_n_[n - 1] / n * decay;
    }
    return 2.0 / kPi * s;
}

double DirichletSeries::M(double t) const {
    if (t <= 0.0) return 0.0;
    auto f = [this](double s) { return std::exp(s) * G(s); };
    // scale the tolerance by a coarse estimate so large integrals terminate
    double coarse = 0.0;
    const int panels = 64;
    for (int k = 0; k <= panels; ++k) {
        const double w = (k == 0 || k == panels) ? 0.5 : 1.0;
        coarse += w * f(t * k / panels);
    }
    coarse *= t / panels;
    const double tol = opts_.quad_tol * std::max(1.0, std::abs(coarse));
    return integrate(f, 0.0, t, tol);
}

double DirichletSeries::J(double t) const { return std::exp(t) / (1.0 + a_ * M(t)); }

double DirichletSeries::mean(double t) const { return J(t) * G(t); }

Profile DirichletSeries::eval(double t) const {
    const double j = J(t);
    Profile u(grid_.size(), 0.0);
    for (int n = 1; n <= opts_.n_modes; ++n) {
        const double decay = std::exp(-n * n * kPi * kPi * d_ * t / (a_ * a_));
        if (t > 0.0 && decay * tail_[n - 1] < opts_.term_tol) break;
        const double amp = a_n_[n - 1] * decay;
        for (int i = 0; i <= grid_.n; ++i) u[i] += amp * std::sin(n * kPi * grid_.x[i] / a_);
    }
    for (double& v : u) v *= j;
    u[0] = 0.0;
    u[grid_.n] = 0.0;
    return u;
}

NeumannSeries::NeumannSeries(double a, double D, const Grid& g, const Profile& u0,
                             const SeriesOptions& opts)
    : a_(a), d_(D), opts_(opts), grid_(g) {
    require_small_interval(a);
    check_profile(g, u0);
    c_n_.resize(opts.n_modes + 1);
    for (int r = 0; r <= opts.n_modes; ++r)
        c_n_[r] = (2.0 / a_) * trapz_weighted(
                      g, u0, [&](double y) { return std::cos(r * kPi * y / a_); });
    tail_.assign(c_n_.size() + 1, 0.0);
    for (int n = static_cast<int>(c_n_.size()) - 1; n >= 1; --n)
        tail_[n] = std::max(tail_[n + 1], std::abs(c_n_[n]));
}

double NeumannSeries::N(double t) const {
    const double half_ac0 = 0.5 * a_ * c_n_[0];
    return 1.0 / (half_ac0 + (1.0 - half_ac0) * std::exp(-t));
}

Profile NeumannSeries::eval(double t) const {
    const double nt = N(t);
    Profile u(grid_.size(), 0.5 * c_n_[0]);
    for (int n = 1; n <= opts_.n_modes; ++n) {
        const double decay = std::exp(-n * n * kPi * kPi * d_ * t / (a_ * a_));
        if (t > 0.0 && decay * tail_[n] < opts_.term_tol) break;
        const double amp = c_n_[n] * decay;
        for (int i = 0; i <= grid_.n; ++i) u[i] += amp * std::cos(n * kPi * grid_.x[i] / a_);
    }
    for (double& v : u) v *= nt;
    return u;
}

Profile dirichlet_series(double a, double D, const Grid& g, const Profile& u0, double t,
                         const SeriesOptions& opts) {
    return DirichletSeries(a, D, g, u0, opts).eval(t);
}

Profile neumann_series(double a, double D, const Grid& g, const Profile& u0, double t,
                       const SeriesOptions& opts) {
    return NeumannSeries(a, D, g, u0, opts).eval(t);
}

double large_d_midpoint(double a, double D) {
    const double sq = std::sqrt(D);
    return large_d_core_constant(a) + 1.0 / (8.0 * sq * std::sinh(a / (2.0 * sq))) -
           1.0 / (4.0 * a);
}

double large_d_core_constant(double a) {
    if (!(a > 0.5)) throw std::domain_error("large-D core constant requires a > 1/2");
    return a / (a - 0.25);
}

double small_d_wavelength(double a, int r, Bc bc) {
    if (bc == Bc::dirichlet) return (a + 0.5) / r;
    const double s = std::numbers::sqrt2;
    return (a + 0.5 * (s - 1.0)) / (r - 2.0 + s);
}

namespace {

void check_small_d_window(double a, int r, Bc bc) {
    if (bc == Bc::dirichlet) {
        if (r < 1 || !(a > 0.5 * (r - 1)) || !(a < r - 0.5))
            throw std::domain_error("small-D Dirichlet r-peak state requires a in ((r-1)/2, r-1/2)");
    } else {
        const double s = std::numbers::sqrt2;
        if (r < 2 || !(a > 0.5 * (r - 1)) || !(a < r - 0.5 * (3.0 - s)))
            throw std::domain_error(
                "small-D Neumann r-peak state requires a in ((r-1)/2, r-(3-sqrt 2)/2)");
    }
}

} // namespace

Profile small_d_profile(const Grid& g, double a, double D, int r, Bc bc) {
    if (!(D > 0.0)) throw std::domain_error("small-D profile requires D > 0");
    check_small_d_window(a, r, bc);
    const double lambda = small_d_wavelength(a, r, bc);
    const double w = lambda - 0.5;
    Profile u(g.size(), 0.0);

    if (bc == Bc::dirichlet) {
        const double height = kPi / (2.0 * w);
        for (int i = 0; i <= g.n; ++i) {
            int k = std::clamp(static_cast<int>(g.x[i] / lambda), 0, r - 1);
            double xi = g.x[i] - k * lambda;
            if (xi > w && k + 1 <= r - 1 && g.x[i] - (k + 1) * lambda >= 0.0) {
                ++k; // rounding pushed us into the previous cell's gap
                xi = g.x[i] - k * lambda;
            }
            u[i] = (xi <= w) ? height * std::sin(kPi * xi / w) : 0.0;
        }
        u[0] = 0.0;
        u[g.n] = 0.0;
    } else {
        const double b = w / std::numbers::sqrt2;       // boundary half-peak width
        const double hb = kPi / (std::numbers::sqrt2 * w); // boundary peak height
        const double hi = kPi / (2.0 * w);
        for (int i = 0; i <= g.n; ++i) {
            const double x = g.x[i];
            if (x <= b) {
                u[i] = hb * std::cos(kPi * x / (2.0 * b));
            } else if (x >= a - b) {
                u[i] = hb * std::cos(kPi * (a - x) / (2.0 * b));
            } else {
                const double y = std::fmod(x - b, lambda);
                u[i] = (y < 0.5) ? 0.0
                                 : hi * std::cos(kPi * (y - 0.5 * (lambda + 0.5)) / w);
            }
        }
    }
    for (double& v : u) v = std::max(v, 0.0); // clip rounding dips at arch edges
    return u;
}

double small_d_branch_norm(double a, double D, int r, Bc bc) {
    check_small_d_window(a, r, bc);
    const double w = small_d_wavelength(a, r, bc) - 0.5;
    return r * (1.0 - kPi * kPi * D / (w * w));
}

DeltaConstants delta_constants() {
    auto f = [](double l) { return 6.0 * std::tanh(0.5 * l) - l; };
    double lo = 4.0, hi = 8.0;
    // f(4) > 0, f(8) < 0; bisect to 1e-12
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double l = 0.5 * (lo + hi);
    DeltaConstants c;
    c.l = l;
    c.delta_m = 2.0 * std::sinh(0.5 * l) / (l * l * l);
    c.delta_1 = 0.00297; // quoted constant; its derivation lives outside this model
    return c;
}

DecayRegime decay_regime(double a, double D) {
    const double dcrit = a * a / (kPi * kPi);
    if (std::abs(D - dcrit) <= 1e-12 * dcrit) return DecayRegime::marginal;
    return D < dcrit ? DecayRegime::subcritical : DecayRegime::supercritical;
}

double decay_rate(double a, double D) { return kPi * kPi * D / (a * a) - 1.0; }

double decay_envelope(double a, double D, double t) {
    switch (decay_regime(a, D)) {
        case DecayRegime::subcritical:
            return (kPi / (2.0 * a)) * (1.0 - kPi * kPi * D / (a * a)); // steady-state sup
        case DecayRegime::supercritical:
            return std::exp(-decay_rate(a, D) * t);
        case DecayRegime::marginal:
        default:
            return kPi / (2.0 * a * t);
    }
}

FisherLimitValue local_fisher_limit_profile(double abar, double xbar) {
    FisherLimitValue out;
    if (!(abar > kPi)) return out; // no nontrivial state below the bifurcation
    out.nontrivial = true;
    if (abar - kPi < 0.4) {
        out.value = 0.75 * (abar - kPi) * std::sin(kPi * xbar / abar);
        return out;
    }
    const double c = std::log(2.0 + std::sqrt(3.0));
    auto sech2 = [](double z) {
        const double ch = std::cosh(z);
        return 1.0 / (ch * ch);
    };
    out.value = 1.0 - 1.5 * sech2(0.5 * (xbar + c)) - 1.5 * sech2(0.5 * ((abar - xbar) + c));
    return out;
}

} // namespace fkpp
