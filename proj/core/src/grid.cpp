#include "fkpp/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fkpp {

void validate(const Params& p) {
    if (!(p.a > 0.0) || !std::isfinite(p.a))
        throw std::invalid_argument("params: domain length a must be positive (a = " +
                                    std::to_string(p.a) + ")");
    if (!(p.D > 0.0) || !std::isfinite(p.D))
        throw std::invalid_argument("params: diffusivity D must be positive (D = " +
                                    std::to_string(p.D) + ")");
}

Grid build_grid(double a, int n) {
    if (n < kMinSubintervals)
        throw std::invalid_argument("grid: invalid resolution, need at least " +
                                    std::to_string(kMinSubintervals) + " subintervals (got " +
                                    std::to_string(n) + ")");
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("grid: domain length a must be positive");

    Grid g;
    g.n = n;
    g.a = a;
    g.dx = a / n;
    g.x.resize(n + 1);
    for (int i = 0; i <= n; ++i) g.x[i] = a * i / n;
    g.x[0] = 0.0;
    g.x[n] = a; // endpoints exact regardless of rounding
    return g;
}

Grid build_grid(const Params& p, int n) {
    validate(p);
    return build_grid(p.a, n);
}

double l1_norm(const Grid& g, const Profile& u) {
    check_profile(g, u);
    double s = 0.5 * (u.front() + u.back());
    for (int i = 1; i < g.n; ++i) s += u[i];
    return s * g.dx;
}

double inf_norm(const Profile& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
}

void check_profile(const Grid& g, const Profile& u) {
    if (static_cast<int>(u.size()) != g.size())
        throw std::invalid_argument("profile: length " + std::to_string(u.size()) +
                                    " does not match grid with " + std::to_string(g.size()) +
                                    " nodes");
    for (double v : u)
        if (!std::isfinite(v)) throw std::invalid_argument("profile: non-finite value");
}

} // namespace fkpp
