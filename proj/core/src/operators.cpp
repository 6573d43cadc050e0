#include "fkpp/operators.hpp"

namespace fkpp {

std::vector<double> second_derivative(const Grid& g, const Profile& u, Bc bc) {
    check_profile(g, u);
    const int n = g.n;
    const double inv = 1.0 / (g.dx * g.dx);
    std::vector<double> d(n + 1, 0.0);
    for (int i = 1; i < n; ++i) d[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv;
    if (bc == Bc::neumann) {
        d[0] = 2.0 * (u[1] - u[0]) * inv;
        d[n] = 2.0 * (u[n - 1] - u[n]) * inv;
    }
    return d;
}

double boundary_derivative_left(const Grid& g, const Profile& u) {
    return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * g.dx);
}

double boundary_derivative_right(const Grid& g, const Profile& u) {
    const int n = g.n;
    return (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * g.dx);
}

} // namespace fkpp
