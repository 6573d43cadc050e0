#pragma once

#include <vector>

#include "fkpp/grid.hpp"

namespace fkpp {

/// Central second difference at interior nodes. Boundary entries: zero for
/// Dirichlet (boundary rows are owned by the boundary condition in assembled
/// systems); for Neumann, the reflection-ghost value 2(u_1 - u_0)/dx^2, which
/// is second-order accurate for profiles satisfying u' = 0 at the wall.
std::vector<double> second_derivative(const Grid& g, const Profile& u, Bc bc);

/// One-sided three-point first derivative at x = 0: (-3 u_0 + 4 u_1 - u_2)/(2 dx).
double boundary_derivative_left(const Grid& g, const Profile& u);

/// One-sided three-point first derivative at x = a: (3 u_n - 4 u_{n-1} + u_{n-2})/(2 dx).
double boundary_derivative_right(const Grid& g, const Profile& u);

} // namespace fkpp
