#pragma once

#include <vector>

namespace fkpp {

enum class Bc { dirichlet, neumann };

/// Problem instance: domain length a (in units of the nonlocal window length),
/// diffusivity D, and the boundary-condition kind.
struct Params {
    double a = 1.0;
    double D = 1.0;
    Bc bc = Bc::dirichlet;
};

/// Throws std::invalid_argument naming the violated precondition.
void validate(const Params& p);

/// Uniform mesh on [0, a]: n subintervals, n+1 nodes, x_0 = 0 and x_n = a.
struct Grid {
    int n = 0;
    double a = 0.0;
    double dx = 0.0;
    std::vector<double> x;

    int size() const { return n + 1; }
};

/// A solution sampled at grid nodes (n+1 values).
using Profile = std::vector<double>;

constexpr int kMinSubintervals = 8;

Grid build_grid(const Params& p, int n);
Grid build_grid(double a, int n);

/// Trapezium-rule value of the integral of u over [0, a].
double l1_norm(const Grid& g, const Profile& u);

double inf_norm(const Profile& u);

/// Throws std::invalid_argument if u does not match g or contains non-finite values.
void check_profile(const Grid& g, const Profile& u);

} // namespace fkpp
