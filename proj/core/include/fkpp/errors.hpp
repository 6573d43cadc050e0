#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fkpp {

/// Newton iteration exhausted max_iter; carries the last iterate and its residual norm.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last, double norm)
        : std::runtime_error(what), last_iterate(std::move(last)), residual_norm(norm) {}

    std::vector<double> last_iterate;
    double residual_norm;
};

class SingularJacobianError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during time integration; carries the last finite state.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t_last, std::vector<double> u_last)
        : std::runtime_error(what), t(t_last), last_state(std::move(u_last)) {}

    double t;
    std::vector<double> last_state;
};

/// A step-size controller shrank its step below the permitted minimum.
class StallError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fkpp
