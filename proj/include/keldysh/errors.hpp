#pragma once

#include <stdexcept>
#include <string>

namespace keldysh {

// Adaptive quadrature ran out of subdivision budget.  The best estimate and
// its error bound are preserved so callers can decide whether to accept it.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& msg, double best, double bound)
        : std::runtime_error(msg), best_estimate(best), error_bound(bound) {}
    double best_estimate;
    double error_bound;
};

// Linear solver inside the finite-difference oracle failed to reach its
// residual target.
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace keldysh
