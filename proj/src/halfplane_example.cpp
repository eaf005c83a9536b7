#include "keldysh/halfplane_example.hpp"

#include <cmath>
#include <stdexcept>

namespace keldysh {

namespace {

// rho - x, rationalized so nothing cancels when x >> y.
double gap_minus(double x, double y, double rho) {
    return x > 0.0 ? y * y / (rho + x) : rho - x;
}

void check_height(double y) {
    if (!(y > 0.0))
        throw std::domain_error("halfplane example: y must be positive");
}

}  // namespace

double example_g(const ExamplePoint& pt) {
    check_height(pt.y);
    const double rho = std::hypot(pt.x, pt.y);
    return -std::sqrt(2.0) * pt.y /
           (rho * std::sqrt(gap_minus(pt.x, pt.y, rho)));
}

double example_u(const ExamplePoint& pt) {
    check_height(pt.y);
    const double rho = std::hypot(pt.x, pt.y);
    // The textbook form y (3x rho - 3x^2 - y^2) / (sqrt(2) rho^3 (rho-x)^{3/2})
    // factors through y^2 = (rho-x)(rho+x) into this shorter equivalent with
    // a single half power.
    return pt.y * (2.0 * pt.x - rho) /
           (std::sqrt(2.0) * rho * rho * rho *
            std::sqrt(gap_minus(pt.x, pt.y, rho)));
}

}  // namespace keldysh
