#pragma once

namespace keldysh {

// Worked example on the classical half plane (n = 1, beta = 0, lambda = 0):
// boundary data x_+^(-3/2), which is not locally integrable, so the
// convolution is evaluated through its antiderivative.  g is the harmonic
// extension of -2 x_+^(-1/2); differentiating in x under the convolution
// gives the solution u with the original data.  Both closed forms are
// written so that sqrt(x^2+y^2) - x never cancels (for x > 0 it is computed
// as y^2/(sqrt(x^2+y^2) + x)), keeping full accuracy out to x/y ~ 1e6 and
// beyond.
struct ExamplePoint {
    double x = 0.0;
    double y = 0.0;  // must be positive
};

// g(x, y) = -sqrt(2) y / (rho sqrt(rho - x)),  rho = sqrt(x^2 + y^2).
// Throws std::domain_error when y <= 0.
double example_g(const ExamplePoint& pt);

// u = dg/dx = y (2x - rho) / (sqrt(2) rho^3 sqrt(rho - x)).
// Boundary limits: 0 for x < 0 and x^(-3/2) for x > 0.
// Throws std::domain_error when y <= 0.
double example_u(const ExamplePoint& pt);

}  // namespace keldysh
