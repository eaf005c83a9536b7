#pragma once

#include <functional>

namespace keldysh {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_subdivisions = 10000;
    double truncation_mass = 1e-10;  // neglected kernel tail mass, convolve only

    // Invariants required by the convolution entry points; plain integrate()
    // accepts anything (tests deliberately starve the budget).
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error_bound = 0.0;  // rigorous-in-practice estimate, not a proof
    int subdivisions = 0;
};

// Adaptive (G7,K15) Gauss-Kronrod integration of f over [a,b].  Stops when
// the summed error estimate drops below max(abs_tol, rel_tol*|value|);
// throws quadrature_error (with the best estimate attached) if the
// subdivision budget runs out first.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, const QuadratureConfig& cfg = {});

// Same contract for integrands with algebraic endpoint behaviour
// f ~ c|x-a|^{gamma_a} near a and ~ c|x-b|^{gamma_b} near b (gamma > -1,
// gamma = 0 meaning regular).  A power substitution flattens each
// singularity; f is never evaluated at a or b themselves.
QuadResult integrate_endpoint_singular(const std::function<double(double)>& f,
                                       double a, double b, double gamma_a,
                                       double gamma_b,
                                       const QuadratureConfig& cfg = {});

} // namespace keldysh
