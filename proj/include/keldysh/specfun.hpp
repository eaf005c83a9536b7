#pragma once

namespace keldysh::specfun {

// Accuracy targets the implementations below are tested against.
struct SpecFunAccuracy {
    static constexpr double gamma_rel = 1e-12;
    static constexpr double bessel_k_rel = 1e-10;
};

// Gamma function for real x.  Throws std::domain_error at poles
// (x = 0, -1, -2, ...) and std::overflow_error for x > 171.624.
double gamma(double x);

// log |Gamma(x)| for x > 0.
double log_gamma(double x);

// Modified Bessel function of the second kind, K_nu(z), for nu >= 0, z > 0.
// Throws std::domain_error for nu < 0 or z <= 0, std::underflow_error when
// the result underflows (z large), std::overflow_error when it overflows
// (z tiny and nu large).
double bessel_k(double nu, double z);

// exp(z) * K_nu(z): removes the dominant exponential decay so large-z values
// stay representable.
double bessel_k_scaled(double nu, double z);

// Surface area of the unit sphere S^{d-1} in R^d: 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int d);

} // namespace keldysh::specfun
