#pragma once

#include "keldysh/params.hpp"

namespace keldysh {

// Normalizing constant of the lambda = 0 boundary kernel,
//   C = Gamma(nu) / (pi^{n/2} Gamma((1-beta)/2)),  nu = (1+n-beta)/2,
// chosen so the kernel has unit mass in x at every height.
double c0_constant(int n, double beta);

// Its lambda > 0 counterpart, C_lambda = lambda^nu / (2^{nu-1} pi^{n/2}
// Gamma((1-beta)/2)).
double clambda_constant(const TransformedParams& tp);

// Boundary kernels of the constant-coefficient equation (rho = |(x,y)|):
//   P_0      = C y^{1-beta} / (y^2 + |x|^2)^nu
//   P_lambda = C_lambda y^{1-beta} K_nu(lambda rho) / rho^nu
// Defined for y > 0, extended by 0 at y = 0 off the origin; the origin
// itself is a hard error.
double kernel_p0(const Point& pt, const TransformedParams& tp);
double kernel_plambda(const Point& pt, const TransformedParams& tp);

// int_{R^n} P_lambda(x,y) dx
//   = C_lambda (2 pi / lambda)^{n/2} y^{(1-beta)/2} K_{(1-beta)/2}(lambda y).
double total_mass_plambda(double y, const TransformedParams& tp);

// Kernel of the original degenerate equation: the constant-coefficient
// kernel evaluated at the rescaled height transform_y(m, y).
double kernel_q(const Point& pt, const ProblemParams& p);

// Value-semantic handle used by the convolution and verification code;
// evaluates through the radial profile since all kernels depend on x only
// via r = |x|.
class Kernel {
public:
    static Kernel p0(const TransformedParams& tp);       // requires lambda == 0
    static Kernel plambda(const TransformedParams& tp);  // requires lambda > 0
    static Kernel q(const ProblemParams& pp);

    double radial(double r, double y) const;  // value at |x| = r, height y
    double at(const Point& p) const;          // |p.x| must match dim()

    // Height seen by the constant-coefficient formulas: y itself, or
    // transform_y(m, y) for a kernel built from the original equation.
    double height_scale(double y) const;

    // Closed-form int_{R^n} kernel(x, y) dx (identically 1 when lambda = 0).
    double mass_closed_form(double y) const;

    int dim() const { return tp_.n; }
    double beta() const { return tp_.beta; }
    double lambda() const { return tp_.lambda; }
    double nu() const { return tp_.nu(); }
    const TransformedParams& transformed() const { return tp_; }

    // Returns a copy whose values are multiplied by `factor`.  Exists so
    // tests can inject a deliberately broken kernel and watch the
    // verification machinery catch it.
    Kernel scaled(double factor) const;
    double scale_factor() const { return factor_; }

private:
    Kernel(const TransformedParams& tp, bool original, double m);

    TransformedParams tp_;
    bool from_original_;  // apply the height substitution first
    double m_;
    double norm_;         // C or C_lambda
    double factor_ = 1.0;
};

} // namespace keldysh
