#include "keldysh/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "keldysh/specfun.hpp"

namespace keldysh {
namespace {

constexpr double pi = std::numbers::pi;

double norm_radius(const Point& p) {
    double r2 = 0.0;
    for (double c : p.x) r2 += c * c;
    return std::sqrt(r2);
}

} // namespace

double c0_constant(int n, double beta) {
    TransformedParams tp{n, beta, 0.0};
    tp.validate();
    // Log-space so that strongly negative beta (large Gamma arguments on
    // both sides of the quotient) cannot overflow an intermediate.
    return std::exp(specfun::log_gamma(tp.nu()) -
                    specfun::log_gamma(0.5 * (1.0 - beta)) -
                    0.5 * n * std::log(pi));
}

double clambda_constant(const TransformedParams& tp) {
    tp.validate();
    if (!(tp.lambda > 0.0))
        throw std::invalid_argument("clambda_constant: requires lambda > 0");
    double nu = tp.nu();
    return std::exp(nu * std::log(tp.lambda) - (nu - 1.0) * std::log(2.0) -
                    0.5 * tp.n * std::log(pi) -
                    specfun::log_gamma(0.5 * (1.0 - tp.beta)));
}

Kernel::Kernel(const TransformedParams& tp, bool original, double m)
    : tp_(tp), from_original_(original), m_(m) {
    tp_.validate();
    norm_ = tp_.lambda > 0.0 ? clambda_constant(tp_)
                             : c0_constant(tp_.n, tp_.beta);
}

Kernel Kernel::p0(const TransformedParams& tp) {
    if (tp.lambda != 0.0)
        throw std::invalid_argument("Kernel::p0: lambda must be 0");
    return Kernel(tp, false, 0.0);
}

Kernel Kernel::plambda(const TransformedParams& tp) {
    if (!(tp.lambda > 0.0))
        throw std::invalid_argument("Kernel::plambda: lambda must be positive");
    return Kernel(tp, false, 0.0);
}

Kernel Kernel::q(const ProblemParams& pp) {
    return Kernel(to_transformed(pp), true, pp.m);
}

double Kernel::height_scale(double y) const {
    return from_original_ ? transform_y(m_, y) : y;
}

double Kernel::radial(double r, double y) const {
    if (!(r >= 0.0) || !(y >= 0.0))
        throw std::domain_error("kernel: require r >= 0 and y >= 0");
    double yy = height_scale(y);
    if (yy == 0.0) {
        if (r == 0.0)
            throw std::domain_error("kernel: singular at the boundary origin");
        return 0.0;
    }
    double omb = 1.0 - tp_.beta;
    double nu = tp_.nu();
    if (tp_.lambda == 0.0) {
        double rho2 = yy * yy + r * r;
        if (rho2 < 1e290)
            return factor_ * norm_ * std::pow(yy, omb) / std::pow(rho2, nu);
        // Extreme radii: assemble in log space so r^2 cannot overflow.
        double lv = std::log(norm_) + omb * std::log(yy) -
                    2.0 * nu * std::log(std::hypot(r, yy));
        return factor_ * std::exp(lv);
    }
    double rho = std::hypot(r, yy);
    double z = tp_.lambda * rho;
    if (z <= 600.0)
        return factor_ * norm_ * std::pow(yy, omb) * specfun::bessel_k(nu, z) /
               std::pow(rho, nu);
    // Deep exponential tail: the unscaled K underflows long before the
    // kernel itself must.
    double lv = std::log(norm_) + omb * std::log(yy) +
                std::log(specfun::bessel_k_scaled(nu, z)) - z -
                nu * std::log(rho);
    return factor_ * std::exp(lv);
}

double Kernel::at(const Point& p) const {
    if (static_cast<int>(p.x.size()) != tp_.n)
        throw std::invalid_argument("Kernel::at: point dimension mismatch");
    return radial(norm_radius(p), p.y);
}

double Kernel::mass_closed_form(double y) const {
    if (!(y >= 0.0)) throw std::domain_error("kernel: require y >= 0");
    if (tp_.lambda == 0.0) return factor_;  // unit mass at every height
    double yy = height_scale(y);
    if (yy == 0.0) return factor_;          // continuous boundary limit
    double s = 0.5 * (1.0 - tp_.beta);
    double z = tp_.lambda * yy;
    double pref = std::pow(2.0 * pi / tp_.lambda, 0.5 * tp_.n);
    if (z <= 600.0)
        return factor_ * norm_ * pref * std::pow(yy, s) *
               specfun::bessel_k(s, z);
    double lv = std::log(norm_ * pref) + s * std::log(yy) +
                std::log(specfun::bessel_k_scaled(s, z)) - z;
    return factor_ * std::exp(lv);
}

Kernel Kernel::scaled(double f) const {
    Kernel k = *this;
    k.factor_ *= f;
    return k;
}

double kernel_p0(const Point& pt, const TransformedParams& tp) {
    return Kernel::p0(tp).at(pt);
}

double kernel_plambda(const Point& pt, const TransformedParams& tp) {
    return Kernel::plambda(tp).at(pt);
}

double total_mass_plambda(double y, const TransformedParams& tp) {
    if (!(y > 0.0))
        throw std::domain_error("total_mass_plambda: require y > 0");
    return Kernel::plambda(tp).mass_closed_form(y);
}

double kernel_q(const Point& pt, const ProblemParams& p) {
    return Kernel::q(p).at(pt);
}

} // namespace keldysh
