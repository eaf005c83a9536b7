#include "keldysh/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "keldysh/errors.hpp"
#include "keldysh/specfun.hpp"

namespace keldysh {
namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

double rpow(double r, int n) {  // r^(n-1)
    if (n == 1) return 1.0;
    if (n == 2) return r;
    if (n == 3) return r * r;
    return std::pow(r, n - 1);
}

struct Acc {
    double value = 0.0;
    double err = 0.0;
    void add(const QuadResult& q) {
        value += q.value;
        err += q.error_bound;
    }
};

// Plain rule when both exponents vanish, collar substitution otherwise.
QuadResult seg_integrate(const std::function<double(double)>& h, double lo,
                         double hi, double g_lo, double g_hi,
                         const QuadratureConfig& cfg) {
    if (!(lo < hi)) return {};  // segment collapsed by rounding
    if (g_lo == 0.0 && g_hi == 0.0) return integrate(h, lo, hi, cfg);
    return integrate_endpoint_singular(h, lo, hi, g_lo, g_hi, cfg);
}

// Endpoint exponent of the compactified far integrand at w = 0 (r = inf):
// for lambda = 0 the integrand behaves like w^{-beta} there, for lambda > 0
// the exponential decay makes it flat.
double far_infinity_exponent(const Kernel& k) {
    return k.lambda() == 0.0 ? -std::max(k.beta(), 0.0) : 0.0;
}

// integral over [r_lo, r_hi] of weight(r) kernel(r, y) r^{n-1} dr.
//
// Substitution r = Y tan(theta) with Y = height_scale(y) centers resolution
// where the kernel concentrates.  Past r = Y (theta = pi/4) the complement
// angle w = pi/2 - theta = atan(Y/r) is used as the variable instead: near
// theta = pi/2 the double grid resolves w to full precision while theta
// itself would carry O(eps)/w^2 relative noise in r.  atan(1) rounds to the
// same double from both sides, so the two segments share their breakpoint.
Acc weighted_radial(const Kernel& k, double y, double r_lo, double r_hi,
                    const std::function<double(double)>& weight,
                    const QuadratureConfig& cfg) {
    const double Y = k.height_scale(y);
    const int n = k.dim();
    auto val = [&](double r) {
        double w = weight ? weight(r) : 1.0;
        return w * k.radial(r, y) * rpow(r, n);
    };
    QuadratureConfig part = cfg;
    part.rel_tol = 0.5 * cfg.rel_tol;
    part.abs_tol = 0.5 * cfg.abs_tol;

    Acc acc;
    double r_split = std::min(r_hi, Y);
    if (r_lo < r_split) {
        auto h = [&](double th) {
            double c = std::cos(th);
            return val(Y * std::tan(th)) * Y / (c * c);
        };
        acc.add(integrate(h, std::atan(r_lo / Y), std::atan(r_split / Y),
                          part));
    }
    double r_far = std::max(r_lo, Y);
    if (r_far < r_hi) {
        auto h = [&](double w) {
            double s = std::sin(w), c = std::cos(w);
            double r = Y * c / s;
            if (!(r < 1e300)) return 0.0;  // kernel mass is long gone
            return val(r) * Y / (s * s);
        };
        double w_hi = std::atan(Y / r_far);
        if (std::isinf(r_hi)) {
            acc.add(seg_integrate(h, 0.0, w_hi, far_infinity_exponent(k), 0.0,
                                  part));
        } else {
            acc.add(integrate(h, std::atan(Y / r_hi), w_hi, part));
        }
    }
    return acc;
}

// Radius beyond which the kernel's lateral tail mass at height y is provably
// below tau.  Power-law bound: kernel(r, y) <= C Y^{1-beta} r^{-2 nu} holds
// for both families (z^nu K_nu(z) is decreasing), so
//   tail(R) <= sigma_{n-1} C Y^{1-beta} R^{-(1-beta)} / (1-beta).
// For lambda > 0 the exponential decay gives a far smaller radius; its
// fixed margin absorbs the algebraic prefactor at moderate nu, and the
// power-law radius stays as the rigorous cap.
double truncation_radius(const Kernel& k, double y, double tau) {
    const double Y = k.height_scale(y);
    const double omb = 1.0 - k.beta();
    const double f = std::abs(k.scale_factor());
    double log_r = (std::log(specfun::sphere_area(k.dim()) *
                             c0_constant(k.dim(), k.beta()) * f / omb) +
                    omb * std::log(Y) - std::log(tau)) /
                   omb;
    double r = log_r > 690.0 ? kInf : std::max(std::exp(log_r), Y);
    if (k.lambda() > 0.0) {
        double r_exp =
            Y + (std::log((1.0 + f) / tau) + 25.0 + 3.0 * k.nu()) / k.lambda();
        r = std::min(r, r_exp);
    }
    return r;
}

struct PtResult {
    double value = 0.0;
    double err = 0.0;
    bool truncated = false;
};

// n = 1: sum over pieces of int psi(t) kernel(|t - x0|, y) dt.  Offsets
// |t - x0| <= Y go through t = x0 + Y tan(theta); larger offsets through the
// complement angle w = atan(Y / |t - x0|), so the reconstruction t stays
// fully accurate however far the data sits.  For lambda = 0 infinite ends
// compactify exactly (w -> 0 collar); for lambda > 0 the data is truncated
// to the window |t - x0| <= truncation_radius instead.
PtResult solve_line(const BoundarySpec& psi, double x0, double y,
                    const Kernel& k, const QuadratureConfig& cfg) {
    const double Y = k.height_scale(y);
    const double g_inf = far_infinity_exponent(k);
    const double R = k.lambda() > 0.0
                         ? truncation_radius(k, y, cfg.truncation_mass)
                         : kInf;
    QuadratureConfig part = cfg;
    part.rel_tol = 0.25 * cfg.rel_tol;
    part.abs_tol = 0.25 * cfg.abs_tol;

    PtResult out;
    for (const auto& pc : psi.pieces) {
        double A = pc.lo, B = pc.hi, gA = pc.sing_lo, gB = pc.sing_hi;
        if (std::isfinite(R)) {
            double a_cut = std::max(A, x0 - R), b_cut = std::min(B, x0 + R);
            if (a_cut != A) { gA = 0.0; out.truncated = true; }
            if (b_cut != B) { gB = 0.0; out.truncated = true; }
            A = a_cut;
            B = b_cut;
            if (!(A < B)) continue;  // piece entirely beyond the window
        }
        // keep reconstructed arguments strictly inside the piece so declared
        // endpoint singularities cannot be hit by rounding
        const double t_min =
            std::isfinite(pc.lo) ? std::nextafter(pc.lo, kInf) : -kInf;
        const double t_max =
            std::isfinite(pc.hi) ? std::nextafter(pc.hi, -kInf) : kInf;
        auto eval = [&](double t, double off) {
            t = std::min(std::max(t, t_min), t_max);
            return pc.f(t) * k.radial(off, y);
        };

        // near segment: |t - x0| <= Y
        double tl = std::max(A, x0 - Y), tr = std::min(B, x0 + Y);
        if (tl < tr) {
            auto h = [&](double th) {
                double ta = std::tan(th), c = std::cos(th);
                return eval(x0 + Y * ta, Y * std::abs(ta)) * Y / (c * c);
            };
            QuadResult q = seg_integrate(
                h, std::atan((tl - x0) / Y), std::atan((tr - x0) / Y),
                tl == A ? gA : 0.0, tr == B ? gB : 0.0, part);
            out.value += q.value;
            out.err += q.error_bound;
        }
        // far-left segment: t in [A, min(B, x0 - Y)]
        double lf_hi = std::min(B, x0 - Y);
        if (A < lf_hi) {
            auto h = [&](double w) {
                double s = std::sin(w), c = std::cos(w);
                double off = Y * c / s;
                if (!(off < 1e300)) return 0.0;
                return eval(x0 - off, off) * Y / (s * s);
            };
            double w_lo = std::isinf(A) ? 0.0 : std::atan(Y / (x0 - A));
            double w_hi = std::atan(Y / (x0 - lf_hi));
            QuadResult q = seg_integrate(h, w_lo, w_hi,
                                         std::isinf(A) ? g_inf : gA,
                                         lf_hi == B ? gB : 0.0, part);
            out.value += q.value;
            out.err += q.error_bound;
        }
        // far-right segment: t in [max(A, x0 + Y), B]
        double rf_lo = std::max(A, x0 + Y);
        if (rf_lo < B) {
            auto h = [&](double w) {
                double s = std::sin(w), c = std::cos(w);
                double off = Y * c / s;
                if (!(off < 1e300)) return 0.0;
                return eval(x0 + off, off) * Y / (s * s);
            };
            double w_lo = std::isinf(B) ? 0.0 : std::atan(Y / (B - x0));
            double w_hi = std::atan(Y / (rf_lo - x0));
            QuadResult q = seg_integrate(h, w_lo, w_hi,
                                         std::isinf(B) ? g_inf : gB,
                                         rf_lo == A ? gA : 0.0, part);
            out.value += q.value;
            out.err += q.error_bound;
        }
    }
    return out;
}

// n = 2, 3: radial data.  Outer integral over the data radius rho; the
// angular average of the kernel over the sphere |t| = rho is an inner
// quadrature with the lateral distance computed in cancellation-free form.
PtResult solve_radial(const BoundarySpec& psi, double r0, double y,
                      const Kernel& k, const QuadratureConfig& cfg) {
    const int n = k.dim();
    QuadratureConfig inner = cfg;
    inner.rel_tol = std::max(0.1 * cfg.rel_tol, 1e-13);
    inner.abs_tol = 0.1 * cfg.abs_tol;
    QuadratureConfig part = cfg;
    part.rel_tol = 0.25 * cfg.rel_tol;
    part.abs_tol = 0.25 * cfg.abs_tol;

    auto angular = [&](double rho) {
        if (n == 2) {
            auto g = [&](double phi) {
                double d = std::hypot(
                    r0 - rho, 2.0 * std::sqrt(r0 * rho) * std::sin(0.5 * phi));
                return k.radial(d, y);
            };
            return 2.0 * integrate(g, 0.0, kPi, inner).value;
        }
        auto g = [&](double w) {
            double d2 = (r0 - rho) * (r0 - rho) + 2.0 * r0 * rho * (1.0 - w);
            return k.radial(std::sqrt(std::max(d2, 0.0)), y);
        };
        return 2.0 * kPi * integrate(g, -1.0, 1.0, inner).value;
    };

    double cap = kInf;
    PtResult out;
    for (const auto& pc : psi.pieces) {
        double a = pc.lo, b = pc.hi, ga = pc.sing_lo, gb = pc.sing_hi;
        if (std::isinf(b)) {
            if (std::isinf(cap))
                cap = r0 + truncation_radius(k, y, cfg.truncation_mass);
            b = cap;
            gb = 0.0;
            out.truncated = true;
            if (!(a < b)) continue;
        }
        const double rho_min = std::nextafter(pc.lo, kInf);
        const double rho_max =
            std::isfinite(pc.hi) ? std::nextafter(pc.hi, -kInf) : kInf;
        auto F = [&](double rho) {
            rho = std::min(std::max(rho, rho_min), rho_max);
            return pc.f(rho) * rpow(rho, n) * angular(rho);
        };
        // split at rho = r0 where the angular factor has a ridge
        if (a < r0 && r0 < b) {
            QuadResult ql = seg_integrate(F, a, r0, ga, 0.0, part);
            QuadResult qr = seg_integrate(F, r0, b, 0.0, gb, part);
            out.value += ql.value + qr.value;
            out.err += ql.error_bound + qr.error_bound;
        } else {
            QuadResult q = seg_integrate(F, a, b, ga, gb, part);
            out.value += q.value;
            out.err += q.error_bound;
        }
    }
    // inner quadratures contribute up to their relative tolerance on top of
    // the outer estimate
    out.err += 0.1 * cfg.rel_tol * std::abs(out.value) + inner.abs_tol;
    return out;
}

}  // namespace

void BoundarySpec::validate(int n) const {
    if (n < 1)
        throw std::invalid_argument("BoundarySpec: dimension must be >= 1");
    if (!(bound > 0.0) || !std::isfinite(bound))
        throw std::invalid_argument(
            "BoundarySpec: bound must be positive and finite");
    double prev_hi = -kInf;
    for (const auto& pc : pieces) {
        if (!pc.f)
            throw std::invalid_argument("BoundarySpec: piece lacks a function");
        if (std::isnan(pc.lo) || std::isnan(pc.hi) || !(pc.lo < pc.hi))
            throw std::invalid_argument("BoundarySpec: piece needs lo < hi");
        if (n >= 2 && !(pc.lo >= 0.0))
            throw std::invalid_argument(
                "BoundarySpec: radial pieces live on [0, inf)");
        auto check_exp = [](double g, double end) {
            if (!(g > -1.0 && g <= 0.0))
                throw std::invalid_argument(
                    "BoundarySpec: endpoint exponent must lie in (-1, 0]");
            if (g != 0.0 && std::isinf(end))
                throw std::invalid_argument(
                    "BoundarySpec: singular exponent on an infinite endpoint");
        };
        check_exp(pc.sing_lo, pc.lo);
        check_exp(pc.sing_hi, pc.hi);
        if (!(pc.lo >= prev_hi))
            throw std::invalid_argument(
                "BoundarySpec: pieces must be ordered and disjoint");
        prev_hi = pc.hi;
    }
    // spot-check the declared bound away from singular collars
    for (const auto& pc : pieces) {
        double a = pc.lo, b = pc.hi;
        if (std::isinf(a) && std::isinf(b)) {
            a = -50.0;
            b = 50.0;
        } else if (std::isinf(a)) {
            a = b - 100.0;
        } else if (std::isinf(b)) {
            b = a + 100.0;
        }
        double margin_lo = pc.sing_lo != 0.0 ? 0.2 : 1e-3;
        double margin_hi = pc.sing_hi != 0.0 ? 0.2 : 1e-3;
        double lo = a + margin_lo * (b - a), hi = b - margin_hi * (b - a);
        for (int i = 0; i <= 16; ++i) {
            double v = pc.f(lo + (hi - lo) * i / 16.0);
            if (!std::isfinite(v))
                throw std::invalid_argument(
                    "BoundarySpec: data is non-finite inside its support");
            if (std::abs(v) > bound * (1.0 + 1e-9))
                throw std::invalid_argument(
                    "BoundarySpec: data exceeds the declared bound");
        }
    }
}

double BoundarySpec::operator()(double t) const {
    for (const auto& pc : pieces)
        if (t >= pc.lo && t <= pc.hi) return pc.f(t);
    return 0.0;
}

SolutionField solve_dirichlet(const BoundarySpec& psi,
                              const std::vector<Point>& points,
                              const Kernel& kernel,
                              const QuadratureConfig& cfg) {
    cfg.validate();
    const int n = kernel.dim();
    if (n > 3)
        throw std::invalid_argument(
            "solve_dirichlet: lateral dimension must be 1, 2, or 3");
    psi.validate(n);

    SolutionField out;
    out.params = kernel.transformed();
    out.points = points;
    out.values.reserve(points.size());
    out.diagnostics.reserve(points.size());
    for (const auto& p : points) {
        if (static_cast<int>(p.x.size()) != n)
            throw std::invalid_argument(
                "solve_dirichlet: point dimension does not match the kernel");
        if (!(p.y > 0.0))
            throw std::domain_error("solve_dirichlet: points require y > 0");
        PtResult r;
        if (n == 1) {
            r = solve_line(psi, p.x[0], p.y, kernel, cfg);
        } else {
            double r0 = n == 2 ? std::hypot(p.x[0], p.x[1])
                               : std::hypot(p.x[0], p.x[1], p.x[2]);
            r = solve_radial(psi, r0, p.y, kernel, cfg);
        }
        out.values.push_back(r.value);
        out.diagnostics.push_back(
            {r.err, r.truncated ? psi.bound * cfg.truncation_mass : 0.0});
    }
    return out;
}

double radial_mass(const Kernel& kernel, double y,
                   const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(y > 0.0)) throw std::domain_error("radial_mass: require y > 0");
    Acc a = weighted_radial(kernel, y, 0.0, kInf, nullptr, cfg);
    return specfun::sphere_area(kernel.dim()) * a.value;
}

double tail_mass(const Kernel& kernel, double y, double delta,
                 const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(y > 0.0)) throw std::domain_error("tail_mass: require y > 0");
    if (!(delta > 0.0)) throw std::domain_error("tail_mass: require delta > 0");
    Acc a = weighted_radial(kernel, y, delta, kInf, nullptr, cfg);
    return specfun::sphere_area(kernel.dim()) * a.value;
}

double pair_against_test_function(const std::function<double(double)>& phi,
                                  const Kernel& kernel, double y,
                                  const QuadratureConfig& cfg) {
    cfg.validate();
    if (!phi)
        throw std::invalid_argument(
            "pair_against_test_function: phi must be callable");
    if (!(y > 0.0))
        throw std::domain_error("pair_against_test_function: require y > 0");
    std::function<double(double)> w;
    if (kernel.dim() == 1)
        w = [&phi](double r) { return 0.5 * (phi(r) + phi(-r)); };
    else
        w = phi;
    Acc a = weighted_radial(kernel, y, 0.0, kInf, w, cfg);
    return specfun::sphere_area(kernel.dim()) * a.value;
}

}  // namespace keldysh
