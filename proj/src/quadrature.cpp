#include "keldysh/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "keldysh/errors.hpp"

namespace keldysh {
namespace {

// (G7,K15) nodes and weights on [-1,1]; Gauss points are the odd-indexed
// Kronrod abscissae.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double err;
};

bool by_error(const Panel& l, const Panel& r) { return l.err < r.err; }

// One (G7,K15) rule application with the QUADPACK error estimate.
Panel gk15(const std::function<double(double)>& f, double a, double b) {
    constexpr double epmach = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();

    double centre = 0.5 * (a + b);
    double hlgth = 0.5 * (b - a);
    double fv1[7], fv2[7];

    double fc = f(centre);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::abs(resk);
    for (int j = 0; j < 3; ++j) {
        int jtw = 2 * j + 1;
        double absc = hlgth * xgk[jtw];
        double f1 = f(centre - absc), f2 = f(centre + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += wg[j] * (f1 + f2);
        resk += wgk[jtw] * (f1 + f2);
        resabs += wgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        int jtwm1 = 2 * j;
        double absc = hlgth * xgk[jtwm1];
        double f1 = f(centre - absc), f2 = f(centre + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += wgk[jtwm1] * (f1 + f2);
        resabs += wgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    double reskh = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    double value = resk * hlgth;
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    if (resabs > uflow / (50.0 * epmach))
        abserr = std::max(epmach * 50.0 * resabs, abserr);

    if (!std::isfinite(value))
        throw std::runtime_error("integrate: integrand returned a non-finite value");
    return {a, b, value, abserr};
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, const QuadratureConfig& cfg) {
    if (a == b) return {};
    if (b < a) {
        QuadResult r = integrate(f, b, a, cfg);
        r.value = -r.value;
        return r;
    }

    std::vector<Panel> heap;
    heap.push_back(gk15(f, a, b));
    double val_sum = heap[0].value;
    double err_sum = heap[0].err;
    // Panels too narrow to bisect park their contribution here.
    double stuck_val = 0.0, stuck_err = 0.0;
    int splits = 0;

    auto tolerance = [&] {
        return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(val_sum + stuck_val));
    };

    while (err_sum + stuck_err > tolerance() && !heap.empty()) {
        if (splits >= cfg.max_subdivisions)
            throw quadrature_error("integrate: subdivision budget exhausted",
                                   val_sum + stuck_val, err_sum + stuck_err);
        std::pop_heap(heap.begin(), heap.end(), by_error);
        Panel worst = heap.back();
        heap.pop_back();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            stuck_val += worst.value;
            stuck_err += worst.err;
            val_sum -= worst.value;
            err_sum -= worst.err;
            continue;
        }
        Panel left = gk15(f, worst.a, mid);
        Panel right = gk15(f, mid, worst.b);
        val_sum += left.value + right.value - worst.value;
        err_sum += left.err + right.err - worst.err;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        ++splits;
    }

    // Final sums recomputed from the panels to shed incremental drift.
    double value = stuck_val, err = stuck_err;
    for (const Panel& p : heap) {
        value += p.value;
        err += p.err;
    }
    return {value, err, splits};
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0))
        throw std::invalid_argument(
            "QuadratureConfig: rel_tol must lie in (0, 1)");
    if (!(abs_tol >= 0.0) || !std::isfinite(abs_tol))
        throw std::invalid_argument(
            "QuadratureConfig: abs_tol must be finite and non-negative");
    if (max_subdivisions < 100)
        throw std::invalid_argument(
            "QuadratureConfig: max_subdivisions must be at least 100");
    if (!(truncation_mass > 0.0 && truncation_mass < 1.0))
        throw std::invalid_argument(
            "QuadratureConfig: truncation_mass must lie in (0, 1)");
}

QuadResult integrate_endpoint_singular(const std::function<double(double)>& f,
                                       double a, double b, double gamma_a,
                                       double gamma_b,
                                       const QuadratureConfig& cfg) {
    if (!(gamma_a > -1.0) || !(gamma_b > -1.0))
        throw std::domain_error(
            "integrate_endpoint_singular: exponents must exceed -1");
    if (!(a < b))
        throw std::invalid_argument(
            "integrate_endpoint_singular: require a < b");

    double m = 0.5 * (a + b);
    QuadratureConfig half = cfg;
    half.abs_tol = 0.5 * cfg.abs_tol;

    // x = a + (m-a) s^p with p = 1/(1+gamma) turns c|x-a|^gamma dx into a
    // bounded integrand in s; nodes stay strictly inside (0,1).
    auto mapped = [&f](double end, double width, double p) {
        return [&f, end, width, p](double s) {
            double sp = std::pow(s, p);
            return f(end + width * sp) * width * p * (sp / s);
        };
    };
    double pa = 1.0 / (1.0 + gamma_a);
    double pb = 1.0 / (1.0 + gamma_b);
    QuadResult left = integrate(mapped(a, m - a, pa), 0.0, 1.0, half);
    QuadResult right = integrate(mapped(b, m - b, pb), 0.0, 1.0, half);
    return {left.value - right.value, left.error_bound + right.error_bound,
            left.subdivisions + right.subdivisions};
}

} // namespace keldysh
