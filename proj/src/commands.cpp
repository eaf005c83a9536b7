#include "keldysh/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "keldysh/convolve.hpp"
#include "keldysh/errors.hpp"
#include "keldysh/halfplane_example.hpp"
#include "keldysh/verify.hpp"

namespace keldysh {

namespace {

constexpr const char* kVersion = "1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void preamble(std::ostream& os, const RunConfig& c, const char* command) {
    os << "# keldysh " << kVersion << " " << command << "\n";
    os << "# kernel=" << c.kernel << " n=" << c.n;
    if (c.original)
        os << " m=" << fmt(c.m) << " alpha=" << fmt(c.alpha);
    else
        os << " beta=" << fmt(c.beta);
    os << " lambda=" << fmt(c.lambda) << "\n";
    os << "# rel_tol=" << fmt(c.quad.rel_tol) << " abs_tol=" << fmt(c.quad.abs_tol)
       << " max_subdivisions=" << c.quad.max_subdivisions << " truncation_mass="
       << fmt(c.quad.truncation_mass) << "\n";
}

std::string x_cols(int n) {
    if (n == 1) return "x";
    std::string s;
    for (int i = 1; i <= n; ++i) s += "x" + std::to_string(i) + (i < n ? "," : "");
    return s;
}

void print_coords(std::ostream& os, const Point& pt) {
    for (double xi : pt.x) os << fmt(xi) << ",";
    os << fmt(pt.y);
}

}  // namespace

int cmd_eval(const RunConfig& c, std::ostream& os) {
    Kernel k = kernel_of(c);
    preamble(os, c, "eval");
    os << x_cols(c.n) << ",y,value\n";
    std::size_t row = 0;
    for (const Point& pt : c.points) {
        ++row;
        double v = NAN;
        std::string err;
        try {
            v = k.at(pt);
        } catch (const std::exception& e) {
            err = e.what();
        }
        print_coords(os, pt);
        os << "," << fmt(v) << "\n";
        if (!err.empty()) os << "# row " << row << ": " << err << "\n";
    }
    return 0;
}

int cmd_mass(const RunConfig& c, std::ostream& os) {
    Kernel k = kernel_of(c);
    preamble(os, c, "mass");
    os << "y,mass,closed_form,abs_diff\n";
    bool failed = false;
    std::size_t row = 0;
    for (double y : c.y_list) {
        ++row;
        double mass = NAN, target = NAN;
        std::string err;
        try {
            mass = radial_mass(k, y, c.quad);
            target = k.lambda() > 0.0 ? k.mass_closed_form(y) : 1.0;
        } catch (const std::exception& e) {
            err = e.what();
            failed = true;
        }
        os << fmt(y) << "," << fmt(mass) << ","
           << (k.lambda() > 0.0 ? fmt(target) : std::string("na")) << ","
           << fmt(std::fabs(mass - target)) << "\n";
        if (!err.empty()) os << "# row " << row << ": " << err << "\n";
    }
    return failed ? 3 : 0;
}

int cmd_solve(const RunConfig& c, std::ostream& os, int threads) {
    if (!c.has_boundary)
        throw config_error("config error (section 'boundary'): solve needs boundary data");
    Kernel k = kernel_of(c);
    c.boundary.validate(c.n);
    for (const Point& pt : c.points)
        if (!(pt.y > 0.0))
            throw config_error("config error (section 'points'): solve needs y > 0 at every point");

    struct Row {
        double value = NAN;
        double est = NAN;
        std::string err;
    };
    std::vector<Row> rows(c.points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            try {
                SolutionField f = solve_dirichlet(c.boundary, {c.points[i]}, k, c.quad);
                rows[i].value = f.values[0];
                rows[i].est = f.diagnostics[0].quad_error + f.diagnostics[0].trunc_bound;
            } catch (const quadrature_error& e) {
                // The payload covers only the integral that gave up, not the
                // whole convolution, so the row value stays NaN.
                rows[i].err = std::string(e.what()) + " (partial estimate " +
                              fmt(e.best_estimate) + ", bound " + fmt(e.error_bound) + ")";
            } catch (const std::exception& e) {
                rows[i].err = e.what();
            }
        }
    };
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t want = threads > 0 ? static_cast<std::size_t>(threads) : (hw ? hw : 1);
    want = std::max<std::size_t>(1, std::min(want, rows.size()));
    if (want <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(want);
        for (std::size_t i = 0; i < want; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    preamble(os, c, "solve");
    os << x_cols(c.n) << ",y,u,est_error\n";
    bool failed = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        print_coords(os, c.points[i]);
        os << "," << fmt(rows[i].value) << "," << fmt(rows[i].est) << "\n";
        if (!rows[i].err.empty()) {
            os << "# row " << (i + 1) << ": " << rows[i].err << "\n";
            failed = true;
        }
    }
    return failed ? 3 : 0;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
    Kernel k = kernel_of(c).scaled(c.corrupt);
    preamble(os, c, "verify");
    if (c.corrupt != 1.0) os << "# kernel deliberately scaled by " << fmt(c.corrupt) << "\n";

    bool all_pass = true;
    auto report = [&](bool ok, const char* name, const std::string& detail) {
        all_pass = all_pass && ok;
        os << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    };

    IdentityReport rep = identity_suite(k, c.y_list, c.delta, c.quad);
    double min_value = INFINITY, worst_rel = 0.0;
    std::string tails, sups;
    for (const IdentityRow& r : rep.rows) {
        min_value = std::min(min_value, r.min_value);
        worst_rel = std::max(worst_rel,
                             std::fabs(r.mass - r.mass_target) / std::fabs(r.mass_target));
        tails += (tails.empty() ? "" : " ") + fmt(r.tail);
        sups += (sups.empty() ? "" : " ") + fmt(r.sup_tail);
    }
    report(rep.positive, "positivity", "smallest sampled value " + fmt(min_value));
    report(rep.mass_matches, "mass", "largest relative deviation from target " + fmt(worst_rel));
    report(rep.tail_decreasing, "tail decay",
           "mass beyond delta = " + fmt(c.delta) + " along y: " + tails);
    report(rep.sup_decreasing, "far-field decay", "sup beyond delta along y: " + sups);

    // The kernel must satisfy its equation to second order in the stencil
    // width; corruption only rescales the field, so this stays sharp.
    {
        FieldFn u = [&k](const std::vector<double>& x, double y) { return k.at(Point{x, y}); };
        std::vector<Point> probes;
        if (c.n == 1)
            probes = {{{0.3}, 0.7}, {{-0.6}, 1.2}};
        else if (c.n == 2)
            probes = {{{0.3, -0.2}, 0.7}, {{0.5, 0.4}, 1.2}};
        else
            probes = {{{0.3, -0.2, 0.1}, 0.7}, {{0.5, 0.4, -0.3}, 1.2}};
        double lo = INFINITY, hi = -INFINITY;
        for (const Point& pt : probes) {
            double r1, r2;
            if (c.kernel == "q") {
                ProblemParams pp{c.n, c.m, c.alpha, c.lambda};
                r1 = pde_residual(u, pt, c.residual_h, pp).residual;
                r2 = pde_residual(u, pt, c.residual_h / 2.0, pp).residual;
            } else {
                TransformedParams tp = transformed_of(c);
                r1 = pde_residual(u, pt, c.residual_h, tp).residual;
                r2 = pde_residual(u, pt, c.residual_h / 2.0, tp).residual;
            }
            double order = std::log2(std::fabs(r1) / std::fabs(r2));
            lo = std::min(lo, order);
            hi = std::max(hi, order);
        }
        report(lo >= 1.8 && hi <= 2.2, "residual order",
               "measured " + fmt(lo) + " .. " + fmt(hi) + " at h = " + fmt(c.residual_h));
    }

    if (c.with_box) {
        if (!c.has_boundary)
            throw config_error(
                "config error (field 'box'): the oracle cross-check needs [boundary] data");
        FdBox box{c.box_half_width, c.box_height, c.box_h, transformed_of(c)};
        ComparisonReport cmp = oracle_vs_convolution(c.boundary, box, c.quad);
        report(cmp.max_abs <= c.box_tol, "oracle cross-check",
               "max |difference| " + fmt(cmp.max_abs) + " over " + std::to_string(cmp.nodes) +
                   " nodes (tolerance " + fmt(c.box_tol) + ", interior max " +
                   fmt(cmp.probe_max_abs) + ")");
    }

    os << (all_pass ? "# all checks passed\n" : "# verification failed\n");
    return all_pass ? 0 : 4;
}

int cmd_example(const RunConfig& c, std::ostream& os) {
    // The worked pair lives on the half plane: n = 1, beta = 0, lambda = 0.
    TransformedParams tp = transformed_of(c);
    if (tp.n != 1 || tp.beta != 0.0 || tp.lambda != 0.0)
        throw config_error(
            "config error: the example needs n = 1, beta = 0, lambda = 0 (or m = alpha = 0)");

    std::vector<Point> pts = c.points;
    if (pts.empty()) {
        for (double x : {-5.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0})
            for (double y : {1.0, 0.1, 0.001}) pts.push_back({{x}, y});
    }
    for (const Point& pt : pts) {
        if (pt.x.size() != 1)
            throw config_error("config error (section 'points'): the example is one-dimensional");
        if (!(pt.y > 0.0))
            throw config_error("config error (section 'points'): the example needs y > 0");
    }

    Kernel k = Kernel::p0(tp);
    BoundarySpec psi;
    psi.bound = 1.0;
    BoundaryPiece piece;
    piece.lo = 0.0;
    piece.hi = HUGE_VAL;
    piece.f = [](double t) { return -2.0 / std::sqrt(t); };
    piece.sing_lo = -0.5;
    psi.pieces.push_back(piece);

    preamble(os, c, "example");
    os << "# boundary data -2/sqrt(t) on (0, inf); u = dg/dx\n";
    os << "x,y,g_closed,g_quadrature,u_closed,u_from_derivative,diff_g,diff_u\n";
    bool failed = false;
    std::size_t row = 0;
    for (const Point& pt : pts) {
        ++row;
        double x = pt.x[0], y = pt.y;
        double gc = example_g({x, y});
        double uc = example_u({x, y});
        double gq = NAN;
        std::string err;
        try {
            SolutionField f = solve_dirichlet(psi, {pt}, k, c.quad);
            gq = f.values[0];
        } catch (const quadrature_error& e) {
            err = std::string(e.what()) + " (partial estimate " + fmt(e.best_estimate) + ")";
            failed = true;
        }
        double h = 1e-5 * std::max(1.0, std::fabs(x));
        double ud = (example_g({x + h, y}) - example_g({x - h, y})) / (2.0 * h);
        os << fmt(x) << "," << fmt(y) << "," << fmt(gc) << "," << fmt(gq) << "," << fmt(uc)
           << "," << fmt(ud) << "," << fmt(std::fabs(gc - gq)) << "," << fmt(std::fabs(uc - ud))
           << "\n";
        if (!err.empty()) os << "# row " << row << ": " << err << "\n";
    }
    return failed ? 3 : 0;
}

}  // namespace keldysh
