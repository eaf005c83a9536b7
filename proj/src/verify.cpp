#include "keldysh/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "keldysh/convolve.hpp"
#include "keldysh/errors.hpp"

namespace keldysh {

namespace {

double eval_field(const FieldFn& u, const std::vector<double>& x, double y) {
    const double v = u(x, y);
    if (!std::isfinite(v))
        throw std::domain_error("pde_residual: field value not finite");
    return v;
}

struct StencilSums {
    double lap_x = 0.0;  // sum of lateral second differences
    double uyy = 0.0;
    double uy = 0.0;
    double u0 = 0.0;
};

StencilSums stencil(const FieldFn& u, const Point& pt, double h, int n) {
    if (!u) throw std::invalid_argument("pde_residual: null field evaluator");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("pde_residual: step h must be positive");
    if (static_cast<int>(pt.x.size()) != n)
        throw std::invalid_argument("pde_residual: point dimension mismatch");
    if (!(pt.y > 2.0 * h))
        throw std::domain_error(
            "pde_residual: stencil leaves the half space (need y > 2h)");

    std::vector<double> x = pt.x;
    StencilSums s;
    s.u0 = eval_field(u, x, pt.y);
    const double up = eval_field(u, x, pt.y + h);
    const double dn = eval_field(u, x, pt.y - h);
    s.uyy = (up - 2.0 * s.u0 + dn) / (h * h);
    s.uy = (up - dn) / (2.0 * h);
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double right = eval_field(u, x, pt.y);
        x[i] = xi - h;
        const double left = eval_field(u, x, pt.y);
        x[i] = xi;
        s.lap_x += (right - 2.0 * s.u0 + left) / (h * h);
    }
    return s;
}

}  // namespace

ResidualReport pde_residual(const FieldFn& u, const Point& pt, double h,
                            const TransformedParams& tp) {
    tp.validate();
    const StencilSums s = stencil(u, pt, h, tp.n);
    const double res = s.lap_x + s.uyy + (tp.beta / pt.y) * s.uy -
                       tp.lambda * tp.lambda * s.u0;
    return {pt, h, res, "transformed"};
}

ResidualReport pde_residual(const FieldFn& u, const Point& pt, double h,
                            const ProblemParams& pp) {
    pp.validate();
    const StencilSums s = stencil(u, pt, h, pp.n);
    const double res = s.lap_x + std::pow(pt.y, pp.m) * s.uyy +
                       pp.alpha * std::pow(pt.y, pp.m - 1.0) * s.uy -
                       pp.lambda * pp.lambda * s.u0;
    return {pt, h, res, "original"};
}

// ----------------------------------------- approximation-to-identity suite

IdentityReport identity_suite(const Kernel& kernel,
                              const std::vector<double>& y_list, double delta,
                              const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::domain_error("identity_suite: delta must be positive");
    if (y_list.empty())
        throw std::invalid_argument("identity_suite: empty height list");
    for (size_t i = 0; i < y_list.size(); ++i) {
        if (!(y_list[i] > 0.0) || !std::isfinite(y_list[i]))
            throw std::invalid_argument(
                "identity_suite: heights must be positive");
        if (i > 0 && !(y_list[i] < y_list[i - 1]))
            throw std::invalid_argument(
                "identity_suite: heights must be strictly decreasing");
    }

    IdentityReport rep;
    rep.delta = delta;
    rep.positive = true;
    rep.mass_matches = true;
    rep.tail_decreasing = true;
    rep.sup_decreasing = true;

    for (double y : y_list) {
        IdentityRow row;
        row.y = y;
        row.mass = radial_mass(kernel, y, cfg);
        // The identity conditions compare against the mathematical closed
        // form of the kernel family (1 when lambda = 0), not against
        // whatever a possibly rescaled kernel integrates to -- a corrupted
        // normalization must show up here.
        row.mass_target = kernel.lambda() == 0.0
                              ? 1.0
                              : total_mass_plambda(kernel.height_scale(y),
                                                   kernel.transformed());
        row.tail = tail_mass(kernel, y, delta, cfg);

        // Positivity, sampled at the origin plus a geometric sweep of radii
        // around the kernel scale.  Very large radii are excluded on
        // purpose: exponential tails underflow to an exact 0 out there,
        // which is benign rather than a sign violation.
        row.min_value = kernel.radial(0.0, y);
        const double r_lo = std::min(y, delta) / 100.0;
        const double r_hi = 10.0 * std::max(y, delta);
        for (int i = 0; i <= 60; ++i) {
            const double r = r_lo * std::pow(r_hi / r_lo, i / 60.0);
            row.min_value = std::min(row.min_value, kernel.radial(r, y));
        }

        // Far-field sup over |x| >= delta on a geometric radius grid.  The
        // kernels are radially decreasing, so the sup sits at |x| = delta;
        // sweeping re-checks that instead of assuming it.
        row.sup_tail = 0.0;
        for (int i = 0; i <= 48; ++i) {
            const double r = delta * std::pow(1.0e4, i / 48.0);
            row.sup_tail = std::max(row.sup_tail, kernel.radial(r, y));
        }

        if (!(row.min_value > 0.0)) rep.positive = false;
        if (!(std::abs(row.mass - row.mass_target) <=
              1e-7 * std::abs(row.mass_target)))
            rep.mass_matches = false;
        if (!rep.rows.empty()) {
            if (!(row.tail < rep.rows.back().tail)) rep.tail_decreasing = false;
            if (!(row.sup_tail < rep.rows.back().sup_tail))
                rep.sup_decreasing = false;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

// ------------------------------------------------ finite-difference oracle

namespace {

// Number of steps of size h in a length, demanding (near-)exact divisibility.
int step_count(double length, double h, const char* what) {
    const double q = length / h;
    const long k = std::lround(q);
    if (k < 1 || std::abs(q - static_cast<double>(k)) > 1e-9 * std::max(1.0, q))
        throw std::invalid_argument(
            std::string("fd_oracle_solve: h must divide ") + what);
    return static_cast<int>(k);
}

void check_box(const FdBox& box) {
    box.params.validate();
    if (!(box.h > 0.0) || !std::isfinite(box.h) || !(box.half_width > 0.0) ||
        !std::isfinite(box.half_width) || !(box.height > 0.0) ||
        !std::isfinite(box.height))
        throw std::invalid_argument(
            "fd_oracle_solve: box dimensions must be positive and finite");
    if (box.params.n != 1 && box.params.n != 2)
        throw std::invalid_argument(
            "fd_oracle_solve: lateral dimension must be 1 or 2");
}

double boundary_value(const FieldFn& f, const std::vector<double>& x,
                      double y) {
    const double v = f(x, y);
    if (!std::isfinite(v))
        throw std::invalid_argument(
            "fd_oracle_solve: boundary value not finite");
    return v;
}

// Shared post-solve gate: the contract is on the discrete residual, not on
// which solver produced the iterate.
void check_discrete_residual(const Eigen::SparseMatrix<double>& A,
                             const Eigen::VectorXd& sol,
                             const Eigen::VectorXd& b, double data_scale) {
    const double res_inf = (A * sol - b).lpNorm<Eigen::Infinity>();
    std::vector<double> row_sum(static_cast<size_t>(A.rows()), 0.0);
    for (int c = 0; c < A.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
            row_sum[static_cast<size_t>(it.row())] += std::abs(it.value());
    const double op_scale =
        *std::max_element(row_sum.begin(), row_sum.end());
    const double u_scale =
        std::max({1.0, sol.lpNorm<Eigen::Infinity>(), data_scale});
    if (!(res_inf <= 1e-12 * op_scale * u_scale)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "fd_oracle_solve: discrete residual %.3e exceeds "
                      "1e-12 of the operator scale %.3e",
                      res_inf, op_scale * u_scale);
        throw solver_error(msg);
    }
}

}  // namespace

FdSolution fd_oracle_solve(const FdBox& box, const FieldFn& boundary) {
    check_box(box);
    if (!boundary)
        throw std::invalid_argument("fd_oracle_solve: null boundary evaluator");

    const int n = box.params.n;
    const double h = box.h;
    const double L = box.half_width;
    const int I = 2 * step_count(L, h, "the box half-width");
    const int J = step_count(box.height, h, "the box height");
    if (I < 2 || J < 2)
        throw std::invalid_argument("fd_oracle_solve: box has no interior nodes");

    FdSolution sol;
    sol.box = box;
    sol.nx = I + 1;
    sol.ny = J + 1;
    const int nx = sol.nx;

    const double beta = box.params.beta;
    const double lam2 = box.params.lambda * box.params.lambda;
    const double ih2 = 1.0 / (h * h);

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    double data_scale = 0.0;

    if (n == 1) {
        sol.values.assign(static_cast<size_t>(nx) * sol.ny, 0.0);
        std::vector<double> xbuf(1);
        auto node = [&](int i, int j) -> double& {
            return sol.values[static_cast<size_t>(j) * nx + i];
        };
        for (int j = 0; j <= J; ++j)
            for (int i = 0; i <= I; ++i)
                if (j == 0 || j == J || i == 0 || i == I) {
                    xbuf[0] = sol.x_at(i);
                    node(i, j) = boundary_value(boundary, xbuf, sol.y_at(j));
                    data_scale = std::max(data_scale, std::abs(node(i, j)));
                }

        const int mx = I - 1;  // unknowns per row
        const auto unk = [mx](int i, int j) { return (j - 1) * mx + (i - 1); };
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<long>(mx) * (J - 1));
        trips.reserve(static_cast<size_t>(mx) * (J - 1) * 5);

        for (int j = 1; j < J; ++j) {
            const double yj = sol.y_at(j);
            const double c_up = ih2 + beta / (2.0 * h * yj);
            const double c_dn = ih2 - beta / (2.0 * h * yj);
            const double diag = -4.0 * ih2 - lam2;
            for (int i = 1; i < I; ++i) {
                const int r = unk(i, j);
                trips.emplace_back(r, r, diag);
                if (i > 1) trips.emplace_back(r, unk(i - 1, j), ih2);
                else b[r] -= ih2 * node(0, j);
                if (i < I - 1) trips.emplace_back(r, unk(i + 1, j), ih2);
                else b[r] -= ih2 * node(I, j);
                if (j > 1) trips.emplace_back(r, unk(i, j - 1), c_dn);
                else b[r] -= c_dn * node(i, 0);
                if (j < J - 1) trips.emplace_back(r, unk(i, j + 1), c_up);
                else b[r] -= c_up * node(i, J);
            }
        }

        Eigen::SparseMatrix<double> A(b.size(), b.size());
        A.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(A);
        if (lu.info() != Eigen::Success)
            throw solver_error("fd_oracle_solve: sparse factorization failed");
        Eigen::VectorXd u = lu.solve(b);
        if (!u.allFinite())
            throw solver_error("fd_oracle_solve: direct solve produced "
                               "non-finite values");
        check_discrete_residual(A, u, b, data_scale);

        for (int j = 1; j < J; ++j)
            for (int i = 1; i < I; ++i) node(i, j) = u[unk(i, j)];
        return sol;
    }

    // n == 2: lateral grid is nx * nx per row.
    sol.values.assign(static_cast<size_t>(nx) * nx * sol.ny, 0.0);
    std::vector<double> xbuf(2);
    auto node = [&](int i1, int i2, int j) -> double& {
        return sol.values[(static_cast<size_t>(j) * nx + i2) * nx + i1];
    };
    for (int j = 0; j <= J; ++j)
        for (int i2 = 0; i2 <= I; ++i2)
            for (int i1 = 0; i1 <= I; ++i1)
                if (j == 0 || j == J || i1 == 0 || i1 == I || i2 == 0 ||
                    i2 == I) {
                    xbuf[0] = sol.x_at(i1);
                    xbuf[1] = sol.x_at(i2);
                    node(i1, i2, j) =
                        boundary_value(boundary, xbuf, sol.y_at(j));
                    data_scale =
                        std::max(data_scale, std::abs(node(i1, i2, j)));
                }

    const int mx = I - 1;
    const auto unk = [mx](int i1, int i2, int j) {
        return ((j - 1) * mx + (i2 - 1)) * mx + (i1 - 1);
    };
    Eigen::VectorXd b =
        Eigen::VectorXd::Zero(static_cast<long>(mx) * mx * (J - 1));
    trips.reserve(static_cast<size_t>(mx) * mx * (J - 1) * 7);

    for (int j = 1; j < J; ++j) {
        const double yj = sol.y_at(j);
        const double c_up = ih2 + beta / (2.0 * h * yj);
        const double c_dn = ih2 - beta / (2.0 * h * yj);
        const double diag = -6.0 * ih2 - lam2;
        for (int i2 = 1; i2 < I; ++i2)
            for (int i1 = 1; i1 < I; ++i1) {
                const int r = unk(i1, i2, j);
                trips.emplace_back(r, r, diag);
                if (i1 > 1) trips.emplace_back(r, unk(i1 - 1, i2, j), ih2);
                else b[r] -= ih2 * node(0, i2, j);
                if (i1 < I - 1) trips.emplace_back(r, unk(i1 + 1, i2, j), ih2);
                else b[r] -= ih2 * node(I, i2, j);
                if (i2 > 1) trips.emplace_back(r, unk(i1, i2 - 1, j), ih2);
                else b[r] -= ih2 * node(i1, 0, j);
                if (i2 < I - 1) trips.emplace_back(r, unk(i1, i2 + 1, j), ih2);
                else b[r] -= ih2 * node(i1, I, j);
                if (j > 1) trips.emplace_back(r, unk(i1, i2, j - 1), c_dn);
                else b[r] -= c_dn * node(i1, i2, 0);
                if (j < J - 1) trips.emplace_back(r, unk(i1, i2, j + 1), c_up);
                else b[r] -= c_up * node(i1, i2, J);
            }
    }

    Eigen::SparseMatrix<double> A(b.size(), b.size());
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>,
                    Eigen::DiagonalPreconditioner<double>>
        solver;
    solver.setTolerance(1e-14);
    solver.setMaxIterations(20000);
    solver.compute(A);
    Eigen::VectorXd u = solver.solve(b);
    if (!u.allFinite())
        throw solver_error("fd_oracle_solve: iterative solve diverged");
    // The residual gate below is the actual contract; solver.info() only
    // reports whether the iteration met its own stopping rule.
    check_discrete_residual(A, u, b, data_scale);

    for (int j = 1; j < J; ++j)
        for (int i2 = 1; i2 < I; ++i2)
            for (int i1 = 1; i1 < I; ++i1)
                node(i1, i2, j) = u[unk(i1, i2, j)];
    return sol;
}

// ------------------------------------------ convolution vs. the FD oracle

ComparisonReport oracle_vs_convolution(const BoundarySpec& psi,
                                       const FdBox& box,
                                       const QuadratureConfig& cfg) {
    cfg.validate();
    check_box(box);
    psi.validate(box.params.n);

    const int n = box.params.n;
    const double h = box.h;
    const double L = box.half_width;
    const int I = 2 * step_count(L, h, "the box half-width");
    const int J = step_count(box.height, h, "the box height");
    if (I < 2 || J < 2)
        throw std::invalid_argument("fd_oracle_solve: box has no interior nodes");
    const int nx = I + 1;

    const Kernel kernel = box.params.lambda == 0.0
                              ? Kernel::p0(box.params)
                              : Kernel::plambda(box.params);
    auto x_of = [&](int i) { return -L + i * h; };

    // One batched convolution solve for every node above the bottom row.
    std::vector<Point> pts;
    if (n == 1) {
        pts.reserve(static_cast<size_t>(nx) * J);
        for (int j = 1; j <= J; ++j)
            for (int i = 0; i <= I; ++i) pts.push_back({{x_of(i)}, j * h});
    } else {
        pts.reserve(static_cast<size_t>(nx) * nx * J);
        for (int j = 1; j <= J; ++j)
            for (int i2 = 0; i2 <= I; ++i2)
                for (int i1 = 0; i1 <= I; ++i1)
                    pts.push_back({{x_of(i1), x_of(i2)}, j * h});
    }
    const SolutionField field = solve_dirichlet(psi, pts, kernel, cfg);

    // conv[...] holds the boundary trace of the convolution on the bottom
    // row and convolution values everywhere else, indexed like
    // FdSolution::values.  At a jump of psi the trace is the two-sided
    // average (the kernel is even in x), so bottom nodes sample
    // symmetrically about the node instead of taking one piece's side.
    std::vector<double> conv(static_cast<size_t>(n == 1 ? nx : nx * nx) *
                                 (J + 1),
                             0.0);
    auto trace = [&psi](double t) {
        const double eps = 1e-9 * std::max(1.0, std::abs(t));
        return 0.5 * (psi(t - eps) + psi(t + eps));
    };
    auto radial_trace = [&psi](double r) {
        const double eps = 1e-9 * std::max(1.0, r);
        return 0.5 * (psi(std::abs(r - eps)) + psi(r + eps));
    };
    size_t next = 0;
    if (n == 1) {
        for (int i = 0; i <= I; ++i) conv[i] = trace(x_of(i));
        for (int j = 1; j <= J; ++j)
            for (int i = 0; i <= I; ++i)
                conv[static_cast<size_t>(j) * nx + i] = field.values[next++];
    } else {
        for (int i2 = 0; i2 <= I; ++i2)
            for (int i1 = 0; i1 <= I; ++i1)
                conv[static_cast<size_t>(i2) * nx + i1] =
                    radial_trace(std::hypot(x_of(i1), x_of(i2)));
        for (int j = 1; j <= J; ++j)
            for (int i2 = 0; i2 <= I; ++i2)
                for (int i1 = 0; i1 <= I; ++i1)
                    conv[(static_cast<size_t>(j) * nx + i2) * nx + i1] =
                        field.values[next++];
    }

    const FieldFn boundary = [&](const std::vector<double>& x,
                                 double y) -> double {
        const int j = static_cast<int>(std::lround(y / h));
        const int i1 = static_cast<int>(std::lround((x[0] + L) / h));
        if (n == 1) return conv[static_cast<size_t>(j) * nx + i1];
        const int i2 = static_cast<int>(std::lround((x[1] + L) / h));
        return conv[(static_cast<size_t>(j) * nx + i2) * nx + i1];
    };
    const FdSolution fd = fd_oracle_solve(box, boundary);

    ComparisonReport rep;
    double sum = 0.0;
    const double margin = rep.probe_margin;
    auto probe_x = [&](int i) {
        return std::abs(x_of(i)) <= L - margin + 1e-12;
    };
    auto probe_y = [&](int j) {
        const double y = j * h;
        return y >= margin - 1e-12 && y <= box.height - margin + 1e-12;
    };

    if (n == 1) {
        for (int j = 1; j < J; ++j)
            for (int i = 1; i < I; ++i) {
                const double d =
                    std::abs(fd.at(i, j) -
                             conv[static_cast<size_t>(j) * nx + i]);
                rep.max_abs = std::max(rep.max_abs, d);
                sum += d;
                ++rep.nodes;
                if (probe_x(i) && probe_y(j)) {
                    rep.probe_max_abs = std::max(rep.probe_max_abs, d);
                    ++rep.probe_nodes;
                }
            }
    } else {
        for (int j = 1; j < J; ++j)
            for (int i2 = 1; i2 < I; ++i2)
                for (int i1 = 1; i1 < I; ++i1) {
                    const double d = std::abs(
                        fd.at(i1, i2, j) -
                        conv[(static_cast<size_t>(j) * nx + i2) * nx + i1]);
                    rep.max_abs = std::max(rep.max_abs, d);
                    sum += d;
                    ++rep.nodes;
                    if (probe_x(i1) && probe_x(i2) && probe_y(j)) {
                        rep.probe_max_abs = std::max(rep.probe_max_abs, d);
                        ++rep.probe_nodes;
                    }
                }
    }
    if (rep.nodes > 0) rep.mean_abs = sum / rep.nodes;
    return rep;
}

}  // namespace keldysh
