#pragma once

#include <functional>
#include <string>
#include <vector>

#include "keldysh/boundary.hpp"
#include "keldysh/kernels.hpp"
#include "keldysh/params.hpp"
#include "keldysh/quadrature.hpp"

namespace keldysh {

// Scalar field on the half space: u(x, y), lateral coordinates first.
using FieldFn = std::function<double(const std::vector<double>&, double)>;

// ----------------------------------------------------------- PDE residuals

struct ResidualReport {
    Point point;
    double h = 0.0;
    double residual = 0.0;
    std::string equation;  // "transformed" or "original"
};

// Second-order central-difference residual of the constant-coefficient
// equation  Delta_x u + u_yy + (beta/y) u_y - lambda^2 u  at pt.  Requires
// pt.y > 2h so the full stencil stays strictly inside the half space
// (points closer to the boundary are rejected, never one-sided).
ResidualReport pde_residual(const FieldFn& u, const Point& pt, double h,
                            const TransformedParams& tp);

// Same stencil for the original degenerate equation
//   Delta_x u + y^m u_yy + alpha y^{m-1} u_y - lambda^2 u.
ResidualReport pde_residual(const FieldFn& u, const Point& pt, double h,
                            const ProblemParams& pp);

// ----------------------------------------- approximation-to-identity suite

struct IdentityRow {
    double y = 0.0;
    double min_value = 0.0;    // smallest sampled kernel value (positivity)
    double mass = 0.0;         // quadrature mass over the lateral space
    double mass_target = 0.0;  // closed-form mass it is checked against
    double tail = 0.0;         // mass carried by |x| >= delta
    double sup_tail = 0.0;     // sup of the kernel over |x| >= delta
};

struct IdentityReport {
    double delta = 0.0;
    std::vector<IdentityRow> rows;  // one per requested height, same order
    bool positive = false;          // min sampled value > 0 on every row
    bool mass_matches = false;      // |mass - target| <= 1e-7*max(1,|target|)
    bool tail_decreasing = false;   // strictly, along the given height list
    bool sup_decreasing = false;    // strictly, along the given height list

    bool pass() const {
        return positive && mass_matches && tail_decreasing && sup_decreasing;
    }
};

// Checks the approximate-identity conditions for the kernel along a strictly
// decreasing list of heights: positivity of sampled values, unit (or
// closed-form) mass, and decay of both the tail mass and the far-field sup
// beyond |x| = delta.
IdentityReport identity_suite(const Kernel& kernel,
                              const std::vector<double>& y_list, double delta,
                              const QuadratureConfig& cfg = {});

// ------------------------------------------------ finite-difference oracle

// Rectangular box [-L, L]^n x [0, H] with one uniform step h in every
// direction; h must divide 2L and H.  The bottom row y = 0 carries Dirichlet
// data directly, so the beta/y coefficient is never evaluated on the
// degenerate line.
struct FdBox {
    double half_width = 1.0;  // L
    double height = 1.0;      // H
    double h = 0.125;
    TransformedParams params;
};

struct FdSolution {
    FdBox box;
    int nx = 0;  // nodes along each lateral axis
    int ny = 0;  // node rows along y, bottom and top included
    // All node values, boundary included.  n = 1: index [j*nx + i];
    // n = 2: index [(j*nx + i2)*nx + i1].
    std::vector<double> values;

    double x_at(int i) const { return -box.half_width + i * box.h; }
    double y_at(int j) const { return j * box.h; }
    double at(int i, int j) const {
        return values[static_cast<size_t>(j) * nx + i];
    }
    double at(int i1, int i2, int j) const {
        return values[(static_cast<size_t>(j) * nx + i2) * nx + i1];
    }
};

// Solves the second-order central discretization of the constant-coefficient
// equation on the box, `boundary` supplying Dirichlet values on every face
// (bottom row included, evaluated at y = 0).  n = 1 goes through a sparse
// direct factorization, n = 2 through BiCGSTAB with a diagonal
// preconditioner; either way the discrete system must reach an infinity-norm
// residual of 1e-12 relative to the operator scale or solver_error is
// thrown.
FdSolution fd_oracle_solve(const FdBox& box, const FieldFn& boundary);

// ------------------------------------------ convolution vs. the FD oracle

struct ComparisonReport {
    double max_abs = 0.0;  // over all interior nodes
    double mean_abs = 0.0;
    int nodes = 0;
    // Same maximum restricted to nodes at least probe_margin away from every
    // box face.  Kinks in the boundary data (e.g. an indicator jump) pin the
    // all-node maximum near the bottom row at a resolution-independent
    // level; the probe region is where the h^2 rate is visible.
    double probe_max_abs = 0.0;
    double probe_margin = 0.25;
    int probe_nodes = 0;
};

// Cross-validates the convolution solver against the FD oracle: lateral
// sides and top of the box take convolution values, the bottom row takes psi
// itself, and the oracle's interior is compared against the convolution at
// the same nodes.
ComparisonReport oracle_vs_convolution(const BoundarySpec& psi,
                                       const FdBox& box,
                                       const QuadratureConfig& cfg = {});

}  // namespace keldysh
