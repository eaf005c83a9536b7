#pragma once

#include <functional>
#include <vector>

#include "keldysh/boundary.hpp"
#include "keldysh/kernels.hpp"
#include "keldysh/params.hpp"
#include "keldysh/quadrature.hpp"

namespace keldysh {

// Per-point error accounting.  quad_error is the summed quadrature error
// estimate; trunc_bound bounds the contribution discarded by truncating
// unbounded boundary data to a finite window (0 when nothing was cut).
struct PointDiagnostics {
    double quad_error = 0.0;
    double trunc_bound = 0.0;
};

struct SolutionField {
    std::vector<Point> points;
    std::vector<double> values;
    std::vector<PointDiagnostics> diagnostics;
    TransformedParams params;
};

// Evaluates u(x, y) = (psi * K(., y))(x) at each requested point, where K is
// the kernel's lateral profile at height y.  Points must have y > 0 and a
// lateral dimension matching the kernel.  n = 1 accepts general piecewise
// data; n = 2, 3 require radial data (pieces live on [0, inf)).
SolutionField solve_dirichlet(const BoundarySpec& psi,
                              const std::vector<Point>& points,
                              const Kernel& kernel,
                              const QuadratureConfig& cfg = {});

// Integral of the kernel over the whole lateral space at height y, by
// quadrature (the closed form lives on the kernel for cross-checks).
double radial_mass(const Kernel& kernel, double y,
                   const QuadratureConfig& cfg = {});

// Kernel mass at height y carried by the region |x| > delta.
double tail_mass(const Kernel& kernel, double y, double delta,
                 const QuadratureConfig& cfg = {});

// <K(., y), phi> over the lateral space; phi is a function of the signed
// coordinate for n = 1 and of the radius for n >= 2.  As y -> 0+ this tends
// to phi(0) at unit mass (the kernel is an approximate identity).
double pair_against_test_function(const std::function<double(double)>& phi,
                                  const Kernel& kernel, double y,
                                  const QuadratureConfig& cfg = {});

}  // namespace keldysh
