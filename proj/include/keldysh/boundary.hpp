#pragma once

#include <functional>
#include <vector>

namespace keldysh {

// One piece of piecewise boundary data.  For n = 1 the support is the
// interval [lo, hi] on the line (either end may be infinite); for n >= 2
// the support is the annulus lo <= |x| <= hi and f is the radial profile.
//
// sing_lo / sing_hi declare algebraic endpoint behaviour
// f(t) ~ c |t - endpoint|^gamma with gamma in (-1, 0]; 0 means bounded.
// Exponents may only be attached to finite endpoints.
struct BoundaryPiece {
    double lo = 0.0;
    double hi = 0.0;
    std::function<double(double)> f;
    double sing_lo = 0.0;
    double sing_hi = 0.0;
};

// Piecewise boundary data with a declared magnitude bound.  `bound` is the
// user's promise that |f| <= bound on the support away from the declared
// singular endpoints; it feeds the truncation-error bookkeeping.
struct BoundarySpec {
    std::vector<BoundaryPiece> pieces;  // ordered, pairwise disjoint
    double bound = 1.0;

    // Structural checks (ordering, exponent range, callables present) plus a
    // spot check of |f| against `bound` away from singular collars.  `n` is
    // the lateral dimension the data is meant for; radial supports must sit
    // in [0, inf).  Throws std::invalid_argument on violation.
    void validate(int n) const;

    // Pointwise evaluation; zero off the support.
    double operator()(double t) const;
};

}  // namespace keldysh
