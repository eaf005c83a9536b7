#pragma once

#include <iosfwd>

#include "keldysh/config.hpp"

namespace keldysh {

// CLI command bodies.  Each writes a '#'-commented preamble followed by CSV
// rows (or PASS/FAIL lines for verify) to `os` and returns the process exit
// code: 0 clean, 3 numerical nonconvergence, 4 verification failure.
// Configuration problems discovered while running throw config_error /
// std::invalid_argument, which the CLI maps to exit code 2.

// Kernel values at the configured points.
int cmd_eval(const RunConfig& c, std::ostream& os);

// Numerical lateral mass against the closed form at each configured height.
int cmd_mass(const RunConfig& c, std::ostream& os);

// Dirichlet solution by convolution at the configured points; `threads` 0
// means one worker per hardware thread.
int cmd_solve(const RunConfig& c, std::ostream& os, int threads = 0);

// Approximate-identity suite, residual order check, and (when a box is
// configured) the finite-difference cross-check; PASS/FAIL per property.
int cmd_verify(const RunConfig& c, std::ostream& os);

// Worked half-plane pair: closed forms against quadrature and differentiation.
int cmd_example(const RunConfig& c, std::ostream& os);

}  // namespace keldysh
