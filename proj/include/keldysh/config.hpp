#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "keldysh/boundary.hpp"
#include "keldysh/kernels.hpp"
#include "keldysh/params.hpp"
#include "keldysh/quadrature.hpp"

namespace keldysh {

// Raised on malformed configuration input; messages name the line and field.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem description shared by all CLI commands, parsed from an INI-style
// file.  Top-level keys select the kernel family and equation parameters;
// exactly one of the two parameterizations (m/alpha of the degenerate
// equation, or beta of its constant-coefficient form) must be given.
// Sections: [points], [grid], [boundary], [quadrature], [verify], [mass].
struct RunConfig {
    std::string kernel = "p0";  // p0 | plambda | q
    int n = 1;
    bool original = false;      // file used the m/alpha parameterization
    double m = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.0;

    std::vector<Point> points;  // from [points] rows or the [grid] product

    bool has_boundary = false;
    BoundarySpec boundary;

    QuadratureConfig quad;

    // [verify] / [mass]
    double delta = 1.0;
    std::vector<double> y_list{1.0, 0.1, 0.01};
    double residual_h = 0.01;
    double corrupt = 1.0;       // test hook: scales the kernel under verify
    bool with_box = false;      // box = half_width height h
    double box_half_width = 1.0;
    double box_height = 0.5;
    double box_h = 0.0625;
    double box_tol = 5e-3;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Constant-coefficient parameters implied by the config (reduces m/alpha
// when the file used the original parameterization).
TransformedParams transformed_of(const RunConfig& c);

// Kernel selected by the config.
Kernel kernel_of(const RunConfig& c);

}  // namespace keldysh
