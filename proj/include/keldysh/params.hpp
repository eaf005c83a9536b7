#pragma once

#include <vector>

namespace keldysh {

// Original degenerate equation on the half space y > 0, x in R^n:
//   Delta_x u + y^m u_yy + alpha y^{m-1} u_y - lambda^2 u = 0,  m < 2, alpha < 1.
struct ProblemParams {
    int n = 1;
    double m = 0.0;
    double alpha = 0.0;
    double lambda = 0.0;
    void validate() const;  // throws std::invalid_argument
};

// Constant-coefficient normal form reached by rescaling the height:
//   Delta_x v + v_yy + (beta/y) v_y - lambda^2 v = 0,  beta < 1.
struct TransformedParams {
    int n = 1;
    double beta = 0.0;
    double lambda = 0.0;
    // Kernel exponent nu = (1 + n - beta)/2; always > n/2.
    double nu() const { return 0.5 * (1.0 + n - beta); }
    void validate() const;
};

// beta = (2 alpha - m)/(2 - m); u(x,y) = v(x, transform_y(m,y)).
TransformedParams to_transformed(const ProblemParams& p);

// Height substitution eta(y) = (2/(2-m)) y^{(2-m)/2}.
double transform_y(double m, double y);

struct Point {
    std::vector<double> x;
    double y = 0.0;
};

} // namespace keldysh
