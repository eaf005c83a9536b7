#include "keldysh/params.hpp"

#include <cmath>
#include <stdexcept>

namespace keldysh {
namespace {

// Degeneracy strengths with beta this close to 1 make 1 - beta meaningless
// in double precision; every formula below divides by it somewhere.
constexpr double beta_max = 1.0 - 1e-6;

void check_common(int n, double lambda) {
    if (n < 1) throw std::invalid_argument("params: require n >= 1");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("params: require lambda >= 0");
}

} // namespace

void ProblemParams::validate() const {
    check_common(n, lambda);
    if (!(m < 2.0)) throw std::invalid_argument("params: require m < 2");
    if (!(alpha < 1.0)) throw std::invalid_argument("params: require alpha < 1");
    double beta = (2.0 * alpha - m) / (2.0 - m);
    if (beta > beta_max)
        throw std::invalid_argument("params: derived beta too close to 1");
}

void TransformedParams::validate() const {
    check_common(n, lambda);
    if (!(beta <= beta_max))
        throw std::invalid_argument("params: require beta < 1");
}

TransformedParams to_transformed(const ProblemParams& p) {
    p.validate();
    return {p.n, (2.0 * p.alpha - p.m) / (2.0 - p.m), p.lambda};
}

double transform_y(double m, double y) {
    if (!(m < 2.0)) throw std::invalid_argument("transform_y: require m < 2");
    if (!(y >= 0.0)) throw std::domain_error("transform_y: require y >= 0");
    return 2.0 / (2.0 - m) * std::pow(y, 0.5 * (2.0 - m));
}

} // namespace keldysh
