#include "plnc/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "plnc/errors.hpp"

namespace plnc {

namespace {

// Evaluate the orthonormal Hermite polynomial of degree n at x, returning
// (p_n, p_{n-1}). Recurrence: p_{j+1} = x sqrt(2/(j+1)) p_j - sqrt(j/(j+1)) p_{j-1}.
std::pair<long double, long double> hermite_orthonormal(int n, long double x) {
    long double p0 = 0.7511255444649424828587L;  // pi^(-1/4)
    long double p1 = 0.0L;
    for (int j = 0; j < n; ++j) {
        const long double p2 = p1;
        p1 = p0;
        p0 = x * std::sqrt(2.0L / (j + 1)) * p1 - std::sqrt(static_cast<long double>(j) / (j + 1)) * p2;
    }
    return {p0, p1};
}

}  // namespace

GaussHermite::GaussHermite(int order) {
    if (order < 1 || order > 128) throw std::invalid_argument("unsupported quadrature order");
    const int n = order;
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);

    // Newton iteration from the classic asymptotic first guesses; roots
    // found largest first, exploiting symmetry for the lower half.
    const int half = (n + 1) / 2;
    long double z = 0.0L;
    for (int i = 0; i < half; ++i) {
        if (i == 0)
            z = std::sqrt(2.0L * n + 1.0L) - 1.85575L * std::pow(2.0L * n + 1.0L, -1.0L / 6.0L);
        else if (i == 1)
            z -= 1.14L * std::pow(static_cast<long double>(n), 0.426L) / z;
        else if (i == 2)
            z = 1.86L * z - 0.86L * nodes[0];
        else if (i == 3)
            z = 1.91L * z - 0.91L * nodes[1];
        else
            z = 2.0L * z - nodes[i - 2];

        long double pp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, pm1] = hermite_orthonormal(n, z);
            pp = std::sqrt(2.0L * n) * pm1;  // derivative of orthonormal p_n
            const long double dz = p / pp;
            z -= dz;
            if (std::abs(dz) < 1e-18L * (1.0L + std::abs(z))) break;
        }
        if (!(std::isfinite(static_cast<double>(z))))
            throw QuadratureDivergence("Gauss-Hermite root search failed");
        nodes[i] = static_cast<double>(z);
        weights[i] = static_cast<double>(2.0L / (pp * pp));
        nodes[n - 1 - i] = -nodes[i];
        weights[n - 1 - i] = weights[i];
    }
    if (n % 2 == 1) nodes[half - 1] = 0.0;
}

const GaussHermite& GaussHermite::order24() {
    static const GaussHermite rule(24);
    return rule;
}

}  // namespace plnc
