#pragma once

#include <vector>

namespace plnc {

// Physicists' Gauss-Hermite rule: sum_i w_i f(x_i) ~ integral e^{-x^2} f(x) dx.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussHermite(int order);

    // The fixed order-24 rule used for every entropy integral.
    static const GaussHermite& order24();
};

}  // namespace plnc
