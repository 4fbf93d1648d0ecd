#pragma once

#include <stdexcept>

namespace plnc {

struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EllTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroCoefficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeneratorMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RankDeficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySubset : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConstructionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowNotBracketing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace plnc
