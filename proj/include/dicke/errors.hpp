// errors.hpp — Exception types shared across the library

#pragma once

#include <stdexcept>

namespace dicke {

// A propagation step left the unit sphere by more than the allowed drift.
struct NormDrift : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A control value outside [-lambda_max, lambda_max].
struct ControlOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A time grid that is not commensurate with the step size.
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An environment stepped past its terminal state.
struct EpisodeFinished : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A reduced density matrix with an eigenvalue below the roundoff floor.
struct NumericalNegativity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dicke
