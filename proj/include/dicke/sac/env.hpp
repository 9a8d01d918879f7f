// env.hpp — Episodic environment interface consumed by the learner

#pragma once

#include <Eigen/Dense>

namespace dicke::sac {

// Scalar used by production training. doubles are instantiated by the
// gradient-check suites over the same templates.
using Real = float;

struct StepOutcome {
    Eigen::VectorXd state;  // encoded next state
    double reward = 0.0;
    bool done = false;
};

/// Single continuous action in [−action_bound, +action_bound]; encoded states
/// are fixed-length real vectors. One instance is single-threaded.
class Environment {
public:
    virtual ~Environment() = default;

    virtual Eigen::VectorXd reset() = 0;
    virtual StepOutcome step(double action) = 0;
    virtual int state_dim() const = 0;
    virtual double action_bound() const = 0;
};

}  // namespace dicke::sac
