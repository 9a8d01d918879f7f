// rl_env.hpp — The Dicke charging problem as an episodic Markov decision process
//
// State: real and imaginary amplitudes of |Ψ(t_i)⟩, the last chosen action and
// the current step index, each affinely normalized to [−√12, √12]. Action: the
// coupling λ held constant over the next Δt. Reward: the blended increment
// c(n)·ΔE/(Nω₀) + (1−c(n))·Δ𝓔₁ with the Fermi-function weight c evaluated at
// the global training-step count, frozen per episode so returns telescope.

#pragma once

#include <cstdint>
#include <memory>

#include "dicke/dynamics.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/protocol.hpp"
#include "dicke/sac/env.hpp"
#include "dicke/sac/policy.hpp"

namespace dicke {

// c(n) = 1/(1 + e^{(n − c_mean)/c_width}): 1/2 at c_mean, → 1 early, → 0 late.
double blend_coefficient(double n_steps, double c_mean, double c_width);

struct EnvConfig {
    ModelParams params;
    double dt = 0.0;
    int n_steps = 1;  // actions per episode, M − 1
    double c_mean = 40'000;
    double c_width = 20'000;
    // Global training-step counter for the reward blend; null → the env's own
    // step count (every step of this instance) is used.
    const std::uint64_t* global_step = nullptr;

    void validate() const;
};

class DickeEnv : public sac::Environment {
public:
    explicit DickeEnv(const EnvConfig& cfg);

    Eigen::VectorXd reset() override;
    sac::StepOutcome step(double action) override;
    int state_dim() const override { return 2 * ops_->layout.dim() + 2; }
    double action_bound() const override { return cfg_.params.lambda_max; }

    double dt() const { return cfg_.dt; }
    int steps_per_episode() const { return cfg_.n_steps; }
    const EnvConfig& config() const { return cfg_; }
    const DickeOperators& operators() const { return *ops_; }

    // encoding helpers (the encoding is invertible by construction)
    Eigen::VectorXd encode() const;
    Wavefunction decode(const Eigen::VectorXd& encoded) const;

    const Wavefunction& wavefunction() const { return psi_; }
    int step_index() const { return step_index_; }
    double blend() const { return blend_; }

private:
    EnvConfig cfg_;
    std::shared_ptr<const DickeOperators> ops_;
    Propagator prop_;
    Wavefunction psi_;
    int step_index_ = 0;
    double last_action_ = 0.0;
    double blend_ = 1.0;
    double energy_ = 0.0;     // E^(N) of the current state
    double ergotropy_ = 0.0;  // 𝓔₁ of the current state
    std::uint64_t own_steps_ = 0;
    bool done_ = true;  // step() before the first reset() is an error
};

// Deterministic evaluation rollout: one episode choosing the squashed policy
// mean at every step (no sampling); the visited λ sequence as a Protocol.
template <typename Scalar>
Protocol from_policy(const sac::SquashedGaussianPolicy<Scalar>& policy, DickeEnv& env) {
    Protocol protocol;
    protocol.dt = env.dt();
    protocol.lambda_max = env.config().params.lambda_max;
    protocol.omega0 = env.config().params.omega0;
    protocol.values.reserve(static_cast<std::size_t>(env.steps_per_episode()));
    Eigen::VectorXd s = env.reset();
    bool done = false;
    while (!done) {
        const double a =
            static_cast<double>(policy.mean_action(s.cast<Scalar>().eval()));
        protocol.values.push_back(a);
        sac::StepOutcome out = env.step(a);
        done = out.done;
        s = std::move(out.state);
    }
    protocol.validate();
    return protocol;
}

}  // namespace dicke
