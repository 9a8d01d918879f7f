#include "dicke/rl_env.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke {

namespace {
constexpr double kSqrt12 = 3.4641016151377544;  // 2√3
}

double blend_coefficient(double n_steps, double c_mean, double c_width) {
    return 1.0 / (1.0 + std::exp((n_steps - c_mean) / c_width));
}

void EnvConfig::validate() const {
    params.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("EnvConfig: dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("EnvConfig: need at least one step per episode (M >= 2)");
    if (!(c_width > 0.0)) throw std::invalid_argument("EnvConfig: c_width must be positive");
}

DickeEnv::DickeEnv(const EnvConfig& cfg)
    : cfg_(cfg),
      ops_(std::make_shared<const DickeOperators>(build_operators(cfg.params))),
      prop_(ops_, cfg.dt),
      psi_(initial_state(cfg.params, ops_->layout)) {
    cfg_.validate();
}

Eigen::VectorXd DickeEnv::reset() {
    psi_ = initial_state(cfg_.params, ops_->layout);
    step_index_ = 0;
    last_action_ = 0.0;  // undefined before the first action; 0 is the symmetric choice
    done_ = false;
    const double n = static_cast<double>(cfg_.global_step ? *cfg_.global_step : own_steps_);
    blend_ = blend_coefficient(n, cfg_.c_mean, cfg_.c_width);
    energy_ = battery_energy(cfg_.params, psi_);
    ergotropy_ = ergotropy_1(cfg_.params, psi_);
    return encode();
}

sac::StepOutcome DickeEnv::step(double action) {
    if (done_)
        throw EpisodeFinished("DickeEnv: step() after the episode ended (call reset())");
    if (!(std::abs(action) <= cfg_.params.lambda_max))
        throw ControlOutOfRange("DickeEnv: action " + std::to_string(action) + " out of range");

    psi_ = prop_.step(psi_, action);
    last_action_ = action;
    ++step_index_;
    ++own_steps_;

    const double energy_next = battery_energy(cfg_.params, psi_);
    const double ergotropy_next = ergotropy_1(cfg_.params, psi_);
    const double n_omega = cfg_.params.n_tls * cfg_.params.omega0;
    const double reward = blend_ * (energy_next - energy_) / n_omega +
                          (1.0 - blend_) * (ergotropy_next - ergotropy_);
    energy_ = energy_next;
    ergotropy_ = ergotropy_next;
    done_ = step_index_ >= cfg_.n_steps;

    return sac::StepOutcome{encode(), reward, done_};
}

Eigen::VectorXd DickeEnv::encode() const {
    const int dim = ops_->layout.dim();
    Eigen::VectorXd s(2 * dim + 2);
    s.head(dim) = kSqrt12 * psi_.amp.real();
    s.segment(dim, dim) = kSqrt12 * psi_.amp.imag();
    s(2 * dim) = kSqrt12 * last_action_ / cfg_.params.lambda_max;
    s(2 * dim + 1) = kSqrt12 * (2.0 * step_index_ / cfg_.n_steps - 1.0);
    return s;
}

Wavefunction DickeEnv::decode(const Eigen::VectorXd& encoded) const {
    const int dim = ops_->layout.dim();
    if (encoded.size() != 2 * dim + 2)
        throw std::invalid_argument("DickeEnv::decode: encoded length mismatch");
    Wavefunction psi{ops_->layout, Eigen::VectorXcd(dim)};
    psi.amp.real() = encoded.head(dim) / kSqrt12;
    psi.amp.imag() = encoded.segment(dim, dim) / kSqrt12;
    return psi;
}

}  // namespace dicke
