#include "dicke/dynamics.hpp"

#include <cmath>
#include <complex>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>

namespace dicke {

Propagator::Propagator(std::shared_ptr<const DickeOperators> ops, double dt)
    : ops_(std::move(ops)), dt_(dt) {
    if (!ops_) throw std::invalid_argument("Propagator: null operators");
    if (!std::isfinite(dt_) || dt_ == 0.0)
        throw std::invalid_argument("Propagator: dt must be finite and nonzero");
}

const Propagator::Spectral& Propagator::spectral_for(double lam) const {
    // Caller holds cache_mutex_.
    if (cache_.lam == lam && cache_.eigenvalues.size() > 0) return cache_;
    Eigen::MatrixXcd h = lam * ops_->hint.matrix;
    h.diagonal() += ops_->h0_diag.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("Propagator: eigendecomposition failed");
    cache_.lam = lam;
    cache_.eigenvalues = solver.eigenvalues();
    cache_.eigenvectors = solver.eigenvectors();
    return cache_;
}

Wavefunction Propagator::step(const Wavefunction& psi, double lam) const {
    const double bound = ops_->params.lambda_max;
    if (!(std::abs(lam) <= bound))
        throw ControlOutOfRange("propagate: |lambda| = " + std::to_string(std::abs(lam)) +
                                " exceeds lambda_max = " + std::to_string(bound));
    if (psi.amp.size() != ops_->layout.dim())
        throw std::invalid_argument("propagate: state dimension mismatch");

    Wavefunction out{psi.layout, Eigen::VectorXcd()};
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        const Spectral& sp = spectral_for(lam);
        Eigen::VectorXcd w = sp.eigenvectors.adjoint() * psi.amp;
        w.array() *= (Complex(0.0, -dt_) * sp.eigenvalues.array().cast<Complex>()).exp();
        out.amp = sp.eigenvectors * w;
    }

    const double drift = std::abs(out.amp.norm() - 1.0);
    if (drift > 1e-9)
        throw NormDrift("propagate: norm drift " + std::to_string(drift) + " exceeds 1e-9");
    if (drift > 1e-10) {
        std::cerr << "[dicke] warning: renormalizing state, norm drift " << drift << "\n";
        out.amp /= out.amp.norm();
    }
    return out;
}

Trajectory rollout(const Propagator& prop, const Wavefunction& psi0, const Protocol& protocol) {
    if (std::abs(protocol.dt - prop.dt()) > 1e-12 * std::max(1.0, std::abs(prop.dt())))
        throw GridMismatch("rollout: protocol dt " + std::to_string(protocol.dt) +
                           " does not match propagator dt " + std::to_string(prop.dt()));
    Trajectory traj;
    traj.states.reserve(protocol.size() + 1);
    traj.controls = protocol.values;
    traj.states.push_back(psi0);
    for (double lam : protocol.values) traj.states.push_back(prop.step(traj.states.back(), lam));
    return traj;
}

}  // namespace dicke
