// dynamics.hpp — Exact unitary propagation under piecewise-constant control
//
// Each segment applies U = exp(−i (H0 + λ Hint) Δt) computed from the
// Hermitian eigendecomposition of the segment Hamiltonian. The decomposition
// for the most recent λ is cached (bitwise λ match), so constant-λ rollouts
// pay for one eigensolve.

#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "dicke/model.hpp"
#include "dicke/protocol.hpp"

namespace dicke {

class Propagator {
public:
    // dt in units of 1/ω₀; must be finite and nonzero (negative reverses time).
    Propagator(std::shared_ptr<const DickeOperators> ops, double dt);

    // U(λ)·psi with |λ| ≤ lambda_max. Norm is preserved to 1e−10 per step;
    // drift in (1e−10, 1e−9] renormalizes with a warning, beyond throws NormDrift.
    Wavefunction step(const Wavefunction& psi, double lam) const;

    double dt() const { return dt_; }
    const DickeOperators& operators() const { return *ops_; }

private:
    struct Spectral {
        double lam = std::numeric_limits<double>::quiet_NaN();
        Eigen::VectorXd eigenvalues;
        Eigen::MatrixXcd eigenvectors;
    };

    const Spectral& spectral_for(double lam) const;

    std::shared_ptr<const DickeOperators> ops_;
    double dt_;
    mutable std::mutex cache_mutex_;
    mutable Spectral cache_;
};

/// States at every grid point plus the controls applied between them.
/// states.size() == controls.size() + 1.
struct Trajectory {
    std::vector<Wavefunction> states;
    std::vector<double> controls;
};

// Iterates Propagator::step over the protocol. The protocol grid must match
// the propagator's dt (GridMismatch otherwise).
Trajectory rollout(const Propagator& prop, const Wavefunction& psi0, const Protocol& protocol);

}  // namespace dicke
