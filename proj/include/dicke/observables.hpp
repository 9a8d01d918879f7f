// observables.hpp — Figures of merit of the charging process
//
// Stored energy, single-unit ergotropy, charging-precision variance,
// von Neumann entropy of one battery unit, and the total-energy ratio.

#pragma once

#include <Eigen/Dense>

#include "dicke/model.hpp"

namespace dicke {

/// Reduced state of one battery unit, basis (|g⟩, |e⟩). Unit trace, Hermitian;
/// eigenvalues are clamped to [0,1] after a roundoff check on construction.
struct QubitDensityMatrix {
    Eigen::Matrix2cd rho;

    explicit QubitDensityMatrix(const Eigen::Matrix2cd& m);

    double p_excited() const { return rho(1, 1).real(); }
    // Eigenvalues (min, max), clamped to [0, 1].
    std::pair<double, double> eigenvalues() const;
};

// Helpers on the 2x2 state; reused by the wavefunction-level observables.
double ergotropy_of(const QubitDensityMatrix& rho, double omega0);
double entropy_of(const QubitDensityMatrix& rho);

// E^(N)(t) = ⟨Ĥ_B⟩ = ω₀ Σ |c_{m,n}|² m_idx ∈ [0, Nω₀].
double battery_energy(const ModelParams& p, const Wavefunction& psi);

// Single-unit reduced density matrix via the closed-form contraction of the
// battery density matrix in the Dicke basis (binomial weights in log space).
QubitDensityMatrix reduced_density_1(const ModelParams& p, const Wavefunction& psi);

// 𝓔₁ = E/N − r₁ω₀ with r₁ the smaller eigenvalue of ρ_B,1; clamped at 0.
double ergotropy_1(const ModelParams& p, const Wavefunction& psi);

// σ² = ω₀² p_e (1 − p_e): the single-unit Hamiltonian is ω₀ times a projector.
double energy_variance_1(const ModelParams& p, const Wavefunction& psi);

// −Tr[ρ_B,1 ln ρ_B,1] ∈ [0, ln 2]; eigenvalues below 1e−15 contribute 0.
double entropy_1(const ModelParams& p, const Wavefunction& psi);

// ⟨Ĥ₀⟩ + λ⟨Ĥ_int⟩.
double total_energy(const DickeOperators& ops, const Wavefunction& psi, double lam);

/// One row of figure-of-merit data along a trajectory.
struct StepRecord {
    double t = 0.0;
    double lam = 0.0;              // control active at this instant (0 once charging ended)
    double energy_per_unit = 0.0;  // E^(N)/N
    double ergotropy1 = 0.0;
    double variance1 = 0.0;
    double entropy1 = 0.0;
    double etot_ratio = 1.0;       // E_tot/(Nω₀)

    // Range invariants up to `slack` roundoff.
    bool within_bounds(double omega0, double slack = 1e-9) const;
};

StepRecord record(const DickeOperators& ops, const Wavefunction& psi, double lam, double t);

}  // namespace dicke
