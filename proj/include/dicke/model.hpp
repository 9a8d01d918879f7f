// model.hpp — Truncated Dicke ⊗ Fock product space and the battery-model operators
//
// N two-level systems (one collective J = N/2 sector) coupled to a single
// cavity mode truncated at n_fock photons. All operators are dense complex
// matrices over the flat product basis; dynamics never leaves this basis.

#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "dicke/errors.hpp"

namespace dicke {

using Complex = std::complex<double>;

/// Physical and truncation parameters of the Dicke battery model.
struct ModelParams {
    int n_tls = 1;            // N, number of two-level battery units
    double omega0 = 1.0;      // energy splitting; sets the energy and 1/time units
    double lambda_max = 0.3;  // control bound, |λ(t)| ≤ lambda_max
    int n_fock = 2;           // photon-number cutoff (max photons retained)

    // Largest effective coupling strength, g̃ = ω₀ λ_max.
    double g_tilde() const { return omega0 * lambda_max; }

    // Throws std::invalid_argument on any violated invariant
    // (n_fock ≥ n_tls so the initial N-photon Fock state is representable).
    void validate() const;

    // Paper defaults: given N, use n_fock = 2N.
    static ModelParams standard(int n_tls, double lambda_max = 0.3, double omega0 = 1.0);
};

/// Flat indexing of the product basis |J=N/2, M⟩ ⊗ |n⟩.
///
/// m_idx ∈ {0..N} counts battery excitations (M = m_idx − N/2),
/// n ∈ {0..n_fock} counts photons. n runs fastest, m_idx slowest.
struct BasisLayout {
    int n_tls = 0;
    int n_fock = 0;

    int dim() const { return (n_tls + 1) * (n_fock + 1); }
    int index(int m_idx, int n) const { return m_idx * (n_fock + 1) + n; }
    std::pair<int, int> unindex(int i) const { return {i / (n_fock + 1), i % (n_fock + 1)}; }
};

BasisLayout build_basis(const ModelParams& p);

/// Dense operator validated Hermitian on construction (defect ≤ 1e−12 elementwise).
struct HermitianOperator {
    Eigen::MatrixXcd matrix;

    explicit HermitianOperator(Eigen::MatrixXcd m);
    Eigen::Index dim() const { return matrix.rows(); }
};

/// Collective angular-momentum and cavity ladder operators on the full product space.
/// J_±|J,M⟩ = √(J(J+1) − M(M±1)) |J,M±1⟩ with J = N/2; â†|n_fock⟩ = 0 (hard truncation).
struct CollectiveOps {
    Eigen::MatrixXcd jz;
    Eigen::MatrixXcd jplus;
    Eigen::MatrixXcd jminus;
    Eigen::MatrixXcd a;
    Eigen::MatrixXcd adag;
};

CollectiveOps build_collective_ops(const ModelParams& p);

// Free Hamiltonian Ĥ_C + Ĥ_B = ω₀ â†â + ω₀(Ĵ_z + N/2): diagonal, eigenvalue
// ω₀(m_idx + n), minimum 0 at (m_idx=0, n=0).
HermitianOperator build_H0(const ModelParams& p);

// Dipole interaction 2ω₀(Ĵ₊ + Ĵ₋)(â + â†), counter-rotating terms included.
HermitianOperator build_Hint(const ModelParams& p);

// Rotating-wave variant 2ω₀(Ĵ₊â + Ĵ₋â†); conserves Ĵ_z + â†â. Comparison runs only.
HermitianOperator build_Hint_rwa(const ModelParams& p);

/// Pure state of charger + battery as amplitudes over the product basis.
struct Wavefunction {
    BasisLayout layout;
    Eigen::VectorXcd amp;

    double norm() const { return amp.norm(); }
};

// |Ψ₀⟩ = |G⟩ ⊗ |N⟩: discharged battery, N photons in the cavity.
Wavefunction initial_state(const ModelParams& p, const BasisLayout& layout);

/// The matrices a simulation actually needs, built once per parameter set.
/// h0 is diagonal; h0_diag carries its eigenvalues ω₀(m_idx + n).
struct DickeOperators {
    ModelParams params;
    BasisLayout layout;
    Eigen::VectorXd h0_diag;
    HermitianOperator hint;
};

DickeOperators build_operators(const ModelParams& p);

}  // namespace dicke
