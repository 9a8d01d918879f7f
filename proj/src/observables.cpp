#include "dicke/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke {

namespace {

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// C(N−1, e) / sqrt(C(N, e+s) C(N, e+s')) for the S20-style contraction.
double contraction_weight(int n_tls, int e, int s, int sp) {
    const double lw = log_binomial(n_tls - 1, e) -
                      0.5 * (log_binomial(n_tls, e + s) + log_binomial(n_tls, e + sp));
    return std::exp(lw);
}

}  // namespace

QubitDensityMatrix::QubitDensityMatrix(const Eigen::Matrix2cd& m) : rho(m) {
    const double trace = rho.trace().real();
    if (std::abs(trace - 1.0) > 1e-10)
        throw std::invalid_argument("QubitDensityMatrix: trace deviates from 1 by " +
                                    std::to_string(trace - 1.0));
    const double lo = eigenvalues().first;
    if (lo < -1e-8)
        throw NumericalNegativity("QubitDensityMatrix: eigenvalue " + std::to_string(lo));
}

std::pair<double, double> QubitDensityMatrix::eigenvalues() const {
    const double mean = 0.5 * rho.trace().real();
    const double half_gap = 0.5 * (rho(1, 1) - rho(0, 0)).real();
    const double radius = std::sqrt(half_gap * half_gap + std::norm(rho(0, 1)));
    const auto clamp01 = [](double x) { return std::clamp(x, 0.0, 1.0); };
    return {clamp01(mean - radius), clamp01(mean + radius)};
}

double ergotropy_of(const QubitDensityMatrix& rho, double omega0) {
    const double raw = omega0 * (rho.p_excited() - rho.eigenvalues().first);
    return std::max(raw, 0.0);
}

double entropy_of(const QubitDensityMatrix& rho) {
    const auto [lo, hi] = rho.eigenvalues();
    double s = 0.0;
    for (double lambda : {lo, hi})
        if (lambda > 1e-15) s -= lambda * std::log(lambda);
    return s;
}

double battery_energy(const ModelParams& p, const Wavefunction& psi) {
    double energy = 0.0;
    for (int m_idx = 0; m_idx <= p.n_tls; ++m_idx) {
        double pop = 0.0;
        for (int n = 0; n <= p.n_fock; ++n) pop += std::norm(psi.amp(psi.layout.index(m_idx, n)));
        energy += m_idx * pop;
    }
    return p.omega0 * energy;
}

QubitDensityMatrix reduced_density_1(const ModelParams& p, const Wavefunction& psi) {
    const int nb = p.n_tls + 1;
    const int nf = p.n_fock + 1;

    // Battery density matrix after tracing the cavity; only the bands
    // |k − k'| ≤ 1 enter the single-unit contraction.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXcd upper = Eigen::VectorXcd::Zero(nb - 1);  // upper(k) = ρ_{k+1,k}
    for (int k = 0; k < nb; ++k) {
        const auto row_k = psi.amp.segment(psi.layout.index(k, 0), nf);
        diag(k) = row_k.squaredNorm();
        if (k + 1 < nb) {
            const auto row_k1 = psi.amp.segment(psi.layout.index(k + 1, 0), nf);
            upper(k) = (row_k.conjugate().array() * row_k1.array()).sum();
        }
    }

    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int e = 0; e <= p.n_tls - 1; ++e) {
        rho(0, 0) += diag(e) * contraction_weight(p.n_tls, e, 0, 0);
        rho(1, 1) += diag(e + 1) * contraction_weight(p.n_tls, e, 1, 1);
        rho(1, 0) += upper(e) * contraction_weight(p.n_tls, e, 1, 0);
    }
    rho(0, 1) = std::conj(rho(1, 0));
    return QubitDensityMatrix(rho);
}

double ergotropy_1(const ModelParams& p, const Wavefunction& psi) {
    const QubitDensityMatrix rho = reduced_density_1(p, psi);
    const double raw = battery_energy(p, psi) / p.n_tls - rho.eigenvalues().first * p.omega0;
    return std::max(raw, 0.0);
}

double energy_variance_1(const ModelParams& p, const Wavefunction& psi) {
    const double pe = reduced_density_1(p, psi).p_excited();
    return p.omega0 * p.omega0 * pe * (1.0 - pe);
}

double entropy_1(const ModelParams& p, const Wavefunction& psi) {
    return entropy_of(reduced_density_1(p, psi));
}

double total_energy(const DickeOperators& ops, const Wavefunction& psi, double lam) {
    const double e0 = ops.h0_diag.dot(psi.amp.cwiseAbs2());
    if (lam == 0.0) return e0;
    const double eint = psi.amp.dot(ops.hint.matrix * psi.amp).real();
    return e0 + lam * eint;
}

StepRecord record(const DickeOperators& ops, const Wavefunction& psi, double lam, double t) {
    const ModelParams& p = ops.params;
    const QubitDensityMatrix rho = reduced_density_1(p, psi);
    const double pe = rho.p_excited();

    StepRecord r;
    r.t = t;
    r.lam = lam;
    r.energy_per_unit = battery_energy(p, psi) / p.n_tls;
    r.ergotropy1 = std::max(r.energy_per_unit - rho.eigenvalues().first * p.omega0, 0.0);
    r.variance1 = p.omega0 * p.omega0 * pe * (1.0 - pe);
    r.entropy1 = entropy_of(rho);
    r.etot_ratio = total_energy(ops, psi, lam) / (p.n_tls * p.omega0);
    return r;
}

bool StepRecord::within_bounds(double omega0, double slack) const {
    const double w2 = omega0 * omega0;
    return energy_per_unit >= -slack && energy_per_unit <= omega0 + slack &&
           ergotropy1 >= -slack && ergotropy1 <= energy_per_unit + slack &&
           variance1 >= -slack && variance1 <= 0.25 * w2 + slack &&
           entropy1 >= -slack && entropy1 <= std::log(2.0) + slack;
}

}  // namespace dicke
