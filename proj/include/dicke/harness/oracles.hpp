// oracles.hpp — Independent reference computations used only for verification
//
// Everything here deliberately avoids the library's own code paths: operators
// are rebuilt in the full unsymmetrized 2^N ⊗ Fock basis, time evolution uses
// an adaptive Dormand–Prince integrator instead of eigendecomposition, and
// densities are integrated by adaptive Simpson quadrature. The selftest CLI
// command and the test suites compare the production paths against these.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace dicke::oracle {

using Complex = std::complex<double>;

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Operator acting as `op` on qubit `site` (0-based) of n_tls qubits, identity
// elsewhere. Qubit 0 is the slowest index.
inline Eigen::MatrixXcd on_site(const Eigen::Matrix2cd& op, int site, int n_tls) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < n_tls; ++q) {
        const Eigen::MatrixXcd factor =
            (q == site) ? Eigen::MatrixXcd(op) : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity());
        out = kron(out, factor);
    }
    return out;
}

struct FullBasisOps {
    Eigen::MatrixXcd jz, jplus, jminus, a, adag;  // on 2^N ⊗ (n_fock+1)
    Eigen::MatrixXcd isometry;                    // (2^N (nf+1)) × ((N+1)(nf+1)), symmetric sector
};

// Collective operators in the unsymmetrized basis plus the isometry onto the
// symmetric (Dicke) sector ordered as m_idx slow, n fast, matching the flat
// layout of the production basis.
inline FullBasisOps build_full_basis_ops(int n_tls, int n_fock) {
    Eigen::Matrix2cd sp = Eigen::Matrix2cd::Zero();  // basis (|g⟩, |e⟩): σ⁺|g⟩ = |e⟩
    sp(1, 0) = 1.0;
    Eigen::Matrix2cd sz = Eigen::Matrix2cd::Zero();
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;

    const int qdim = 1 << n_tls;
    const int fdim = n_fock + 1;
    Eigen::MatrixXcd jp_q = Eigen::MatrixXcd::Zero(qdim, qdim);
    Eigen::MatrixXcd jz_q = Eigen::MatrixXcd::Zero(qdim, qdim);
    for (int site = 0; site < n_tls; ++site) {
        jp_q += on_site(sp, site, n_tls);
        jz_q += 0.5 * on_site(sz, site, n_tls);
    }

    Eigen::MatrixXcd a_f = Eigen::MatrixXcd::Zero(fdim, fdim);
    for (int n = 1; n < fdim; ++n) a_f(n - 1, n) = std::sqrt(static_cast<double>(n));

    const Eigen::MatrixXcd id_q = Eigen::MatrixXcd::Identity(qdim, qdim);
    const Eigen::MatrixXcd id_f = Eigen::MatrixXcd::Identity(fdim, fdim);

    FullBasisOps ops;
    ops.jplus = kron(jp_q, id_f);
    ops.jminus = ops.jplus.adjoint();
    ops.jz = kron(jz_q, id_f);
    ops.a = kron(id_q, a_f);
    ops.adag = ops.a.adjoint();

    // Dicke state with k excitations: equal superposition of all bitstrings of
    // popcount k, normalized by 1/√C(N,k).
    Eigen::MatrixXcd dicke = Eigen::MatrixXcd::Zero(qdim, n_tls + 1);
    for (int bits = 0; bits < qdim; ++bits) {
        const int k = __builtin_popcount(static_cast<unsigned>(bits));
        dicke(bits, k) += 1.0;
    }
    for (int k = 0; k <= n_tls; ++k) dicke.col(k) /= dicke.col(k).norm();
    ops.isometry = kron(dicke, id_f);
    return ops;
}

// Symmetric-sector embedding of amplitudes c_{m_idx,n} into the full basis.
inline Eigen::VectorXcd embed_symmetric(const Eigen::VectorXcd& amp, const FullBasisOps& ops) {
    return ops.isometry * amp;
}

// ρ of qubit 0 from a pure state on 2^N ⊗ (n_fock+1), tracing everything else.
inline Eigen::Matrix2cd partial_trace_qubit0(const Eigen::VectorXcd& full, int n_tls, int n_fock) {
    const int rest = (1 << (n_tls - 1)) * (n_fock + 1);  // qubits 1..N−1 and the cavity
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    for (int s = 0; s < 2; ++s)
        for (int sp_ = 0; sp_ < 2; ++sp_)
            for (int r = 0; r < rest; ++r)
                rho(s, sp_) += full(s * rest + r) * std::conj(full(sp_ * rest + r));
    return rho;
}

// --- adaptive Dormand–Prince 5(4) for i∂ψ = Hψ -------------------------------

inline Eigen::VectorXcd integrate_schrodinger(const Eigen::MatrixXcd& h,
                                              const Eigen::VectorXcd& psi0, double t_final,
                                              double tol = 1e-12) {
    const Complex mi(0.0, -1.0);
    const auto f = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return mi * (h * y); };

    Eigen::VectorXcd y = psi0;
    double t = 0.0;
    double dt = t_final / 64.0;
    int rejected_in_a_row = 0;
    while (t < t_final) {
        dt = std::min(dt, t_final - t);
        const Eigen::VectorXcd k1 = f(y);
        const Eigen::VectorXcd k2 = f(y + dt * (1.0 / 5) * k1);
        const Eigen::VectorXcd k3 = f(y + dt * ((3.0 / 40) * k1 + (9.0 / 40) * k2));
        const Eigen::VectorXcd k4 = f(y + dt * ((44.0 / 45) * k1 - (56.0 / 15) * k2 + (32.0 / 9) * k3));
        const Eigen::VectorXcd k5 =
            f(y + dt * ((19372.0 / 6561) * k1 - (25360.0 / 2187) * k2 + (64448.0 / 6561) * k3 -
                        (212.0 / 729) * k4));
        const Eigen::VectorXcd k6 =
            f(y + dt * ((9017.0 / 3168) * k1 - (355.0 / 33) * k2 + (46732.0 / 5247) * k3 +
                        (49.0 / 176) * k4 - (5103.0 / 18656) * k5));
        const Eigen::VectorXcd y5 = y + dt * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 +
                                              (125.0 / 192) * k4 - (2187.0 / 6784) * k5 +
                                              (11.0 / 84) * k6);
        const Eigen::VectorXcd k7 = f(y5);
        const Eigen::VectorXcd y4 = y + dt * ((5179.0 / 57600) * k1 + (7571.0 / 16695) * k3 +
                                              (393.0 / 640) * k4 - (92097.0 / 339200) * k5 +
                                              (187.0 / 2100) * k6 + (1.0 / 40) * k7);
        const double scale = tol + tol * y.cwiseAbs().maxCoeff();
        const double err = (y5 - y4).cwiseAbs().maxCoeff() / scale;
        if (err <= 1.0) {
            t += dt;
            y = y5;
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 60) {
            throw std::runtime_error("integrate_schrodinger: step size collapsed");
        }
        const double grow = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
        dt *= std::clamp(grow, 0.2, 5.0);
    }
    return y;
}

// --- adaptive Simpson quadrature ---------------------------------------------

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}
}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Differential entropy of the tanh-squashed Gaussian on the reference interval
// [−1,1], by quadrature over the Gaussian variable with the naive Jacobian
// formula (independent of the softplus identity used in production code).
inline double squashed_gaussian_entropy(double mu, double sigma) {
    const auto neg_logpi_weighted = [&](double u) {
        const double z = (u - mu) / sigma;
        const double gauss = std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
        const double t = std::tanh(u);
        const double log_pi = std::log(gauss) - std::log(1.0 - t * t);
        return -gauss * log_pi;
    };
    const double lo = mu - 12.0 * sigma, hi = mu + 12.0 * sigma;
    return integrate(neg_logpi_weighted, lo, hi, 1e-11);
}

}  // namespace dicke::oracle
