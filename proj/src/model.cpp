#include "dicke/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke {

namespace {

// kron(A, B) with A on the battery factor and B on the Fock factor, matching
// the flat index m_idx*(n_fock+1) + n.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Battery-factor ladder matrices over m_idx ∈ {0..N}, M = m_idx − N/2.
struct BatteryLadders {
    Eigen::MatrixXcd jz, jp, jm;
};

BatteryLadders battery_ladders(int n_tls) {
    const int nb = n_tls + 1;
    const double j = 0.5 * n_tls;
    BatteryLadders l;
    l.jz = Eigen::MatrixXcd::Zero(nb, nb);
    l.jp = Eigen::MatrixXcd::Zero(nb, nb);
    l.jm = Eigen::MatrixXcd::Zero(nb, nb);
    for (int k = 0; k < nb; ++k) {
        const double m = k - j;
        l.jz(k, k) = m;
        if (k + 1 < nb) l.jp(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
        if (k - 1 >= 0) l.jm(k - 1, k) = std::sqrt(j * (j + 1) - m * (m - 1));
    }
    return l;
}

// Fock-factor annihilation operator with hard truncation at n_fock.
Eigen::MatrixXcd fock_annihilator(int n_fock) {
    const int nf = n_fock + 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nf, nf);
    for (int n = 1; n < nf; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

}  // namespace

void ModelParams::validate() const {
    if (n_tls < 1) throw std::invalid_argument("ModelParams: n_tls must be >= 1");
    if (!(omega0 > 0.0)) throw std::invalid_argument("ModelParams: omega0 must be > 0");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("ModelParams: lambda_max must be > 0");
    if (n_fock < n_tls)
        throw std::invalid_argument("ModelParams: n_fock must be >= n_tls (initial N-photon state)");
}

ModelParams ModelParams::standard(int n_tls, double lambda_max, double omega0) {
    ModelParams p;
    p.n_tls = n_tls;
    p.omega0 = omega0;
    p.lambda_max = lambda_max;
    p.n_fock = 2 * n_tls;
    p.validate();
    return p;
}

BasisLayout build_basis(const ModelParams& p) {
    p.validate();
    return BasisLayout{p.n_tls, p.n_fock};
}

HermitianOperator::HermitianOperator(Eigen::MatrixXcd m) : matrix(std::move(m)) {
    if (matrix.rows() != matrix.cols())
        throw std::invalid_argument("HermitianOperator: matrix must be square");
    const double defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-12)
        throw std::invalid_argument("HermitianOperator: hermiticity defect " +
                                    std::to_string(defect) + " exceeds 1e-12");
}

CollectiveOps build_collective_ops(const ModelParams& p) {
    p.validate();
    const auto l = battery_ladders(p.n_tls);
    const Eigen::MatrixXcd a_f = fock_annihilator(p.n_fock);
    const Eigen::MatrixXcd id_b = Eigen::MatrixXcd::Identity(p.n_tls + 1, p.n_tls + 1);
    const Eigen::MatrixXcd id_f = Eigen::MatrixXcd::Identity(p.n_fock + 1, p.n_fock + 1);
    CollectiveOps ops;
    ops.jz = kron(l.jz, id_f);
    ops.jplus = kron(l.jp, id_f);
    ops.jminus = kron(l.jm, id_f);
    ops.a = kron(id_b, a_f);
    ops.adag = kron(id_b, a_f.adjoint());
    return ops;
}

HermitianOperator build_H0(const ModelParams& p) {
    p.validate();
    const BasisLayout layout = build_basis(p);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(layout.dim(), layout.dim());
    for (int m_idx = 0; m_idx <= p.n_tls; ++m_idx)
        for (int n = 0; n <= p.n_fock; ++n)
            h(layout.index(m_idx, n), layout.index(m_idx, n)) = p.omega0 * (m_idx + n);
    return HermitianOperator(std::move(h));
}

HermitianOperator build_Hint(const ModelParams& p) {
    p.validate();
    const auto l = battery_ladders(p.n_tls);
    const Eigen::MatrixXcd a_f = fock_annihilator(p.n_fock);
    const Eigen::MatrixXcd x_b = l.jp + l.jm;
    const Eigen::MatrixXcd x_f = a_f + a_f.adjoint().eval();
    return HermitianOperator(2.0 * p.omega0 * kron(x_b, x_f));
}

HermitianOperator build_Hint_rwa(const ModelParams& p) {
    p.validate();
    const auto l = battery_ladders(p.n_tls);
    const Eigen::MatrixXcd a_f = fock_annihilator(p.n_fock);
    Eigen::MatrixXcd h = kron(l.jp, a_f) + kron(l.jm, a_f.adjoint().eval());
    return HermitianOperator(2.0 * p.omega0 * h);
}

Wavefunction initial_state(const ModelParams& p, const BasisLayout& layout) {
    p.validate();
    Wavefunction psi{layout, Eigen::VectorXcd::Zero(layout.dim())};
    psi.amp(layout.index(0, p.n_tls)) = 1.0;
    return psi;
}

DickeOperators build_operators(const ModelParams& p) {
    const BasisLayout layout = build_basis(p);
    Eigen::VectorXd h0_diag(layout.dim());
    for (int m_idx = 0; m_idx <= p.n_tls; ++m_idx)
        for (int n = 0; n <= p.n_fock; ++n)
            h0_diag(layout.index(m_idx, n)) = p.omega0 * (m_idx + n);
    return DickeOperators{p, layout, std::move(h0_diag), build_Hint(p)};
}

}  // namespace dicke
