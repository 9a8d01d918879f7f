#include "dicke/harness/selftest.hpp"

#include <cmath>
#include <random>

#include "dicke/dynamics.hpp"
#include "dicke/harness/oracles.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"
#include "dicke/protocol.hpp"
#include "dicke/rl_env.hpp"
#include "dicke/sac/agent.hpp"

namespace dicke::harness {

namespace {

struct Reporter {
    std::ostream& out;
    int failures = 0;

    void check(const char* name, bool ok, double detail = std::nan("")) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name;
        if (!std::isnan(detail)) out << "  (" << detail << ")";
        out << "\n";
        if (!ok) ++failures;
    }
};

Eigen::VectorXcd random_state(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v / v.norm();
}

void check_operators_vs_full_basis(Reporter& rep) {
    double worst = 0.0;
    for (int n : {2, 3}) {
        ModelParams p = ModelParams::standard(n);
        const auto full = oracle::build_full_basis_ops(p.n_tls, p.n_fock);
        const auto sym = build_collective_ops(p);
        const auto project = [&](const Eigen::MatrixXcd& m) -> Eigen::MatrixXcd {
            return full.isometry.adjoint() * m * full.isometry;
        };
        worst = std::max(worst, (project(full.jplus) - sym.jplus).cwiseAbs().maxCoeff());
        worst = std::max(worst, (project(full.jz) - sym.jz).cwiseAbs().maxCoeff());
        worst = std::max(worst, (project(full.a) - sym.a).cwiseAbs().maxCoeff());
        const Eigen::MatrixXcd hint_full =
            2.0 * p.omega0 * (full.jplus + full.jminus) * (full.a + full.adag);
        worst = std::max(worst, (project(hint_full) - build_Hint(p).matrix).cwiseAbs().maxCoeff());
    }
    rep.check("operators match unsymmetrized construction (N=2,3)", worst <= 1e-12, worst);
}

void check_reduced_density(Reporter& rep) {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    const ModelParams p = ModelParams::standard(3);
    const BasisLayout layout = build_basis(p);
    const auto full = oracle::build_full_basis_ops(p.n_tls, p.n_fock);
    for (int trial = 0; trial < 20; ++trial) {
        Wavefunction psi{layout, random_state(layout.dim(), rng)};
        const Eigen::VectorXcd embedded = oracle::embed_symmetric(psi.amp, full);
        const Eigen::Matrix2cd expected =
            oracle::partial_trace_qubit0(embedded, p.n_tls, p.n_fock);
        const Eigen::Matrix2cd got = reduced_density_1(p, psi).rho;
        worst = std::max(worst, (expected - got).cwiseAbs().maxCoeff());
    }
    rep.check("reduced density matches brute-force partial trace (N=3)", worst <= 1e-10, worst);
}

void check_propagator(Reporter& rep) {
    const ModelParams p{1, 1.0, 0.3, 6};
    const auto ops = std::make_shared<const DickeOperators>(build_operators(p));
    const Propagator prop(ops, 0.1);
    Eigen::MatrixXcd h = 0.3 * ops->hint.matrix;
    h.diagonal() += ops->h0_diag.cast<Complex>();

    Wavefunction psi = initial_state(p, ops->layout);
    Eigen::VectorXcd reference = psi.amp;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        psi = prop.step(psi, 0.3);
        reference = oracle::integrate_schrodinger(h, reference, 0.1);
        worst = std::max(worst, (psi.amp - reference).cwiseAbs().maxCoeff());
    }
    rep.check("propagator matches adaptive ODE integration (50 steps)", worst <= 1e-8, worst);
}

void check_schedules(Reporter& rep) {
    sac::SacConfig cfg;
    const bool ok = std::abs(sac::entropy_target(cfg, 0.0) - 0.72) < 1e-15 &&
                    std::abs(sac::entropy_target(cfg, 1e18) - (-3.0)) < 1e-12 &&
                    blend_coefficient(40'000, 40'000, 20'000) == 0.5;
    rep.check("entropy target and reward blend arithmetic", ok);
}

void check_gradients(Reporter& rep) {
    sac::SacConfig cfg;
    cfg.hidden1 = 8;
    cfg.hidden2 = 7;
    cfg.batch_size = 4;
    cfg.buffer_capacity = 16;
    sac::SacAgent<double> agent(5, 0.3, cfg, 11);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    sac::ReplayBuffer<double> buffer(5, 16);
    for (int i = 0; i < 8; ++i) {
        Eigen::VectorXd s(5), sn(5);
        for (int k = 0; k < 5; ++k) {
            s(k) = gauss(rng);
            sn(k) = gauss(rng);
        }
        buffer.add(s, 0.1 * gauss(rng), gauss(rng), sn, i % 4 == 3);
    }
    const auto batch = buffer.sample(4, rng);
    const auto xi = agent.draw_noise(4);
    const double h = 1e-6;

    // actor loss
    sac::Mlp<double>::Grads g;
    agent.actor_backward(batch, xi, g);
    auto& w = agent.policy().net.layers[0].w;
    const double saved = w(1, 2);
    w(1, 2) = saved + h;
    const double lp = agent.actor_loss(batch, xi);
    w(1, 2) = saved - h;
    const double lm = agent.actor_loss(batch, xi);
    w(1, 2) = saved;
    const double fd = (lp - lm) / (2 * h);
    const double analytic = g.dw[0](1, 2);
    const double rel =
        std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-8});
    rep.check("actor gradient matches central differences", rel <= 1e-4, rel);

    // critic loss
    const auto y = agent.critic_targets(batch, xi);
    agent.critic_backward(batch, y, 0, g);
    auto& wq = agent.q1().layers[1].w;
    const double savedq = wq(2, 3);
    wq(2, 3) = savedq + h;
    const double qp = agent.critic_loss(batch, xi, 0);
    wq(2, 3) = savedq - h;
    const double qm = agent.critic_loss(batch, xi, 0);
    wq(2, 3) = savedq;
    const double fdq = (qp - qm) / (2 * h);
    const double analyticq = g.dw[1](2, 3);
    const double relq =
        std::abs(analyticq - fdq) / std::max({std::abs(analyticq), std::abs(fdq), 1e-8});
    rep.check("critic gradient matches central differences", relq <= 1e-4, relq);

    // temperature loss in l_alpha
    const double target = 0.3;
    const double ga = agent.temperature_grad(batch, xi, target);
    const double la = agent.l_alpha();
    agent.l_alpha() = la + h;
    const double tp = agent.temperature_loss(batch, xi, target);
    agent.l_alpha() = la - h;
    const double tm = agent.temperature_loss(batch, xi, target);
    agent.l_alpha() = la;
    const double fdt = (tp - tm) / (2 * h);
    const double relt = std::abs(ga - fdt) / std::max({std::abs(ga), std::abs(fdt), 1e-8});
    rep.check("temperature gradient matches central differences", relt <= 1e-4, relt);
}

void check_protocol_roundtrip(Reporter& rep) {
    Protocol p = on_off(1.0, 0.1, 0.3);
    p.values[3] = -0.2345678901234567;
    const auto path = std::filesystem::temp_directory_path() / "dicke_selftest_protocol.json";
    save(p, path);
    const Protocol q = load(path);
    std::filesystem::remove(path);
    rep.check("protocol JSON round trip is lossless",
              q.values == p.values && q.dt == p.dt && q.lambda_max == p.lambda_max);
}

}  // namespace

int run_selftest(std::ostream& out) {
    Reporter rep{out};
    check_operators_vs_full_basis(rep);
    check_reduced_density(rep);
    check_propagator(rep);
    check_schedules(rep);
    check_gradients(rep);
    check_protocol_roundtrip(rep);
    out << (rep.failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: FAILURES: " + std::to_string(rep.failures) + "\n");
    return rep.failures == 0 ? 0 : 1;
}

}  // namespace dicke::harness
