// agent.hpp — Soft actor-critic: twin critics, squashed-Gaussian actor,
// auto-tuned temperature, Polyak-averaged targets
//
// Targets follow y = r + γ(min_j Q_targ,j(s',a') − α log π(a'|s')) with one
// fresh a' sample, y = r on terminal transitions. The actor loss is
// E[α log π(a|s) − min_j Q_j(s,a)] through the reparameterized sample; the
// temperature loss is α·E[−log π − H̄] minimized in l_α with plain SGD,
// α = e^{l_α} staying positive structurally.

#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dicke/sac/mlp.hpp"
#include "dicke/sac/policy.hpp"
#include "dicke/sac/replay.hpp"

namespace dicke::sac {

/// Training hyperparameters (defaults: the paper's single set used for every run).
struct SacConfig {
    int batch_size = 256;
    long total_steps = 480'000;
    double lr = 1e-3;
    double lr_alpha = 3e-3;
    double gamma = 0.993;
    double polyak = 0.995;
    int buffer_capacity = 180'000;
    int hidden1 = 512;
    int hidden2 = 256;
    long n_init_rand = 5'000;       // uniform random actions for this many initial steps
    long n_init_no_update = 1'000;  // no parameter updates for this many initial steps
    int n_updates = 50;             // grouped updates, once per n_updates env steps
    double h_start = 0.72;
    double h_end = -3.0;
    double h_decay = 200'000;
    double c_mean = 40'000;  // reward-blend schedule, consumed by the environment
    double c_width = 20'000;

    void validate() const {
        if (batch_size < 1 || total_steps < 0 || buffer_capacity < batch_size)
            throw std::invalid_argument("SacConfig: inconsistent sizes");
        if (!(lr > 0) || !(lr_alpha > 0) || !(h_decay > 0) || !(c_width > 0))
            throw std::invalid_argument("SacConfig: rates and widths must be positive");
        if (!(gamma > 0.0 && gamma <= 1.0))
            throw std::invalid_argument("SacConfig: gamma must be in (0, 1]");
        if (!(polyak >= 0.0 && polyak <= 1.0))
            throw std::invalid_argument("SacConfig: polyak must be in [0, 1]");
        if (hidden1 < 1 || hidden2 < 1 || n_updates < 1)
            throw std::invalid_argument("SacConfig: bad architecture/schedule");
    }
};

// H̄(n) = H_end + (H_start − H_end) e^{−n/H_decay}, monotone from H_start to H_end.
inline double entropy_target(const SacConfig& cfg, double n_steps) {
    return cfg.h_end + (cfg.h_start - cfg.h_end) * std::exp(-n_steps / cfg.h_decay);
}

template <typename Scalar>
class SacAgent {
public:
    using Mat = typename Mlp<Scalar>::Mat;
    using Vec = typename Mlp<Scalar>::Vec;
    using Batch = typename ReplayBuffer<Scalar>::Batch;

    SacAgent(int state_dim, double action_bound, const SacConfig& cfg, std::uint64_t seed)
        : cfg_(cfg), state_dim_(state_dim), rng_(seed) {
        cfg_.validate();
        if (state_dim < 1 || !(action_bound > 0))
            throw std::invalid_argument("SacAgent: bad state_dim or action bound");
        const std::vector<int> pol_dims{state_dim, cfg.hidden1, cfg.hidden2, 2};
        const std::vector<int> q_dims{state_dim + 1, cfg.hidden1, cfg.hidden2, 1};
        policy_.net = Mlp<Scalar>::create(pol_dims, rng_, 0.01);  // small head: no early tanh saturation
        policy_.a_lo = static_cast<Scalar>(-action_bound);
        policy_.a_hi = static_cast<Scalar>(action_bound);
        q1_ = Mlp<Scalar>::create(q_dims, rng_);
        q2_ = Mlp<Scalar>::create(q_dims, rng_);
        q1_targ_ = q1_;
        q2_targ_ = q2_;
        opt_policy_.emplace(policy_.net, cfg.lr);
        opt_q1_.emplace(q1_, cfg.lr);
        opt_q2_.emplace(q2_, cfg.lr);
    }

    double alpha() const { return std::exp(l_alpha_); }

    // --- action selection -------------------------------------------------

    double sample_action(const Eigen::VectorXd& state) {
        const Vec s = state.cast<Scalar>();
        const Scalar xi = static_cast<Scalar>(normal_(rng_));
        return static_cast<double>(policy_.sample(s, xi).action);
    }

    double mean_action(const Eigen::VectorXd& state) const {
        return static_cast<double>(policy_.mean_action(state.cast<Scalar>()));
    }

    double uniform_action() {
        std::uniform_real_distribution<double> u(static_cast<double>(policy_.a_lo),
                                                 static_cast<double>(policy_.a_hi));
        return u(rng_);
    }

    // --- losses (pure in the noise; used directly by finite-difference checks)

    Vec critic_targets(const Batch& batch, const Vec& xi_next) const {
        const int n = batch.size();
        typename Mlp<Scalar>::Workspace ws;
        const Mat& head = policy_.net.forward(batch.s_next, ws);
        Mat xq(state_dim_ + 1, n);
        xq.topRows(state_dim_) = batch.s_next;
        Vec logp(n);
        for (int i = 0; i < n; ++i) {
            const Scalar sigma = SquashedGaussianPolicy<Scalar>::sigma_from_m(head(1, i));
            const Scalar u = head(0, i) + sigma * xi_next(i);
            const Scalar a = policy_.center() + policy_.half() * SquashedGaussianPolicy<Scalar>::squash(u);
            xq(state_dim_, i) = normalize_action(a);
            logp(i) = log_prob_ref(u, sigma, xi_next(i));
        }
        const Mat q1v = q1_targ_.forward(xq);
        const Mat q2v = q2_targ_.forward(xq);
        const auto a_now = static_cast<Scalar>(alpha());
        const auto gamma = static_cast<Scalar>(cfg_.gamma);
        Vec y(n);
        for (int i = 0; i < n; ++i) {
            const Scalar boot = std::min(q1v(0, i), q2v(0, i)) - a_now * logp(i);
            y(i) = batch.r(i) + (batch.done[static_cast<std::size_t>(i)] ? Scalar(0) : gamma * boot);
        }
        return y;
    }

    double critic_loss(const Batch& batch, const Vec& xi_next, int which) const {
        const Vec y = critic_targets(batch, xi_next);
        const Mat q = (which == 0 ? q1_ : q2_).forward(assemble_q_input(batch.s, batch.a));
        return (q.row(0).transpose() - y).squaredNorm() / batch.size();
    }

    double actor_loss(const Batch& batch, const Vec& xi) const {
        const int n = batch.size();
        typename Mlp<Scalar>::Workspace ws;
        const Mat& head = policy_.net.forward(batch.s, ws);
        Mat xq(state_dim_ + 1, n);
        xq.topRows(state_dim_) = batch.s;
        Vec logp(n);
        for (int i = 0; i < n; ++i) {
            const Scalar sigma = SquashedGaussianPolicy<Scalar>::sigma_from_m(head(1, i));
            const Scalar u = head(0, i) + sigma * xi(i);
            const Scalar a = policy_.center() + policy_.half() * SquashedGaussianPolicy<Scalar>::squash(u);
            xq(state_dim_, i) = normalize_action(a);
            logp(i) = log_prob_ref(u, sigma, xi(i));
        }
        const Mat q1v = q1_.forward(xq);
        const Mat q2v = q2_.forward(xq);
        const auto a_now = static_cast<Scalar>(alpha());
        double loss = 0.0;
        for (int i = 0; i < n; ++i)
            loss += static_cast<double>(a_now * logp(i) - std::min(q1v(0, i), q2v(0, i)));
        return loss / n;
    }

    double temperature_loss(const Batch& batch, const Vec& xi, double h_target) const {
        return alpha() * (entropy_estimate(batch, xi) - h_target);
    }

    // Monte-Carlo entropy estimate E[−log π] over the batch states (reference interval).
    double entropy_estimate(const Batch& batch, const Vec& xi) const {
        const int n = batch.size();
        const Mat head = policy_.net.forward(batch.s);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const Scalar sigma = SquashedGaussianPolicy<Scalar>::sigma_from_m(head(1, i));
            const Scalar u = head(0, i) + sigma * xi(i);
            acc -= static_cast<double>(log_prob_ref(u, sigma, xi(i)));
        }
        return acc / n;
    }

    // --- gradients (pure given the noise; the update steps add the optimizer)

    // Mean-square Bellman residual of one critic against precomputed targets;
    // fills g, returns the loss.
    double critic_backward(const Batch& batch, const Vec& y, int which,
                           typename Mlp<Scalar>::Grads& g) {
        const int n = batch.size();
        Mlp<Scalar>& net = which == 0 ? q1_ : q2_;
        const Mat xq = assemble_q_input(batch.s, batch.a);
        const Mat& q = net.forward(xq, ws_q_);
        Mat dy = q;
        dy.row(0) -= y.transpose();
        const double loss = dy.row(0).squaredNorm() / n;
        dy *= Scalar(2.0 / n);
        net.backward(dy, ws_q_, g);
        return loss;
    }

    double actor_backward(const Batch& batch, const Vec& xi, typename Mlp<Scalar>::Grads& g) {
        const int n = batch.size();
        const Mat& head = policy_.net.forward(batch.s, ws_policy_);
        Mat xq(state_dim_ + 1, n);
        xq.topRows(state_dim_) = batch.s;
        Vec u(n), sigma(n), tanh_u(n), logp(n);
        for (int i = 0; i < n; ++i) {
            sigma(i) = SquashedGaussianPolicy<Scalar>::sigma_from_m(head(1, i));
            u(i) = head(0, i) + sigma(i) * xi(i);
            tanh_u(i) = std::tanh(u(i));
            const Scalar a = policy_.center() + policy_.half() * SquashedGaussianPolicy<Scalar>::squash(u(i));
            xq(state_dim_, i) = normalize_action(a);
            logp(i) = log_prob_ref(u(i), sigma(i), xi(i));
        }
        const Mat& q1v = q1_.forward(xq, ws_q_);
        const Mat q2v = q2_.forward(xq, ws_q2_);

        const auto a_now = static_cast<Scalar>(alpha());
        const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
        double loss = 0.0;
        // min_j Q_j: route the (negative) gradient to the smaller critic only.
        Mat dy1 = Mat::Zero(1, n), dy2 = Mat::Zero(1, n);
        for (int i = 0; i < n; ++i) {
            loss += static_cast<double>(a_now * logp(i) - std::min(q1v(0, i), q2v(0, i)));
            (q1v(0, i) <= q2v(0, i) ? dy1(0, i) : dy2(0, i)) = -inv_n;
        }
        loss /= n;

        // Critic parameters receive no gradient; only the input row matters.
        const Mat dx1 = q1_.backward_input(dy1, ws_q_);
        const Mat dx2 = q2_.backward_input(dy2, ws_q2_);
        Mat dhead(2, n);
        for (int i = 0; i < n; ++i) {
            const Scalar da = (dx1(state_dim_, i) + dx2(state_dim_, i)) * action_scale();
            const Scalar du = a_now * Scalar(2) * tanh_u(i) * inv_n +
                              da * policy_.half() * (Scalar(1) - tanh_u(i) * tanh_u(i));
            const Scalar dsigma = du * xi(i) - a_now * inv_n / sigma(i);
            dhead(0, i) = du;
            dhead(1, i) = dsigma * Scalar(2) * head(1, i);
        }
        policy_.net.backward(dhead, ws_policy_, g);
        return loss;
    }

    // d/dl_α of α(l_α)·E[−log π − H̄]; also refreshes the entropy estimate.
    double temperature_grad(const Batch& batch, const Vec& xi, double h_target) {
        last_entropy_ = entropy_estimate(batch, xi);
        return alpha() * (last_entropy_ - h_target);
    }

    // --- update steps ------------------------------------------------------

    std::pair<double, double> update_critics(const Batch& batch) {
        const Vec y = critic_targets(batch, draw_noise(batch.size()));
        const double loss1 = critic_backward(batch, y, 0, grads_q_);
        opt_q1_->step(q1_, grads_q_);
        const double loss2 = critic_backward(batch, y, 1, grads_q_);
        opt_q2_->step(q2_, grads_q_);
        return {loss1, loss2};
    }

    double update_actor(const Batch& batch) {
        const double loss = actor_backward(batch, draw_noise(batch.size()), grads_policy_);
        opt_policy_->step(policy_.net, grads_policy_);
        return loss;
    }

    // One SGD step on l_α against α·E[−log π − H̄]; returns the new α.
    double update_temperature(const Batch& batch, double h_target) {
        l_alpha_ -= cfg_.lr_alpha * temperature_grad(batch, draw_noise(batch.size()), h_target);
        return alpha();
    }

    void polyak_targets() {
        polyak_update(q1_targ_, q1_, cfg_.polyak);
        polyak_update(q2_targ_, q2_, cfg_.polyak);
    }

    struct UpdateInfo {
        double q1_loss = 0, q2_loss = 0, actor_loss = 0;
        double alpha = 0, entropy = 0;
    };

    // critic → actor → temperature → Polyak, the SAC ordering.
    UpdateInfo update(const Batch& batch, double h_target) {
        UpdateInfo info;
        std::tie(info.q1_loss, info.q2_loss) = update_critics(batch);
        info.actor_loss = update_actor(batch);
        info.alpha = update_temperature(batch, h_target);
        info.entropy = last_entropy_;
        polyak_targets();
        if (!std::isfinite(info.q1_loss) || !std::isfinite(info.q2_loss) ||
            !std::isfinite(info.actor_loss) || !std::isfinite(info.alpha))
            throw std::runtime_error("SacAgent: non-finite loss, aborting training");
        return info;
    }

    // --- plumbing ----------------------------------------------------------

    Vec draw_noise(int n) {
        Vec xi(n);
        for (int i = 0; i < n; ++i) xi(i) = static_cast<Scalar>(normal_(rng_));
        return xi;
    }

    Mat assemble_q_input(const Mat& states, const Vec& actions) const {
        Mat xq(state_dim_ + 1, states.cols());
        xq.topRows(state_dim_) = states;
        for (Eigen::Index i = 0; i < actions.size(); ++i)
            xq(state_dim_, i) = normalize_action(actions(i));
        return xq;
    }

    // Actions enter the critics affinely normalized to [−√12, √12], the same
    // convention the environment uses for its state components.
    Scalar normalize_action(Scalar a) const { return (a - policy_.center()) * action_scale(); }
    Scalar action_scale() const { return Scalar(3.4641016151377544) / policy_.half(); }

    const SacConfig& config() const { return cfg_; }
    int state_dim() const { return state_dim_; }
    SquashedGaussianPolicy<Scalar>& policy() { return policy_; }
    const SquashedGaussianPolicy<Scalar>& policy() const { return policy_; }
    Mlp<Scalar>& q1() { return q1_; }
    Mlp<Scalar>& q2() { return q2_; }
    Mlp<Scalar>& q1_target() { return q1_targ_; }
    Mlp<Scalar>& q2_target() { return q2_targ_; }
    double& l_alpha() { return l_alpha_; }
    double last_entropy() const { return last_entropy_; }
    std::mt19937_64& rng() { return rng_; }

    void serialize(std::ostream& out) const;
    void deserialize(std::istream& in);

private:
    SacConfig cfg_;
    int state_dim_;
    SquashedGaussianPolicy<Scalar> policy_;
    Mlp<Scalar> q1_, q2_, q1_targ_, q2_targ_;
    std::optional<Adam<Scalar>> opt_policy_, opt_q1_, opt_q2_;
    double l_alpha_ = 0.0;
    double last_entropy_ = 0.0;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};

    typename Mlp<Scalar>::Workspace ws_policy_, ws_q_, ws_q2_;
    typename Mlp<Scalar>::Grads grads_policy_, grads_q_;
};

// --- binary state streaming (used by the trainer's checkpoint files) --------

namespace detail {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated stream");
    return v;
}

template <typename Derived>
void write_dense(std::ostream& out, const Eigen::DenseBase<Derived>& m) {
    write_pod<std::int64_t>(out, m.rows());
    write_pod<std::int64_t>(out, m.cols());
    const auto& eval = m.derived();
    out.write(reinterpret_cast<const char*>(eval.data()),
              static_cast<std::streamsize>(sizeof(typename Derived::Scalar)) * eval.size());
}

template <typename Mat>
Mat read_dense(std::istream& in) {
    const auto rows = read_pod<std::int64_t>(in);
    const auto cols = read_pod<std::int64_t>(in);
    if (rows < 0 || cols < 0 || rows * cols > (1LL << 32))
        throw std::runtime_error("checkpoint: implausible tensor shape");
    Mat m(rows, cols);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(sizeof(typename Mat::Scalar)) * m.size());
    if (!in) throw std::runtime_error("checkpoint: truncated tensor");
    return m;
}

template <typename Scalar>
void write_mlp(std::ostream& out, const Mlp<Scalar>& net) {
    write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers.size()));
    for (const auto& l : net.layers) {
        write_dense(out, l.w);
        write_dense(out, l.b);
    }
}

template <typename Scalar>
void read_mlp(std::istream& in, Mlp<Scalar>& net) {
    const auto n = read_pod<std::uint32_t>(in);
    if (n != net.layers.size()) throw std::runtime_error("checkpoint: layer count mismatch");
    for (auto& l : net.layers) {
        l.w = read_dense<typename Mlp<Scalar>::Mat>(in);
        l.b = read_dense<typename Mlp<Scalar>::Vec>(in);
    }
}

template <typename Scalar>
void write_adam(std::ostream& out, const Adam<Scalar>& opt) {
    write_pod<std::int64_t>(out, opt.t);
    for (std::size_t i = 0; i < opt.mw.size(); ++i) {
        write_dense(out, opt.mw[i]);
        write_dense(out, opt.vw[i]);
        write_dense(out, opt.mb[i]);
        write_dense(out, opt.vb[i]);
    }
}

template <typename Scalar>
void read_adam(std::istream& in, Adam<Scalar>& opt) {
    opt.t = read_pod<std::int64_t>(in);
    for (std::size_t i = 0; i < opt.mw.size(); ++i) {
        opt.mw[i] = read_dense<typename Mlp<Scalar>::Mat>(in);
        opt.vw[i] = read_dense<typename Mlp<Scalar>::Mat>(in);
        opt.mb[i] = read_dense<typename Mlp<Scalar>::Vec>(in);
        opt.vb[i] = read_dense<typename Mlp<Scalar>::Vec>(in);
    }
}

inline void write_string(std::ostream& out, const std::string& s) {
    write_pod<std::uint64_t>(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& in) {
    const auto n = read_pod<std::uint64_t>(in);
    if (n > (1ULL << 20)) throw std::runtime_error("checkpoint: implausible string length");
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("checkpoint: truncated string");
    return s;
}

}  // namespace detail

template <typename Scalar>
void SacAgent<Scalar>::serialize(std::ostream& out) const {
    detail::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(sizeof(Scalar)));
    detail::write_pod<std::int32_t>(out, state_dim_);
    detail::write_mlp(out, policy_.net);
    detail::write_mlp(out, q1_);
    detail::write_mlp(out, q2_);
    detail::write_mlp(out, q1_targ_);
    detail::write_mlp(out, q2_targ_);
    detail::write_adam(out, *opt_policy_);
    detail::write_adam(out, *opt_q1_);
    detail::write_adam(out, *opt_q2_);
    detail::write_pod<double>(out, l_alpha_);
    std::ostringstream rng_state;
    rng_state << rng_;
    detail::write_string(out, rng_state.str());
}

template <typename Scalar>
void SacAgent<Scalar>::deserialize(std::istream& in) {
    if (detail::read_pod<std::uint32_t>(in) != sizeof(Scalar))
        throw std::runtime_error("checkpoint: scalar width mismatch");
    if (detail::read_pod<std::int32_t>(in) != state_dim_)
        throw std::runtime_error("checkpoint: state dimension mismatch");
    detail::read_mlp(in, policy_.net);
    detail::read_mlp(in, q1_);
    detail::read_mlp(in, q2_);
    detail::read_mlp(in, q1_targ_);
    detail::read_mlp(in, q2_targ_);
    detail::read_adam(in, *opt_policy_);
    detail::read_adam(in, *opt_q1_);
    detail::read_adam(in, *opt_q2_);
    l_alpha_ = detail::read_pod<double>(in);
    std::istringstream rng_state(detail::read_string(in));
    rng_state >> rng_;
    if (rng_state.fail()) throw std::runtime_error("checkpoint: bad RNG state");
}

}  // namespace dicke::sac
