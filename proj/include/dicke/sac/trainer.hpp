// trainer.hpp — The training schedule of the soft actor-critic agent
//
// Uniform random actions for the first n_init_rand steps, no parameter
// updates for the first n_init_no_update steps, then n_updates grouped
// updates every n_updates env steps so updates and actions stay 1:1.
// Whole episodes run until the global step count reaches total_steps.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "dicke/sac/agent.hpp"
#include "dicke/sac/env.hpp"
#include "dicke/sac/replay.hpp"

namespace dicke::sac {

struct EpisodeLog {
    long episode = 0;
    std::uint64_t global_step = 0;
    double episode_return = 0.0;  // raw reward sum (γ = 1 accounting)
    double q_loss = 0.0;          // mean of the two critic losses at the last update
    double actor_loss = 0.0;
    double alpha = 0.0;
    double target_entropy = 0.0;
    double entropy = 0.0;  // batch estimate of E[−log π]
};

template <typename Scalar>
class Trainer {
public:
    // shared_step, when given, is the env-visible global step counter; the
    // trainer increments it so reward blending and entropy scheduling see the
    // same clock.
    Trainer(Environment& env, const SacConfig& cfg, std::uint64_t seed,
            std::uint64_t* shared_step = nullptr)
        : env_(env), cfg_(cfg),
          agent_(env.state_dim(), env.action_bound(), cfg, seed),
          buffer_(env.state_dim(), cfg.buffer_capacity),
          step_(shared_step ? shared_step : &own_step_) {
        cfg_.validate();
    }

    // Runs episodes until *step >= total_steps. Deterministic given the seed.
    void run() {
        while (*step_ < static_cast<std::uint64_t>(cfg_.total_steps)) run_episode();
    }

    void run_episode() {
        Eigen::VectorXd s = env_.reset();
        EpisodeLog log;
        log.episode = episode_count_;
        bool done = false;
        while (!done) {
            const double a = (*step_ < static_cast<std::uint64_t>(cfg_.n_init_rand))
                                 ? agent_.uniform_action()
                                 : agent_.sample_action(s);
            StepOutcome outcome = env_.step(a);
            buffer_.add(s.template cast<Scalar>(), static_cast<Scalar>(a),
                        static_cast<Scalar>(outcome.reward),
                        outcome.state.template cast<Scalar>(), outcome.done);
            ++*step_;
            log.episode_return += outcome.reward;
            done = outcome.done;
            s = std::move(outcome.state);

            const bool warm = *step_ > static_cast<std::uint64_t>(cfg_.n_init_no_update) &&
                              buffer_.size() >= cfg_.batch_size;
            if (warm && *step_ % static_cast<std::uint64_t>(cfg_.n_updates) == 0) {
                const double h_target = entropy_target(cfg_, static_cast<double>(*step_));
                typename SacAgent<Scalar>::UpdateInfo info;
                for (int k = 0; k < cfg_.n_updates; ++k)
                    info = agent_.update(buffer_.sample(cfg_.batch_size, agent_.rng()), h_target);
                log.q_loss = 0.5 * (info.q1_loss + info.q2_loss);
                log.actor_loss = info.actor_loss;
                log.entropy = info.entropy;
                ++update_blocks_;
            }
        }
        log.global_step = *step_;
        log.alpha = agent_.alpha();
        log.target_entropy = entropy_target(cfg_, static_cast<double>(*step_));
        log_.push_back(log);
        ++episode_count_;
    }

    SacAgent<Scalar>& agent() { return agent_; }
    const SacAgent<Scalar>& agent() const { return agent_; }
    ReplayBuffer<Scalar>& buffer() { return buffer_; }
    const std::vector<EpisodeLog>& log() const { return log_; }
    std::uint64_t global_step() const { return *step_; }
    long episode_count() const { return episode_count_; }
    long update_blocks() const { return update_blocks_; }

    // Checkpoint: all parameter arrays, optimizer moments, l_α, RNG state and
    // step counters. The replay buffer is NOT stored; a resumed run therefore
    // reproduces the loss trajectory bit-identically only once fed the same
    // buffer contents (stated in the file header).
    void save_checkpoint(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("checkpoint: cannot open " + path.string());
        out.write(kMagic, 8);
        detail::write_string(out,
                             "dicke sac checkpoint v1. Replay buffer excluded: resumed training "
                             "matches the original loss trajectory bit-for-bit only modulo buffer "
                             "contents.");
        agent_.serialize(out);
        detail::write_pod<std::uint64_t>(out, *step_);
        detail::write_pod<std::int64_t>(out, episode_count_);
        detail::write_pod<std::int64_t>(out, update_blocks_);
        if (!out.good()) throw std::runtime_error("checkpoint: write failed");
    }

    void load_checkpoint(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
        char magic[8];
        in.read(magic, 8);
        if (!in || std::string(magic, 8) != kMagic)
            throw std::runtime_error("checkpoint: bad magic in " + path.string());
        (void)detail::read_string(in);  // header note
        agent_.deserialize(in);
        *step_ = detail::read_pod<std::uint64_t>(in);
        episode_count_ = detail::read_pod<std::int64_t>(in);
        update_blocks_ = detail::read_pod<std::int64_t>(in);
    }

private:
    static constexpr const char kMagic[9] = "DSACCKP1";

    Environment& env_;
    SacConfig cfg_;
    SacAgent<Scalar> agent_;
    ReplayBuffer<Scalar> buffer_;
    std::uint64_t own_step_ = 0;
    std::uint64_t* step_;
    long episode_count_ = 0;
    long update_blocks_ = 0;
    std::vector<EpisodeLog> log_;
};

template <typename Scalar>
struct TrainResult {
    SquashedGaussianPolicy<Scalar> policy;
    std::vector<EpisodeLog> log;
    std::uint64_t steps = 0;
};

// Convenience wrapper: fresh agent, full schedule, returns the trained policy
// and the per-episode log.
template <typename Scalar>
TrainResult<Scalar> train(Environment& env, const SacConfig& cfg, std::uint64_t seed,
                          std::uint64_t* shared_step = nullptr) {
    Trainer<Scalar> trainer(env, cfg, seed, shared_step);
    trainer.run();
    return TrainResult<Scalar>{trainer.agent().policy(), trainer.log(), trainer.global_step()};
}

}  // namespace dicke::sac
