// replay.hpp — Fixed-capacity FIFO replay buffer with batch sampling

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace dicke::sac {

/// One observed transition (s, a, r, s', done).
template <typename Scalar>
struct Transition {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s, s_next;
    Scalar a = 0, r = 0;
    bool done = false;
};

/// Ring buffer over flat column storage; eviction is strictly FIFO and a
/// sampled batch never repeats an index.
template <typename Scalar>
class ReplayBuffer {
public:
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    ReplayBuffer(int state_dim, int capacity)
        : state_dim_(state_dim), capacity_(capacity),
          s_(state_dim, capacity), s_next_(state_dim, capacity),
          a_(capacity), r_(capacity), done_(capacity, 0) {
        if (state_dim < 1 || capacity < 1)
            throw std::invalid_argument("ReplayBuffer: bad dimensions");
    }

    int size() const { return size_; }
    int capacity() const { return capacity_; }
    std::int64_t total_added() const { return total_; }

    void add(const Vec& s, Scalar a, Scalar r, const Vec& s_next, bool done) {
        s_.col(head_) = s;
        s_next_.col(head_) = s_next;
        a_(head_) = a;
        r_(head_) = r;
        done_[static_cast<std::size_t>(head_)] = done ? 1 : 0;
        head_ = (head_ + 1) % capacity_;
        size_ = std::min(size_ + 1, capacity_);
        ++total_;
    }

    struct Batch {
        Mat s, s_next;
        Vec a, r;
        std::vector<std::uint8_t> done;
        int size() const { return static_cast<int>(done.size()); }
    };

    // Uniform sampling without replacement (Floyd's algorithm), deterministic
    // given the generator state.
    Batch sample(int batch_size, std::mt19937_64& rng) const {
        if (batch_size < 1 || batch_size > size_)
            throw std::invalid_argument("ReplayBuffer: batch size exceeds stored transitions");
        std::vector<int> picked;
        picked.reserve(static_cast<std::size_t>(batch_size));
        for (int j = size_ - batch_size; j < size_; ++j) {
            std::uniform_int_distribution<int> uniform(0, j);
            const int t = uniform(rng);
            if (std::find(picked.begin(), picked.end(), t) == picked.end())
                picked.push_back(t);
            else
                picked.push_back(j);
        }
        Batch b;
        b.s.resize(state_dim_, batch_size);
        b.s_next.resize(state_dim_, batch_size);
        b.a.resize(batch_size);
        b.r.resize(batch_size);
        b.done.resize(static_cast<std::size_t>(batch_size));
        for (int k = 0; k < batch_size; ++k) {
            const int idx = picked[static_cast<std::size_t>(k)];
            b.s.col(k) = s_.col(idx);
            b.s_next.col(k) = s_next_.col(idx);
            b.a(k) = a_(idx);
            b.r(k) = r_(idx);
            b.done[static_cast<std::size_t>(k)] = done_[static_cast<std::size_t>(idx)];
        }
        return b;
    }

private:
    int state_dim_;
    int capacity_;
    Mat s_, s_next_;
    Vec a_, r_;
    std::vector<std::uint8_t> done_;
    int head_ = 0;
    int size_ = 0;
    std::int64_t total_ = 0;
};

}  // namespace dicke::sac
