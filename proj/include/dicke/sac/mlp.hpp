// mlp.hpp — Fully-connected ReLU networks with hand-rolled backprop and Adam
//
// Batches are stored column-wise (one sample per column). Templated on the
// scalar so training can run in float while gradient checks instantiate
// double on the identical code path.

#pragma once

#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace dicke::sac {

template <typename Scalar>
struct Mlp {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    struct Layer {
        Mat w;  // out × in
        Vec b;
    };

    // ReLU after every layer except the last (linear output).
    std::vector<Layer> layers;

    int in_dim() const { return static_cast<int>(layers.front().w.cols()); }
    int out_dim() const { return static_cast<int>(layers.back().w.rows()); }

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += static_cast<std::size_t>(l.w.size() + l.b.size());
        return n;
    }

    // Uniform fan-in init U(±1/√fan_in) on weights and biases; the final
    // layer is additionally scaled by out_scale.
    static Mlp create(const std::vector<int>& dims, std::mt19937_64& rng, double out_scale = 1.0) {
        if (dims.size() < 2) throw std::invalid_argument("Mlp: need at least in and out dims");
        Mlp net;
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
            const double bound = 1.0 / std::sqrt(static_cast<double>(dims[i]));
            const double scale = (i + 2 == dims.size()) ? bound * out_scale : bound;
            Layer l;
            l.w.resize(dims[i + 1], dims[i]);
            l.b.resize(dims[i + 1]);
            for (Eigen::Index c = 0; c < l.w.cols(); ++c)
                for (Eigen::Index r = 0; r < l.w.rows(); ++r)
                    l.w(r, c) = static_cast<Scalar>(unit(rng) * scale);
            for (Eigen::Index r = 0; r < l.b.size(); ++r)
                l.b(r) = static_cast<Scalar>(unit(rng) * scale);
            net.layers.push_back(std::move(l));
        }
        return net;
    }

    // acts[0] is the input, acts[i] the output of layer i (post-ReLU except last).
    struct Workspace {
        std::vector<Mat> acts;
    };

    struct Grads {
        std::vector<Mat> dw;
        std::vector<Vec> db;

        static Grads zero_like(const Mlp& net) {
            Grads g;
            for (const auto& l : net.layers) {
                g.dw.push_back(Mat::Zero(l.w.rows(), l.w.cols()));
                g.db.push_back(Vec::Zero(l.b.size()));
            }
            return g;
        }
    };

    const Mat& forward(const Mat& x, Workspace& ws) const {
        ws.acts.resize(layers.size() + 1);
        ws.acts[0] = x;
        for (std::size_t i = 0; i < layers.size(); ++i) {
            ws.acts[i + 1].noalias() = layers[i].w * ws.acts[i];
            ws.acts[i + 1].colwise() += layers[i].b;
            if (i + 1 < layers.size()) ws.acts[i + 1] = ws.acts[i + 1].cwiseMax(Scalar(0));
        }
        return ws.acts.back();
    }

    Mat forward(const Mat& x) const {
        Workspace ws;
        return forward(x, ws);
    }

    // Fills g (overwriting) and returns dL/dX. dy is out_dim × batch.
    Mat backward(const Mat& dy, const Workspace& ws, Grads& g) const {
        g.dw.resize(layers.size());
        g.db.resize(layers.size());
        Mat delta = dy;
        for (std::size_t i = layers.size(); i-- > 0;) {
            if (i + 1 < layers.size())  // undo ReLU of layer i's output
                delta = delta.cwiseProduct((ws.acts[i + 1].array() > Scalar(0)).template cast<Scalar>().matrix());
            g.dw[i].noalias() = delta * ws.acts[i].transpose();
            g.db[i] = delta.rowwise().sum();
            if (i > 0)
                delta = (layers[i].w.transpose() * delta).eval();
            else
                return layers[0].w.transpose() * delta;
        }
        return Mat();  // unreachable for nonempty nets
    }

    // dL/dX only; parameter gradients are not formed (critic input grads in
    // the actor step).
    Mat backward_input(const Mat& dy, const Workspace& ws) const {
        Mat delta = dy;
        for (std::size_t i = layers.size(); i-- > 0;) {
            if (i + 1 < layers.size())
                delta = delta.cwiseProduct((ws.acts[i + 1].array() > Scalar(0)).template cast<Scalar>().matrix());
            delta = (layers[i].w.transpose() * delta).eval();
        }
        return delta;
    }
};

// φ_targ ← ρ φ_targ + (1−ρ) φ, elementwise. Shapes must match.
template <typename Scalar>
void polyak_update(Mlp<Scalar>& target, const Mlp<Scalar>& online, double rho) {
    if (target.layers.size() != online.layers.size())
        throw std::invalid_argument("polyak_update: layer count mismatch");
    const auto r = static_cast<Scalar>(rho);
    for (std::size_t i = 0; i < target.layers.size(); ++i) {
        auto& t = target.layers[i];
        const auto& o = online.layers[i];
        if (t.w.rows() != o.w.rows() || t.w.cols() != o.w.cols())
            throw std::invalid_argument("polyak_update: shape mismatch");
        t.w = r * t.w + (Scalar(1) - r) * o.w;
        t.b = r * t.b + (Scalar(1) - r) * o.b;
    }
}

// Adaptive-moment optimizer, standard bias-corrected form
// (β₁ = 0.9, β₂ = 0.999, ε = 1e−8).
template <typename Scalar>
struct Adam {
    double lr;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long t = 0;
    std::vector<typename Mlp<Scalar>::Mat> mw, vw;
    std::vector<typename Mlp<Scalar>::Vec> mb, vb;

    Adam(const Mlp<Scalar>& net, double learning_rate) : lr(learning_rate) {
        for (const auto& l : net.layers) {
            mw.push_back(Mlp<Scalar>::Mat::Zero(l.w.rows(), l.w.cols()));
            vw.push_back(Mlp<Scalar>::Mat::Zero(l.w.rows(), l.w.cols()));
            mb.push_back(Mlp<Scalar>::Vec::Zero(l.b.size()));
            vb.push_back(Mlp<Scalar>::Vec::Zero(l.b.size()));
        }
    }

    void step(Mlp<Scalar>& net, const typename Mlp<Scalar>::Grads& g) {
        ++t;
        const Scalar b1 = static_cast<Scalar>(beta1);
        const Scalar b2 = static_cast<Scalar>(beta2);
        const Scalar corr1 = static_cast<Scalar>(1.0 - std::pow(beta1, t));
        const Scalar corr2 = static_cast<Scalar>(1.0 - std::pow(beta2, t));
        const Scalar step_size = static_cast<Scalar>(lr);
        const Scalar e = static_cast<Scalar>(eps);
        for (std::size_t i = 0; i < net.layers.size(); ++i) {
            mw[i] = b1 * mw[i] + (Scalar(1) - b1) * g.dw[i];
            vw[i] = b2 * vw[i] + (Scalar(1) - b2) * g.dw[i].cwiseProduct(g.dw[i]);
            net.layers[i].w.array() -=
                step_size * (mw[i].array() / corr1) / ((vw[i].array() / corr2).sqrt() + e);
            mb[i] = b1 * mb[i] + (Scalar(1) - b1) * g.db[i];
            vb[i] = b2 * vb[i] + (Scalar(1) - b2) * g.db[i].cwiseProduct(g.db[i]);
            net.layers[i].b.array() -=
                step_size * (mb[i].array() / corr1) / ((vb[i].array() / corr2).sqrt() + e);
        }
    }
};

}  // namespace dicke::sac
