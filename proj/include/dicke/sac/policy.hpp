// policy.hpp — Squashed-Gaussian policy head
//
// The network outputs (μ, m); the Gaussian width is σ = m² + 1e−7, kept
// positive structurally. An action is ã = c + h·tanh(μ + σξ) with ξ ~ N(0,1),
// c the interval center and h its half-width (the reparameterization trick).
//
// Log-densities are computed in the "reference interval" convention: as if
// the policy emitted values in [−1, 1], i.e. without the −log h change-of-
// variables constant. That is the form entering every loss; the true density
// differs by exactly −log h.

#pragma once

#include <cmath>
#include <limits>

#include "dicke/sac/mlp.hpp"

namespace dicke::sac {

template <typename Scalar>
Scalar softplus(Scalar z) {
    // log(1 + e^z) without overflow on either side
    if (z > Scalar(0)) return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

// log(1 − tanh²u) = 2(ln 2 − u − softplus(−2u)), stable for large |u|.
template <typename Scalar>
Scalar log_one_minus_tanh_sq(Scalar u) {
    return Scalar(2) * (Scalar(M_LN2) - u - softplus(Scalar(-2) * u));
}

// Reference-interval log-density of the squashed sample at u = μ + σξ:
// Gaussian log-density of u minus the tanh Jacobian.
template <typename Scalar>
Scalar log_prob_ref(Scalar u, Scalar sigma, Scalar xi) {
    const Scalar half_log_2pi = Scalar(0.9189385332046727);
    return Scalar(-0.5) * xi * xi - std::log(sigma) - half_log_2pi - log_one_minus_tanh_sq(u);
}

template <typename Scalar>
struct SquashedGaussianPolicy {
    using Mat = typename Mlp<Scalar>::Mat;
    using Vec = typename Mlp<Scalar>::Vec;

    static constexpr Scalar kSigmaFloor = Scalar(1e-7);

    Mlp<Scalar> net;  // state_dim → hidden → 2: row 0 = μ, row 1 = m
    Scalar a_lo = Scalar(-1);
    Scalar a_hi = Scalar(1);

    Scalar half() const { return (a_hi - a_lo) / Scalar(2); }
    Scalar center() const { return (a_hi + a_lo) / Scalar(2); }
    // additive shift between the reference-interval log-density and the true one
    Scalar log_half() const { return std::log(half()); }

    static Scalar sigma_from_m(Scalar m) { return m * m + kSigmaFloor; }

    // tanh kept strictly inside (−1, 1) so sampled actions stay in the open interval
    static Scalar squash(Scalar u) {
        const Scalar t = std::tanh(u);
        const Scalar lim = Scalar(1) - std::numeric_limits<Scalar>::epsilon();
        return t > lim ? lim : (t < -lim ? -lim : t);
    }

    struct Sample {
        Scalar action;
        Scalar u;
        Scalar mu;
        Scalar sigma;
        Scalar log_prob_ref;  // reference-interval convention
    };

    Sample sample(const Vec& state, Scalar xi) const {
        const Vec head = net.forward(state);
        Sample s;
        s.mu = head(0);
        s.sigma = sigma_from_m(head(1));
        s.u = s.mu + s.sigma * xi;
        s.action = center() + half() * squash(s.u);
        s.log_prob_ref = sac::log_prob_ref(s.u, s.sigma, xi);
        return s;
    }

    // true log-density of the sample (includes the interval half-width)
    Scalar log_prob_true(const Sample& s) const { return s.log_prob_ref - log_half(); }

    // Deterministic evaluation action: tanh of the mean, no sampling.
    Scalar mean_action(const Vec& state) const {
        const Vec head = net.forward(state);
        return center() + half() * std::tanh(head(0));
    }
};

}  // namespace dicke::sac
