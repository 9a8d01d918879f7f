// protocol.hpp — Piecewise-constant charging protocols and their JSON format

#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke {

/// A time grid Δt plus the coupling value applied on each segment.
/// Invariant: every |λ_i| ≤ lambda_max, dt > 0.
struct Protocol {
    double dt = 0.0;
    double lambda_max = 0.0;
    double omega0 = 1.0;  // carried so the file is self-describing in physical units
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double duration() const { return dt * static_cast<double>(values.size()); }

    // Throws std::invalid_argument / ControlOutOfRange on violated invariants.
    void validate() const;
};

// λ(t) = lambda_max on [0, τ]. τ must be k·dt to 1e−9 relative (GridMismatch).
Protocol on_off(double tau, double dt, double lambda_max, double omega0 = 1.0);

// JSON object {omega0, lambda_max, dt, values[]}, numbers at 17 significant
// digits so a save/load round trip is bitwise lossless. Writes atomically.
void save(const Protocol& protocol, const std::filesystem::path& path);

// Parses and validates; rejects non-finite entries and |λ| > lambda_max.
Protocol load(const std::filesystem::path& path);

}  // namespace dicke
