#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "synth/core/error.hpp"

namespace synth::diversity {

// Fewer than four points, or a distance matrix with no variation at all:
// there is no meaningful layout to compute.
class DegenerateInput : public DomainError {
  public:
    using DomainError::DomainError;
};

// The optimization produced non-finite coordinates; the message names the
// iteration.
class NumericalFailure : public Error {
  public:
    using Error::Error;
};

struct TsneConfig {
    double perplexity = 30.0;  // clamped to (n-1)/3 for small inputs
    int iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    int exaggeration_iters = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    int momentum_switch_iter = 250;
    std::uint64_t seed = 0;
};

struct TsneResult {
    std::vector<std::array<double, 2>> points;
    double final_kl = 0.0;
    std::vector<double> kl_history;     // recorded every 50 iterations, then final
    std::vector<double> entropies_bits; // per-point conditional entropy after calibration
    double p_sum = 0.0;                 // sum of the symmetrized joint distribution
    double clamped_perplexity = 0.0;    // effective perplexity used
};

// Exact (non-approximated) t-SNE to two dimensions: per-point bandwidths are
// binary-searched so every conditional distribution's entropy matches
// log2(perplexity), the joint P is symmetrized to sum to one, and the layout
// descends the KL divergence with momentum, adaptive per-coordinate gains,
// and early exaggeration. Deterministic for a fixed seed.
TsneResult tsne(const std::vector<std::vector<double>>& data, const TsneConfig& config = {});

}  // namespace synth::diversity
