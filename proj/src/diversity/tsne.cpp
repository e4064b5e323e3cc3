#include "synth/diversity/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "synth/sampler/sampler.hpp"

namespace synth::diversity {

namespace {

constexpr double kLog2 = 0.6931471805599453;  // ln 2
constexpr double kProbFloor = 1e-12;

// Conditional distribution p_{j|i} for one row at the given precision
// beta = 1 / (2 sigma^2). Returns the Shannon entropy in bits.
double row_entropy_bits(const std::vector<double>& sq_dists, std::size_t self, double beta,
                        std::vector<double>* row) {
    double z = 0.0;
    double weighted = 0.0;
    for (std::size_t j = 0; j < sq_dists.size(); ++j) {
        if (j == self) {
            (*row)[j] = 0.0;
            continue;
        }
        const double p = std::exp(-beta * sq_dists[j]);
        (*row)[j] = p;
        z += p;
        weighted += p * sq_dists[j];
    }
    if (z <= 0.0 || !std::isfinite(z)) {
        // All mass underflowed; the caller's bisection will lower beta.
        return -std::numeric_limits<double>::infinity();
    }
    for (std::size_t j = 0; j < sq_dists.size(); ++j) (*row)[j] /= z;
    // H = ln Z + beta * E[d^2], in nats; report bits.
    const double entropy_nats = std::log(z) + beta * weighted / z;
    return entropy_nats / kLog2;
}

}  // namespace

TsneResult tsne(const std::vector<std::vector<double>>& data, const TsneConfig& config) {
    const std::size_t n = data.size();
    if (n < 4) {
        throw DegenerateInput("t-SNE needs at least 4 points, got " + std::to_string(n));
    }
    const std::size_t dim = data.front().size();
    for (const std::vector<double>& row : data) {
        if (row.size() != dim) {
            throw DomainError("t-SNE input rows have inconsistent dimensions");
        }
    }
    if (config.iterations < 1 || config.perplexity <= 1.0 || config.learning_rate <= 0.0) {
        throw ConfigError("t-SNE config requires iterations >= 1, perplexity > 1, "
                          "positive learning rate");
    }

    // Pairwise squared Euclidean distances in the input space.
    std::vector<std::vector<double>> sq(n, std::vector<double>(n, 0.0));
    double max_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = data[i][d] - data[j][d];
                sum += diff * diff;
            }
            sq[i][j] = sq[j][i] = sum;
            max_sq = std::max(max_sq, sum);
        }
    }
    if (max_sq == 0.0) {
        throw DegenerateInput("all t-SNE input points are identical");
    }

    TsneResult result;
    result.clamped_perplexity =
        std::min(config.perplexity, static_cast<double>(n - 1) / 3.0);
    const double target_bits = std::log2(result.clamped_perplexity);

    // Per-point bandwidth calibration: bisect beta until the conditional
    // entropy hits log2(perplexity).
    std::vector<std::vector<double>> conditional(n, std::vector<double>(n, 0.0));
    result.entropies_bits.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double beta = 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        double entropy = 0.0;
        for (int step = 0; step < 200; ++step) {
            entropy = row_entropy_bits(sq[i], i, beta, &conditional[i]);
            const double diff = entropy - target_bits;
            if (std::isfinite(diff) && std::abs(diff) < 1e-7) break;
            if (diff > 0.0) {  // distribution too spread out -> sharpen
                lo = beta;
                beta = std::isfinite(hi) ? (lo + hi) / 2.0 : beta * 2.0;
            } else {
                hi = beta;
                beta = (lo + hi) / 2.0;
            }
        }
        result.entropies_bits[i] = entropy;
    }

    // Symmetrized joint distribution, summing to 1 by construction.
    std::vector<std::vector<double>> joint(n, std::vector<double>(n, 0.0));
    result.p_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            joint[i][j] = (conditional[i][j] + conditional[j][i]) / (2.0 * static_cast<double>(n));
            result.p_sum += joint[i][j];
        }
    }

    // Tiny seeded Gaussian start.
    sampler::SeedState rng(config.seed, 0);
    std::vector<std::array<double, 2>> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i][0] = rng.normal() * 1e-4;
        y[i][1] = rng.normal() * 1e-4;
    }
    std::vector<std::array<double, 2>> velocity(n, {0.0, 0.0});
    std::vector<std::array<double, 2>> gains(n, {1.0, 1.0});

    std::vector<std::vector<double>> q_num(n, std::vector<double>(n, 0.0));
    std::vector<std::array<double, 2>> grad(n);

    for (int iter = 1; iter <= config.iterations; ++iter) {
        const double exaggeration = iter <= config.exaggeration_iters
                                        ? config.early_exaggeration
                                        : 1.0;
        const double momentum = iter <= config.momentum_switch_iter ? config.initial_momentum
                                                                    : config.final_momentum;

        // Student-t kernel in the embedding.
        double q_total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            q_num[i][i] = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = y[i][0] - y[j][0];
                const double dy = y[i][1] - y[j][1];
                const double value = 1.0 / (1.0 + dx * dx + dy * dy);
                q_num[i][j] = q_num[j][i] = value;
                q_total += 2.0 * value;
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            grad[i] = {0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double q_ij = std::max(q_num[i][j] / q_total, kProbFloor);
                const double mult = (exaggeration * joint[i][j] - q_ij) * q_num[i][j];
                grad[i][0] += 4.0 * mult * (y[i][0] - y[j][0]);
                grad[i][1] += 4.0 * mult * (y[i][1] - y[j][1]);
            }
        }

        double mean_x = 0.0;
        double mean_y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (int d = 0; d < 2; ++d) {
                const bool same_sign = (grad[i][d] > 0.0) == (velocity[i][d] > 0.0);
                gains[i][d] = same_sign ? std::max(gains[i][d] * 0.8, 0.01) : gains[i][d] + 0.2;
                velocity[i][d] =
                    momentum * velocity[i][d] - config.learning_rate * gains[i][d] * grad[i][d];
                y[i][d] += velocity[i][d];
            }
            mean_x += y[i][0];
            mean_y += y[i][1];
        }
        mean_x /= static_cast<double>(n);
        mean_y /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i][0] -= mean_x;
            y[i][1] -= mean_y;
            if (!std::isfinite(y[i][0]) || !std::isfinite(y[i][1])) {
                throw NumericalFailure("t-SNE diverged at iteration " + std::to_string(iter) +
                                       ": non-finite coordinates");
            }
        }

        if (iter % 50 == 0 || iter == config.iterations) {
            double kl = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    const double p = std::max(joint[i][j], kProbFloor);
                    const double q = std::max(q_num[i][j] / q_total, kProbFloor);
                    kl += p * std::log(p / q);
                }
            }
            result.kl_history.push_back(kl);
            result.final_kl = kl;
        }
    }

    result.points = std::move(y);
    return result;
}

}  // namespace synth::diversity
