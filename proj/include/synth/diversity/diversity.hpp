#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synth/core/error.hpp"
#include "synth/core/profile.hpp"

namespace synth::diversity {

// Text -> unit-norm vector. The pipeline embeds the clinical core of each
// profile (everything except demographics) so cohort geometry reflects
// clinical content, not census fields.
class EmbeddingClient {
  public:
    virtual ~EmbeddingClient() = default;

    virtual std::vector<double> embed(const std::string& text) = 0;
    virtual std::size_t dimension() const = 0;
};

// Deterministic local embedder: signed feature hashing of word unigrams and
// bigrams into a fixed-width vector, L2-normalized. Not semantically deep,
// but byte-stable across runs and platforms, which is what the offline
// analytics need.
class FeatureHashEmbedder : public EmbeddingClient {
  public:
    explicit FeatureHashEmbedder(std::size_t dimension = 768, std::uint64_t seed = 0);

    std::vector<double> embed(const std::string& text) override;
    std::size_t dimension() const override { return dimension_; }

  private:
    std::size_t dimension_;
    std::string salt_;
};

std::vector<double> embed_profile(const PatientProfile& profile, EmbeddingClient& client);

// Mean Euclidean distance from each embedding to the cohort centroid.
// A single-member cohort scores 0; an empty one is a precondition violation.
double diversity_score(const std::vector<std::vector<double>>& embeddings);

struct CrossCohortStats {
    double mean_cosine = 0.0;     // mean pairwise cosine similarity
    double mean_euclidean = 0.0;  // mean pairwise Euclidean distance
};

// Averages over all cross pairs (one from each cohort).
CrossCohortStats cross_cohort(const std::vector<std::vector<double>>& a,
                              const std::vector<std::vector<double>>& b);

// Shared vector helpers (exposed for the oracle tests).
double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b);
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace synth::diversity
