#include "synth/diversity/diversity.hpp"

#include <cctype>
#include <cmath>

#include "synth/core/serialize.hpp"
#include "synth/util/digest.hpp"

namespace synth::diversity {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc) != 0) {
            current += static_cast<char>(std::tolower(uc));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

void check_dimensions(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw DomainError("embedding dimensions differ: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
    }
}

}  // namespace

FeatureHashEmbedder::FeatureHashEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), salt_("\x1f" + std::to_string(seed)) {
    if (dimension_ == 0) {
        throw DomainError("embedding dimension must be positive");
    }
}

std::vector<double> FeatureHashEmbedder::embed(const std::string& text) {
    std::vector<double> vec(dimension_, 0.0);
    const std::vector<std::string> tokens = tokenize(text);
    auto accumulate = [&](const std::string& feature) {
        const std::uint64_t h = util::sha256_seed(feature + salt_);
        const std::size_t index = static_cast<std::size_t>(h % dimension_);
        // Signed hashing keeps the expected dot product of unrelated texts
        // near zero instead of systematically positive.
        vec[index] += ((h >> 63) != 0) ? -1.0 : 1.0;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        accumulate(tokens[i]);
        if (i + 1 < tokens.size()) accumulate(tokens[i] + " " + tokens[i + 1]);
    }
    double norm_sq = 0.0;
    for (const double v : vec) norm_sq += v * v;
    if (norm_sq == 0.0) {
        throw DomainError("cannot embed text with no tokens");
    }
    const double norm = std::sqrt(norm_sq);
    for (double& v : vec) v /= norm;
    return vec;
}

std::vector<double> embed_profile(const PatientProfile& profile, EmbeddingClient& client) {
    return client.embed(clinical_core_text(profile));
}

double euclidean_distance(const std::vector<double>& a, const std::vector<double>& b) {
    check_dimensions(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    check_dimensions(a, b);
    double dot = 0.0;
    double norm_a = 0.0;
    double norm_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        norm_a += a[i] * a[i];
        norm_b += b[i] * b[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) {
        throw DomainError("cosine similarity is undefined for a zero vector");
    }
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

double diversity_score(const std::vector<std::vector<double>>& embeddings) {
    if (embeddings.empty()) {
        throw DomainError("diversity score requires at least one embedding");
    }
    const std::size_t dim = embeddings.front().size();
    std::vector<double> centroid(dim, 0.0);
    for (const std::vector<double>& e : embeddings) {
        check_dimensions(embeddings.front(), e);
        for (std::size_t i = 0; i < dim; ++i) centroid[i] += e[i];
    }
    for (double& c : centroid) c /= static_cast<double>(embeddings.size());
    double total = 0.0;
    for (const std::vector<double>& e : embeddings) total += euclidean_distance(e, centroid);
    return total / static_cast<double>(embeddings.size());
}

CrossCohortStats cross_cohort(const std::vector<std::vector<double>>& a,
                              const std::vector<std::vector<double>>& b) {
    if (a.empty() || b.empty()) {
        throw DomainError("cross-cohort comparison requires two non-empty cohorts");
    }
    CrossCohortStats stats;
    for (const std::vector<double>& ea : a) {
        for (const std::vector<double>& eb : b) {
            stats.mean_cosine += cosine_similarity(ea, eb);
            stats.mean_euclidean += euclidean_distance(ea, eb);
        }
    }
    const double pairs = static_cast<double>(a.size()) * static_cast<double>(b.size());
    stats.mean_cosine /= pairs;
    stats.mean_euclidean /= pairs;
    return stats;
}

}  // namespace synth::diversity
