#include "synth/sampler/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "synth/core/error.hpp"
#include "synth/util/strings.hpp"

namespace synth::sampler {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer: a strong 64-bit mix, bijective on uint64.
std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

SeedState::SeedState(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id), base_(mix(seed ^ mix(stream_id + kGolden))) {}

SeedState SeedState::split(std::uint64_t child_id) const {
    // Children key off the mixed parent base, so (seed, s).split(i) and
    // (seed, s').split(i) land in unrelated regions of the counter space.
    return SeedState(base_, child_id);
}

std::uint64_t SeedState::next_u64() {
    ++counter_;
    return mix(base_ + kGolden * counter_);
}

double SeedState::next_double() {
    // 53 high bits -> [0, 1) with full double precision.
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int SeedState::uniform_int(int lo, int hi) {
    if (lo > hi) throw DomainError("uniform_int: lo > hi");
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return static_cast<int>(lo + static_cast<std::int64_t>(next_u64() % span));
}

double SeedState::uniform_real(double lo, double hi) {
    if (!(lo <= hi)) throw DomainError("uniform_real: lo > hi");
    return lo + next_double() * (hi - lo);
}

double SeedState::normal() {
    // Box-Muller without caching the second variate: exactly two counter
    // increments per call, which keeps draw positions reproducible.
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t SeedState::categorical(const ingest::Categorical& dist) {
    if (dist.entries.empty()) throw DomainError("categorical draw from an empty distribution");
    const double u = next_double();
    double cum = 0.0;
    for (std::size_t i = 0; i < dist.entries.size(); ++i) {
        cum += dist.entries[i].second;
        if (u < cum) return i;
    }
    // Rounding slack (distributions sum to 1 within 1e-9) can leave u just
    // past the accumulated mass; the final category absorbs it.
    return dist.entries.size() - 1;
}

namespace {

// Attribute sampling order is part of the reproducibility contract.
constexpr std::array<const char*, 9> kDemographicOrder = {
    "age",    "sex",            "race",     "education", "occupation",
    "income", "marital_status", "location", "insurance",
};

const ingest::Categorical& prior_for(const ingest::PriorTable& priors, const std::string& attribute) {
    auto it = priors.demographic_priors.find(attribute);
    if (it == priors.demographic_priors.end()) {
        throw ConfigError("priors are missing the demographic attribute '" + attribute + "'");
    }
    return it->second;
}

std::pair<int, int> parse_age_band(const std::string& band) {
    const auto parts = util::split(band, '-');
    if (parts.size() == 2) {
        try {
            int lo = std::stoi(parts[0]);
            int hi = std::stoi(parts[1]);
            if (lo <= hi) return {lo, hi};
        } catch (const std::exception&) {
            // falls through to the ConfigError below
        }
    }
    throw ConfigError("malformed age band '" + band + "', expected \"lo-hi\"");
}

}  // namespace

Demographics sample_demographics(const ingest::PriorTable& priors, SeedState& rng) {
    Demographics demo;
    for (const char* attribute : kDemographicOrder) {
        const ingest::Categorical& dist = prior_for(priors, attribute);
        const std::string& category = dist.entries[rng.categorical(dist)].first;
        if (std::string_view(attribute) == "age") {
            auto [lo, hi] = parse_age_band(category);
            demo.age = rng.uniform_int(lo, hi);
        } else if (std::string_view(attribute) == "sex") {
            demo.sex = category;
        } else if (std::string_view(attribute) == "race") {
            demo.race = category;
        } else if (std::string_view(attribute) == "education") {
            demo.education = category;
        } else if (std::string_view(attribute) == "occupation") {
            demo.occupation = category;
        } else if (std::string_view(attribute) == "income") {
            demo.income = category;
        } else if (std::string_view(attribute) == "marital_status") {
            demo.marital_status = category;
        } else if (std::string_view(attribute) == "location") {
            demo.location = category;
        } else {
            demo.insurance = category;
        }
    }
    return demo;
}

ComorbidityGroup assign_comorbidity(const ingest::PriorTable& priors, SeedState& rng) {
    const ingest::Categorical& dist = priors.comorbidity_priors;
    if (dist.entries.empty()) throw ConfigError("priors have no comorbidity distribution");
    return comorbidity_from_string(dist.entries[rng.categorical(dist)].first);
}

BmiClass sample_bmi(const ingest::PriorTable& priors, ComorbidityGroup group, SeedState& rng) {
    const ingest::Categorical& dist = priors.bmi_prior_for(group);
    const BmiCategory category = bmi_category_from_string(dist.entries[rng.categorical(dist)].first);
    double lo = 30.0, hi = 34.9;
    if (category == BmiCategory::II) {
        lo = 35.0;
        hi = 39.9;
    } else if (category == BmiCategory::III) {
        lo = 40.0;
        hi = 59.9;
    }
    // One decimal place, sampled strictly inside the class so rounding can
    // never promote a value across a class boundary.
    const double bmi = std::round(rng.uniform_real(lo, hi) * 10.0) / 10.0;
    return BmiClass{category, bmi};
}

std::vector<std::size_t> subsample_indices(std::size_t population, std::size_t k, SeedState& rng) {
    if (k > population) {
        throw DomainError("subsample of " + std::to_string(k) + " from a population of " +
                          std::to_string(population));
    }
    std::vector<std::size_t> indices(population);
    for (std::size_t i = 0; i < population; ++i) indices[i] = i;
    // Partial Fisher-Yates: only the first k slots are decided.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (population - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    std::sort(indices.begin(), indices.end());
    return indices;
}

}  // namespace synth::sampler
