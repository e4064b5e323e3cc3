#pragma once

#include <cstdint>
#include <vector>

#include "synth/core/types.hpp"
#include "synth/ingest/ingest.hpp"

namespace synth::sampler {

// Counter-based, splittable random stream.  Draw k on stream s is a pure
// function of (seed, s, k), so patient #7 sees the same randomness whether
// the batch runs sequentially or across threads, and regardless of how many
// draws other streams consumed.
class SeedState {
  public:
    SeedState(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

    // Fresh stream derived from this one; child i of stream s is disjoint
    // from child j != i and from the parent.
    SeedState split(std::uint64_t child_id) const;

    std::uint64_t next_u64();
    double next_double();                       // uniform in [0, 1)
    int uniform_int(int lo, int hi);            // inclusive bounds
    double uniform_real(double lo, double hi);  // [lo, hi)
    double normal();                            // standard normal

    // Inverse-CDF draw over the distribution's declared category order.
    std::size_t categorical(const ingest::Categorical& dist);

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

// Draws every demographic attribute in a fixed order (age first, insurance
// last) so the mapping from seed to profile never shifts when priors gain or
// lose attributes.  Age priors are banded ("45-59"); the age itself is
// uniform within the sampled band.
Demographics sample_demographics(const ingest::PriorTable& priors, SeedState& rng);

ComorbidityGroup assign_comorbidity(const ingest::PriorTable& priors, SeedState& rng);

// Obesity class from the group-conditioned prior, then a concrete BMI
// uniform within the class range (Class III is capped at 60.0).
BmiClass sample_bmi(const ingest::PriorTable& priors, ComorbidityGroup group, SeedState& rng);

// Seeded uniform subsample without replacement; returned indices are sorted
// ascending.  k > population is a precondition violation.
std::vector<std::size_t> subsample_indices(std::size_t population, std::size_t k, SeedState& rng);

}  // namespace synth::sampler
