#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "windex/core.hpp"

namespace windex {

struct RandomizedConfig {
  double confidence = 2.0;  // c >= 1
  std::uint64_t seed = 0;
};

enum class SamplingMode { exact_threshold, approximate };

// k strings drawn from the product distribution of X, each property cut at
// the longest prefix whose probability stays >= the mode's threshold
// (1/z for exact_threshold, eps for approximate).
struct SampledFamily {
  SamplingMode mode = SamplingMode::exact_threshold;
  double parameter = 1.0;  // z or eps
  std::vector<Text> strings;
  std::vector<PropertyArray> properties;

  double threshold() const noexcept {
    return mode == SamplingMode::exact_threshold ? 1.0 / parameter : parameter;
  }
};

// Generator for string j of a family: std::mt19937_64 seeded from
// splitmix64 of the seed and j.
std::mt19937_64 family_stream(std::uint64_t seed, std::uint64_t j);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

Text sample_string(const WeightedSequence& x, std::mt19937_64& rng);

// ceil((c + 2) z ln(nz)), at least 1.
std::size_t randomized_family_size(std::size_t n, double z, double c);
// ceil((c + 2) eps^-2 ln(n / eps)), at least 1.
std::size_t randomized_approx_family_size(std::size_t n, double eps, double c);

// Longest-prefix property of `s` against X for the given linear threshold.
PropertyArray solid_prefix_property(const WeightedSequence& x, const Text& s,
                                    double threshold);

// Random weighted sequence: each distribution is a normalized vector of
// exponential draws. Letters come from A-Z, a-z, 0-9 and then punctuation,
// so sigma is limited to the 92 letters the text format can carry.
inline constexpr std::size_t kMaxGeneratedSigma = 92;
WeightedSequence generate_weighted_sequence(std::size_t n, std::size_t sigma,
                                            std::uint64_t seed);

SampledFamily build_randomized_family(const WeightedSequence& x, double z,
                                      const RandomizedConfig& cfg);
SampledFamily build_randomized_approx_family(const WeightedSequence& x, double eps,
                                             const RandomizedConfig& cfg);

}  // namespace windex
