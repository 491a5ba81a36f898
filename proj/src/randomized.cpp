#include "windex/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

namespace windex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_confidence(double c) {
  if (!(c >= 1.0) || !std::isfinite(c))
    throw ValidationError("confidence constant c must be >= 1");
}

SampledFamily sample_family(const WeightedSequence& x, std::size_t k,
                            SamplingMode mode, double parameter,
                            const RandomizedConfig& cfg) {
  SampledFamily fam;
  fam.mode = mode;
  fam.parameter = parameter;
  fam.strings.resize(k);
  fam.properties.resize(k);
  const double threshold = fam.threshold();
  // One generator stream per string.
  for (std::size_t j = 0; j < k; ++j) {
    auto rng = family_stream(cfg.seed, j);
    fam.strings[j] = sample_string(x, rng);
    fam.properties[j] = solid_prefix_property(x, fam.strings[j], threshold);
  }
  return fam;
}

}  // namespace

std::mt19937_64 family_stream(std::uint64_t seed, std::uint64_t j) {
  return std::mt19937_64(splitmix64(seed + splitmix64(j)));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Text sample_string(const WeightedSequence& x, std::mt19937_64& rng) {
  Text s(x.size());
  const std::size_t sigma = x.sigma();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t pick = sigma;
    std::size_t last_positive = 0;
    for (std::size_t c = 0; c < sigma; ++c) {
      const double p = x.prob(i, static_cast<Symbol>(c));
      if (p <= 0.0) continue;
      last_positive = c;
      acc += p;
      if (u < acc) {
        pick = c;
        break;
      }
    }
    // Rounding can leave u above the accumulated mass.
    if (pick == sigma) pick = last_positive;
    s[i] = static_cast<Symbol>(pick);
  }
  return s;
}

std::size_t randomized_family_size(std::size_t n, double z, double c) {
  check_confidence(c);
  const double k = std::ceil((c + 2.0) * z * std::log(static_cast<double>(n) * z));
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

std::size_t randomized_approx_family_size(std::size_t n, double eps, double c) {
  check_confidence(c);
  const double k =
      std::ceil((c + 2.0) / (eps * eps) * std::log(static_cast<double>(n) / eps));
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

PropertyArray solid_prefix_property(const WeightedSequence& x, const Text& s,
                                    double threshold) {
  const std::size_t n = x.size();
  if (s.size() != n) throw ValidationError("string length differs from X");
  // Log-probability prefix sums with zero letters counted separately.
  std::vector<double> logs(n + 1, 0.0);
  std::vector<std::uint32_t> zeros(n + 1, 0);
  for (std::size_t t = 0; t < n; ++t) {
    const LogProb p = x.log_prob(t, s[t]);
    logs[t + 1] = logs[t] + (p.is_zero() ? 0.0 : p.log2());
    zeros[t + 1] = zeros[t] + (p.is_zero() ? 1 : 0);
  }
  const double z = 1.0 / threshold;
  auto admissible = [&](std::size_t b, std::size_t e) {
    if (zeros[e] != zeros[b]) return false;
    return LogProb::from_log2(logs[e] - logs[b]).at_least_reciprocal(z);
  };
  std::vector<std::uint32_t> ends(n);
  std::size_t e = 0;
  for (std::size_t i = 0; i < n; ++i) {
    e = std::max(e, i);
    while (e < n && admissible(i, e + 1)) ++e;
    ends[i] = static_cast<std::uint32_t>(e);
  }
  return PropertyArray(std::move(ends));
}

WeightedSequence generate_weighted_sequence(std::size_t n, std::size_t sigma,
                                            std::uint64_t seed) {
  static constexpr std::string_view kPool =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789"
      "!\"$%&'()*+,-./;<=>?@[\\]^_`{|}~";
  static_assert(kPool.size() == kMaxGeneratedSigma);
  if (n == 0) throw ValidationError("n must be at least 1");
  if (sigma == 0 || sigma > kMaxGeneratedSigma)
    throw ValidationError("sigma must lie in [1, " + std::to_string(kMaxGeneratedSigma) + "]");
  auto rng = family_stream(seed, 0);
  std::vector<double> probs(n * sigma);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t c = 0; c < sigma; ++c)
      total += probs[i * sigma + c] = -std::log1p(-uniform01(rng));
    // Uniform when every draw is zero.
    for (std::size_t c = 0; c < sigma; ++c)
      probs[i * sigma + c] =
          total > 0.0 ? probs[i * sigma + c] / total : 1.0 / static_cast<double>(sigma);
  }
  return WeightedSequence(Alphabet(kPool.substr(0, sigma)), std::move(probs));
}

SampledFamily build_randomized_family(const WeightedSequence& x, double z,
                                      const RandomizedConfig& cfg) {
  family_size(z);
  const auto k = randomized_family_size(x.size(), z, cfg.confidence);
  return sample_family(x, k, SamplingMode::exact_threshold, z, cfg);
}

SampledFamily build_randomized_approx_family(const WeightedSequence& x, double eps,
                                             const RandomizedConfig& cfg) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("eps must lie in (0, 1]");
  const auto k = randomized_approx_family_size(x.size(), eps, cfg.confidence);
  return sample_family(x, k, SamplingMode::approximate, eps, cfg);
}

}  // namespace windex
