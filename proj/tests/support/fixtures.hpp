#pragma once

// Shared fixtures and brute-force oracles for the test suites. The oracles
// work in plain linear arithmetic and never call the library's own oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "windex/core.hpp"

namespace windex::testing {

inline constexpr double kSlack = 1e-9;

inline WeightedSequence running_example() {
  return WeightedSequence(Alphabet("AB"), {1.0, 0.0, 0.5, 0.5, 0.75, 0.25,
                                           0.8, 0.2, 0.5, 0.5, 0.25, 0.75});
}

inline const char* running_example_text() {
  return "WSEQ 6 AB\n"
         "A:1 B:0\n"
         "A:0.5 B:0.5\n"
         "A:0.75 B:0.25\n"
         "A:0.8 B:0.2\n"
         "A:0.5 B:0.5\n"
         "A:0.25 B:0.75\n";
}

// A known 4-estimation of the running example: strings and 0-based
// exclusive-end properties.
inline std::vector<std::string> example_family_strings() {
  return {"AAAAAA", "AAAAAB", "ABAABB", "ABBBBB"};
}
inline std::vector<std::vector<std::uint32_t>> example_family_ends() {
  return {{2, 2, 3, 4, 5, 6}, {4, 4, 5, 6, 6, 6}, {4, 4, 5, 6, 6, 6}, {2, 2, 3, 3, 5, 6}};
}

inline std::string letters_for(std::size_t sigma) {
  return std::string("ABCDEFGHIJKLMNOPQRSTUVWXYZ").substr(0, sigma);
}

// Random distributions; a share of positions is deterministic and a share
// carries exact ties or zeros so boundary rules get exercised.
inline WeightedSequence random_sequence(std::mt19937_64& rng, std::size_t n,
                                        std::size_t sigma) {
  std::vector<double> probs(n * sigma, 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 9);
  std::uniform_int_distribution<std::size_t> letter(0, sigma - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double* row = probs.data() + i * sigma;
    const int k = kind(rng);
    if (k == 0) {
      row[letter(rng)] = 1.0;
    } else if (k == 1 && sigma >= 2) {
      // Dyadic values hit thresholds exactly.
      const auto a = letter(rng);
      auto b = letter(rng);
      if (a == b) b = (a + 1) % sigma;
      row[a] = 0.5;
      row[b] = 0.5;
    } else if (k == 2 && sigma >= 2) {
      const auto a = letter(rng);
      auto b = letter(rng);
      if (a == b) b = (a + 1) % sigma;
      row[a] = 0.75;
      row[b] = 0.25;
    } else {
      double total = 0.0;
      for (std::size_t c = 0; c < sigma; ++c) total += row[c] = -std::log(1.0 - u(rng));
      for (std::size_t c = 0; c < sigma; ++c) row[c] /= total;
    }
  }
  return WeightedSequence(Alphabet(letters_for(sigma)), std::move(probs));
}

inline std::vector<double> row_probs(const WeightedSequence& x, std::size_t i) {
  auto d = x.distribution(i);
  return {d.begin(), d.end()};
}

// Linear-domain product; zero past the end.
inline double linear_prob(const WeightedSequence& x, const std::string& p,
                          std::size_t pos) {
  if (pos + p.size() > x.size()) return 0.0;
  double r = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto c = x.alphabet().rank(p[k]);
    if (!c) return 0.0;
    r *= x.prob(pos + k, *c);
  }
  return r;
}

inline bool solid(double p, double z) { return p * z >= 1.0 - kSlack; }
inline std::int64_t floor_count(double p, double z) {
  return static_cast<std::int64_t>(std::floor(p * z + kSlack));
}

// Every (pattern, position) with positive probability above the threshold,
// grown letter by letter.
inline std::map<std::string, std::set<std::size_t>> solid_occurrences(
    const WeightedSequence& x, double z) {
  std::map<std::string, std::set<std::size_t>> out;
  const std::string& letters = x.alphabet().letters();
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<std::pair<std::string, double>> frontier{{"", 1.0}};
    while (!frontier.empty()) {
      auto [p, pr] = frontier.back();
      frontier.pop_back();
      out[p].insert(i);
      if (i + p.size() >= x.size()) continue;
      for (std::size_t c = 0; c < letters.size(); ++c) {
        const double q = pr * x.prob(i + p.size(), static_cast<Symbol>(c));
        if (q > 0.0 && solid(q, z)) frontier.emplace_back(p + letters[c], q);
      }
    }
  }
  return out;
}

inline std::vector<std::size_t> brute_occurrences(const WeightedSequence& x,
                                                  double threshold,
                                                  const std::string& p) {
  std::vector<std::size_t> out;
  // A non-positive threshold admits every position, including those where
  // the pattern would run past the end.
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (threshold <= 0.0) {
      out.push_back(i);
      continue;
    }
    if (i + p.size() > x.size()) continue;
    if (solid(linear_prob(x, p, i), 1.0 / threshold)) out.push_back(i);
  }
  return out;
}

inline std::vector<std::size_t> brute_property_occurrences(
    const std::string& s, const std::vector<std::uint32_t>& ends,
    const std::string& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i + p.size() <= ends[i] && s.compare(i, p.size(), p) == 0) out.push_back(i);
  return out;
}

inline std::vector<std::uint32_t> random_ends(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint32_t> ends(n);
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::uint32_t>(prev, static_cast<std::uint32_t>(i));
    std::uniform_int_distribution<std::uint32_t> d(lo, static_cast<std::uint32_t>(n));
    // Bias toward short steps so properties stay varied.
    std::uint32_t e = d(rng);
    if (rng() % 3 == 0) e = lo;
    ends[i] = prev = e;
  }
  return ends;
}

inline std::string random_string(std::mt19937_64& rng, std::size_t n,
                                 std::size_t sigma) {
  std::string s(n, 'A');
  for (auto& c : s) c = static_cast<char>('A' + rng() % sigma);
  return s;
}

inline std::set<std::string> all_factors(const std::string& s) {
  std::set<std::string> out{""};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t l = 1; i + l <= s.size(); ++l) out.insert(s.substr(i, l));
  return out;
}

inline std::vector<std::size_t> one_based(std::vector<std::size_t> v) {
  for (auto& x : v) ++x;
  return v;
}

}  // namespace windex::testing
