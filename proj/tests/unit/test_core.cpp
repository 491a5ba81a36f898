#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "windex/core.hpp"

using namespace windex;
using namespace windex::testing;

TEST(Alphabet, SortsAndRanks) {
  Alphabet a("TGCA");
  EXPECT_EQ(a.letters(), "ACGT");
  EXPECT_EQ(a.rank('G').value(), 2);
  EXPECT_FALSE(a.rank('N').has_value());
  EXPECT_EQ(a.decode(*a.encode("GATTACA")), "GATTACA");
  EXPECT_FALSE(a.encode("GAN").has_value());
}

TEST(Alphabet, RejectsBadLetters) {
  EXPECT_THROW(Alphabet("AA"), ValidationError);
  EXPECT_THROW(Alphabet("A B"), ValidationError);
  EXPECT_THROW(Alphabet("A:"), ValidationError);
  EXPECT_THROW(Alphabet("#A"), ValidationError);
  EXPECT_THROW(Alphabet(""), ValidationError);
}

TEST(LogProb, SlackRules) {
  EXPECT_TRUE(LogProb::from_linear(0.25).at_least_reciprocal(4.0));
  EXPECT_TRUE(LogProb::from_linear(0.25 - 1e-12).at_least_reciprocal(4.0));
  EXPECT_FALSE(LogProb::from_linear(0.2499).at_least_reciprocal(4.0));
  EXPECT_FALSE(LogProb::zero().at_least_reciprocal(1.0));
  // 0.1 * 0.3 * 10 / 0.3 in floating point lands just under 1.
  const auto p = LogProb::from_linear(0.1) * LogProb::from_linear(0.3) *
                 LogProb::from_linear(1.0 / 0.3);
  EXPECT_EQ(p.floor_times(10.0), 1);
  EXPECT_EQ(LogProb::from_linear(0.6).floor_times(4.0), 2);
  EXPECT_EQ(LogProb::zero().floor_times(8.0), 0);
  EXPECT_EQ(LogProb::one().floor_times(3.5), 3);
}

TEST(FamilySize, FloorWithSlack) {
  EXPECT_EQ(family_size(4.0), 4u);
  EXPECT_EQ(family_size(7.5), 7u);
  EXPECT_EQ(family_size(1.0), 1u);
  EXPECT_EQ(family_size(3.0 - 1e-12), 3u);
  EXPECT_THROW(family_size(0.5), ValidationError);
}

TEST(PropertyArray, Validity) {
  EXPECT_TRUE(PropertyArray::is_valid(std::vector<std::uint32_t>{2, 2, 3, 4, 5, 6}));
  EXPECT_TRUE(PropertyArray::is_valid(std::vector<std::uint32_t>{0, 1, 2, 3}));
  // decreasing
  EXPECT_FALSE(PropertyArray::is_valid(std::vector<std::uint32_t>{3, 2, 3}));
  // below i
  EXPECT_FALSE(PropertyArray::is_valid(std::vector<std::uint32_t>{0, 0, 3}));
  // above n
  EXPECT_FALSE(PropertyArray::is_valid(std::vector<std::uint32_t>{1, 4, 4}));
  EXPECT_THROW(PropertyArray({2, 1}), ValidationError);
}

TEST(Parse, RunningExample) {
  const auto x = parse_weighted_sequence(running_example_text());
  EXPECT_EQ(x.size(), 6u);
  EXPECT_DOUBLE_EQ(x.prob(2, 0), 0.75);
  EXPECT_EQ(x.alphabet().letters(), "AB");
  EXPECT_EQ(x.heavy_letter(1), 0);  // tie goes to A
  EXPECT_EQ(x.heavy_letter(5), 1);
}

TEST(Parse, SingleDeterministicLine) {
  const auto x = parse_weighted_sequence("WSEQ 1 A\nA:1.0\n");
  EXPECT_EQ(x.size(), 1u);
  EXPECT_DOUBLE_EQ(x.prob(0, 0), 1.0);
}

TEST(Parse, CommentsAndOmittedLetters) {
  const auto x = parse_weighted_sequence(
      "# header comment\nWSEQ 2 ACGT  # trailing\n\nC:1\nA:0.5 T:0.5 # row\n");
  EXPECT_EQ(x.size(), 2u);
  EXPECT_DOUBLE_EQ(x.prob(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(x.prob(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(x.prob(1, 3), 0.5);
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_weighted_sequence("WSEQ 1 AB\nA:0.5 B:0.4\n"), ValidationError);
  EXPECT_THROW(parse_weighted_sequence("WSEQ 1 AB\nC:1\n"), ValidationError);
  EXPECT_THROW(parse_weighted_sequence("WSEQ 1 AB\nA:-0.5 B:1.5\n"), ValidationError);
  try {
    parse_weighted_sequence("WSEQ 2 AB\nA:1\nA=1\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_weighted_sequence("A:1\n"), ParseError);
  EXPECT_THROW(parse_weighted_sequence("WSEQ 2 AB\nA:1\n"), ParseError);
  EXPECT_THROW(parse_weighted_sequence("WSEQ 1 AB\nA:1\nB:1\n"), ParseError);
  EXPECT_THROW(parse_weighted_sequence("WSEQ 1 AB\nA:x\n"), ParseError);
  EXPECT_THROW(parse_weighted_sequence("WSEQ 0 AB\n"), ParseError);
  EXPECT_THROW(parse_weighted_sequence(""), ParseError);
}

TEST(Parse, Renormalize) {
  ParseOptions opts;
  opts.renormalize = true;
  const auto x = parse_weighted_sequence("WSEQ 1 AB\nA:0.5 B:0.4\n", opts);
  EXPECT_NEAR(x.prob(0, 0) + x.prob(0, 1), 1.0, 1e-12);
}

TEST(Parse, WriteRoundTrip) {
  std::mt19937_64 rng(3);
  const auto x = random_sequence(rng, 20, 4);
  std::ostringstream out;
  write_weighted_sequence(out, x);
  const auto y = parse_weighted_sequence(out.str());
  ASSERT_EQ(y.size(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t c = 0; c < 4; ++c)
      EXPECT_NEAR(y.prob(i, static_cast<Symbol>(c)), x.prob(i, static_cast<Symbol>(c)), 1e-11);
}

TEST(MatchProbability, Examples) {
  const auto x = running_example();
  EXPECT_NEAR(match_probability(x, "AA", 2).linear(), 0.6, 1e-12);
  EXPECT_NEAR(match_probability(x, "AB", 0).linear(), 0.5, 1e-12);
  for (std::size_t i = 0; i <= x.size(); ++i)
    EXPECT_EQ(match_probability(x, "", i).linear(), 1.0);
  EXPECT_TRUE(match_probability(x, "BA", 0).is_zero());
  EXPECT_TRUE(match_probability(x, "AC", 0).is_zero());
  EXPECT_THROW(match_probability(x, "AAA", 4), RangeError);
}

TEST(MatchProbability, MatchesLinearProduct) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_sequence(rng, 10, 3);
    const auto p = random_string(rng, 1 + rng() % 5, 3);
    for (std::size_t i = 0; i + p.size() <= x.size(); ++i)
      EXPECT_NEAR(match_probability(x, p, i).linear(), linear_prob(x, p, i), 1e-12);
  }
}

TEST(FactorCounts, Examples) {
  const auto x = running_example();
  const auto aa = factor_counts(x, 4.0, "AA", 2);
  EXPECT_EQ(aa.t, 2);
  const auto b = factor_counts(x, 4.0, "B", 2);
  EXPECT_EQ(b.t, 1);
  EXPECT_EQ(b.m, 1);
  for (std::size_t i = 0; i <= x.size(); ++i) EXPECT_EQ(factor_counts(x, 4.0, "", i).t, 4);
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(EnumerateMultiset, RunningExampleColumns) {
  const auto x = running_example();
  using V = std::vector<std::string>;
  EXPECT_EQ(enumerate_multiset(x, 4.0, 2), sorted(V{"A", "AAA", "AAB", "B"}));
  EXPECT_EQ(enumerate_multiset(x, 4.0, 6), (V{"", "", "", ""}));
  EXPECT_EQ(enumerate_multiset(x, 4.0, 0), sorted(V{"AA", "AAAA", "ABAA", "AB"}));
}

TEST(EnumerateMultiset, PrefixCountsMatchFloors) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const double z = std::vector<double>{1, 2, 3.5, 4, 8}[rng() % 5];
    const auto x = random_sequence(rng, n, 2 + rng() % 2);
    for (std::size_t i = 0; i <= n; ++i) {
      const auto m = enumerate_multiset(x, z, i);
      ASSERT_EQ(m.size(), static_cast<std::size_t>(std::floor(z)));
      std::map<std::string, std::int64_t> prefixes;
      for (const auto& s : m)
        for (std::size_t l = 0; l <= s.size(); ++l) ++prefixes[s.substr(0, l)];
      for (const auto& [p, cnt] : prefixes)
        EXPECT_EQ(cnt, floor_count(linear_prob(x, p, i), z)) << p << " at " << i;
    }
  }
}

TEST(SolidFactors, MatchBruteForce) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_sequence(rng, 1 + rng() % 7, 3);
    const double z = 1.0 + static_cast<double>(rng() % 80) / 10.0;
    const auto occ = solid_occurrences(x, z);
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::vector<std::string> want;
      for (const auto& [p, pos] : occ)
        if (pos.count(i)) want.push_back(p);
      EXPECT_EQ(solid_factors_at(x, z, i), want);
    }
  }
}

TEST(NaiveOracles, Examples) {
  const auto x = running_example();
  using P = std::vector<std::size_t>;
  EXPECT_EQ(one_based(naive_weighted_occurrences(x, 4.0, "AA")), (P{1, 2, 3, 4}));
  EXPECT_EQ(one_based(naive_weighted_occurrences(x, 4.0, "")), (P{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(one_based(naive_weighted_occurrences(x, 4.0, "BB")), (P{5}));
  EXPECT_EQ(one_based(naive_occurrences_at_least(x, 0.0, "BBBBBBB")),
            (P{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(one_based(naive_occurrences_at_least(x, -0.1, "AB")), (P{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(one_based(naive_occurrences_at_least(x, 0.5, "AB")), (P{1}));

  const PropertyArray pi1({2, 2, 3, 4, 5, 6});
  // 1-based i=1 admits S[1..2]; i=2 stops at 2 so AA does not fit.
  EXPECT_EQ(one_based(naive_property_occurrences("AAAAAA", pi1, "AA")), (P{1}));
  EXPECT_EQ(one_based(naive_property_occurrences("AAAAAA", pi1, "")),
            (P{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(naive_property_occurrences("ABBA", PropertyArray({0, 1, 2, 3}), "A"), P{});
}

TEST(NaiveOracles, AgreeWithTestOracles) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto x = random_sequence(rng, 1 + rng() % 9, 2);
    const double z = 1.0 + static_cast<double>(rng() % 70) / 10.0;
    for (int q = 0; q < 10; ++q) {
      const auto p = random_string(rng, rng() % 4, 2);
      EXPECT_EQ(naive_weighted_occurrences(x, z, p), brute_occurrences(x, 1.0 / z, p));
    }
    const auto s = random_string(rng, x.size(), 2);
    const auto ends = random_ends(rng, x.size());
    for (const auto& f : all_factors(s))
      EXPECT_EQ(naive_property_occurrences(s, PropertyArray(ends), f),
                brute_property_occurrences(s, ends, f));
  }
}
