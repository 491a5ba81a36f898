#include <gtest/gtest.h>

#include <functional>
#include <sstream>

#include "fixtures.hpp"
#include "windex/property_suffix_tree.hpp"

using namespace windex;
using namespace windex::testing;

namespace {

Text enc(const std::string& s) {
  Text t;
  for (char c : s) t.push_back(static_cast<Symbol>(c - 'A'));
  return t;
}

PropertySuffixTree make(const std::string& s, std::vector<std::uint32_t> ends,
                        std::size_t sigma = 2, PstBuildStats* stats = nullptr) {
  return PropertySuffixTree::build(enc(s), sigma, PropertyArray(std::move(ends)), stats);
}

std::string label(const PropertySuffixTree& t, std::uint32_t v) {
  std::string out;
  while (t.node(v).parent != PropertySuffixTree::kNoParent) {
    const auto& n = t.node(v);
    std::string edge;
    for (std::uint32_t k = 0; k < n.edge_length; ++k)
      edge.push_back(static_cast<char>('A' + t.text()[n.edge_start + k]));
    out = edge + out;
    v = n.parent;
  }
  return out;
}

// Terminal lists keyed by path label, positions 0-based.
std::map<std::string, std::vector<std::size_t>> terminals(const PropertySuffixTree& t) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::uint32_t v = 0; v < t.node_count(); ++v) {
    const auto& n = t.node(v);
    if (n.term_begin == n.term_end) continue;
    auto& list = out[label(t, v)];
    for (auto e = n.term_begin; e < n.term_end; ++e) list.push_back(t.entries()[e]);
    std::sort(list.begin(), list.end());
  }
  return out;
}

std::map<std::string, std::vector<std::size_t>> naive_terminals(
    const std::string& s, const std::vector<std::uint32_t>& ends) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < s.size(); ++i) out[s.substr(i, ends[i] - i)].push_back(i);
  return out;
}

void check_structure(const PropertySuffixTree& t, std::size_t n) {
  ASSERT_GE(t.node_count(), 1u);
  EXPECT_EQ(t.entries().size(), n);
  EXPECT_LE(t.node_count(), 2 * n + 1);
  for (std::uint32_t v = 0; v < t.node_count(); ++v) {
    const auto& node = t.node(v);
    const bool terminal = node.term_begin != node.term_end;
    if (v != 0) EXPECT_TRUE(node.child_count >= 2 || terminal) << v;
    EXPECT_EQ(node.subtree_end - node.term_begin,
              [&] {
                std::uint32_t c = node.term_end - node.term_begin;
                std::function<void(std::uint32_t)> add = [&](std::uint32_t w) {
                  const auto& m = t.node(w);
                  for (std::uint32_t k = 0; k < m.child_count; ++k) {
                    const auto u = t.children()[m.child_begin + k];
                    c += t.node(u).term_end - t.node(u).term_begin;
                    add(u);
                  }
                };
                add(v);
                return c;
              }());
    for (std::uint32_t k = 0; k < node.child_count; ++k) {
      const auto w = t.children()[node.child_begin + k];
      EXPECT_EQ(t.node(w).parent, v);
      EXPECT_EQ(t.node(w).depth, node.depth + t.node(w).edge_length);
      if (k > 0) {
        EXPECT_LT(t.first_letter(t.children()[node.child_begin + k - 1]), t.first_letter(w));
      }
    }
  }
}

}  // namespace

TEST(PropertySuffixTree, FirstExampleString) {
  const auto t = make("AAAAAA", {2, 2, 3, 4, 5, 6});
  using L = std::map<std::string, std::vector<std::size_t>>;
  EXPECT_EQ(terminals(t), (L{{"AA", {0}}, {"A", {1, 2, 3, 4, 5}}}));
  check_structure(t, 6);
  EXPECT_TRUE(t.locate(enc("AA")).has_value());
  EXPECT_FALSE(t.locate(enc("AAA")).has_value());
  const auto root = t.locate(enc(""));
  ASSERT_TRUE(root.has_value());
  EXPECT_EQ(root->node, 0u);
  EXPECT_EQ(t.count(enc("")), 6u);
}

TEST(PropertySuffixTree, ExampleFamilyQueries) {
  const auto s2 = make("AAAAAB", {4, 4, 5, 6, 6, 6});
  EXPECT_EQ(s2.count(enc("AAB")), 1u);
  EXPECT_EQ(one_based(s2.report(enc("AAB"))), std::vector<std::size_t>{4});
  const auto s4 = make("ABBBBB", {2, 2, 3, 3, 5, 6});
  // S_4[5..6] = BB but the property of position 5 ends at 5.
  EXPECT_TRUE(s4.report(enc("BB")).empty());
  const auto s3 = make("ABAABB", {4, 4, 5, 6, 6, 6});
  EXPECT_EQ(one_based(s3.report(enc("BB"))), std::vector<std::size_t>{5});
}

TEST(PropertySuffixTree, FullPropertyKeepsAllSuffixes) {
  const std::string s = "ABAABBA";
  const auto t = make(s, std::vector<std::uint32_t>(s.size(), 7));
  std::map<std::string, std::vector<std::size_t>> want;
  for (std::size_t i = 0; i < s.size(); ++i) want[s.substr(i)].push_back(i);
  EXPECT_EQ(terminals(t), want);
  for (const auto& f : all_factors(s))
    EXPECT_EQ(t.report(enc(f)), brute_property_occurrences(s, std::vector<std::uint32_t>(7, 7), f));
}

TEST(PropertySuffixTree, EmptyProperties) {
  const auto t = make("ABBA", {0, 1, 2, 3});
  EXPECT_EQ(t.node_count(), 1u);
  EXPECT_EQ(one_based(t.report(enc(""))), (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_EQ(t.count(enc("A")), 0u);
}

TEST(PropertySuffixTree, RejectsMismatchedInput) {
  EXPECT_THROW(PropertySuffixTree::build(enc("AB"), 2, PropertyArray({2, 2, 2})),
               ValidationError);
  EXPECT_THROW(PropertySuffixTree::build(Text{0, 3}, 2, PropertyArray({2, 2})),
               ValidationError);
}

TEST(PropertySuffixTree, MatchesNaiveOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t sigma = 1 + rng() % 4;
    const std::size_t n = 1 + rng() % 64;
    const auto s = random_string(rng, n, sigma);
    const auto ends = random_ends(rng, n);
    PstBuildStats stats;
    const auto t = make(s, ends, sigma, &stats);
    check_structure(t, n);
    EXPECT_LE(stats.locus_edge_steps, 4 * n);
    EXPECT_EQ(stats.nodes, t.node_count());
    EXPECT_EQ(terminals(t), naive_terminals(s, ends));
    for (const auto& f : all_factors(s)) {
      const auto want = brute_property_occurrences(s, ends, f);
      EXPECT_EQ(t.report(enc(f)), want) << s << " / " << f;
      EXPECT_EQ(t.count(enc(f)), want.size());
      EXPECT_EQ(t.locate(enc(f)).has_value(), !want.empty());
    }
    for (int q = 0; q < 20; ++q) {
      const auto p = random_string(rng, 1 + rng() % 8, sigma + 1);
      EXPECT_EQ(t.report(enc(p)), brute_property_occurrences(s, ends, p));
    }
  }
}

TEST(PropertySuffixTree, LocusDepthAndExplicitness) {
  const auto t = make("ABAB", {4, 4, 4, 4});
  const auto ab = t.locate(enc("AB"));
  ASSERT_TRUE(ab.has_value());
  EXPECT_EQ(ab->depth, 2u);
  EXPECT_TRUE(ab->is_explicit);
  const auto aba = t.locate(enc("ABA"));
  ASSERT_TRUE(aba.has_value());
  EXPECT_FALSE(aba->is_explicit);
  EXPECT_EQ(t.node(aba->node).depth, 4u);
}

TEST(PropertySuffixTree, SaveLoadRoundTrip) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const auto s = random_string(rng, n, 3);
    const auto t = make(s, random_ends(rng, n), 3);
    std::stringstream buf;
    t.save(buf);
    const auto u = PropertySuffixTree::load(buf);
    EXPECT_EQ(t, u);
  }
}

TEST(PropertySuffixTree, LoadRejectsCorruption) {
  const auto t = make("ABAABB", {4, 4, 5, 6, 6, 6});
  std::stringstream buf;
  t.save(buf);
  const auto bytes = buf.str();
  {
    std::istringstream in(bytes.substr(0, bytes.size() / 2));
    EXPECT_ANY_THROW(PropertySuffixTree::load(in));
  }
  {
    auto bad = bytes;
    bad[0] = 'X';
    std::istringstream in(bad);
    EXPECT_ANY_THROW(PropertySuffixTree::load(in));
  }
  std::mt19937_64 rng(43);
  for (int k = 0; k < 200; ++k) {
    auto bad = bytes;
    bad[8 + rng() % (bad.size() - 8)] ^= static_cast<char>(1 + rng() % 255);
    std::istringstream in(bad);
    try {
      const auto u = PropertySuffixTree::load(in);
      // A flip may land somewhere harmless only if the result is consistent.
      for (std::uint32_t v = 0; v < u.node_count(); ++v)
        EXPECT_LE(u.node(v).subtree_end, u.entries().size());
    } catch (const Error&) {
    }
  }
}
