#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "windex/core.hpp"
#include "windex/property_suffix_tree.hpp"
#include "windex/zest.hpp"

namespace windex {

class WeightedIndex;

namespace detail {
// kind 0: exact index, kind 1: approximate index carrying eps.
void write_index(std::ostream& out, const WeightedIndex& index, std::uint8_t kind,
                 double eps);
WeightedIndex read_index(std::istream& in, std::uint8_t& kind, double& eps);
}  // namespace detail

struct IndexBuildStats {
  ConstructionStats construction;
  PstBuildStats pst;
  std::size_t blocks = 0;
  std::size_t block_length = 0;
};

// Per-query scratch state: epoch-stamped marks and counters over positions.
// One context per concurrent caller; never share across threads.
class QueryContext {
 public:
  explicit QueryContext(std::size_t n) : stamp_(n, 0), counter_(n, 0) {}

 private:
  friend class WeightedIndex;
  std::uint32_t next_epoch();
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> counter_;
  std::uint32_t epoch_ = 0;
};

// Property suffix tree over S_1 S_2 ... S_k with every property shifted into
// its block (and thereby capped at the block end). Terminal entries are
// translated back to positions of the weighted sequence.
class WeightedIndex {
 public:
  WeightedIndex() = default;

  static WeightedIndex build(const WeightedSequence& x, double z,
                             IndexBuildStats* stats = nullptr);
  // Any family of equal-length strings with properties, e.g. a sampled one.
  static WeightedIndex from_family(const Alphabet& alphabet, double z,
                                   std::span<const Text> strings,
                                   std::span<const PropertyArray> properties,
                                   PstBuildStats* stats = nullptr);

  bool decide(std::string_view pattern) const;
  std::size_t count(std::string_view pattern) const;
  std::vector<std::size_t> report(std::string_view pattern) const;
  std::vector<std::size_t> report(std::string_view pattern, QueryContext& ctx) const;
  // Positions occurring at least `min_entries` times below the locus.
  std::vector<std::size_t> report_frequent(std::string_view pattern,
                                           std::size_t min_entries,
                                           QueryContext& ctx) const;

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t length() const noexcept { return n_; }
  std::size_t blocks() const noexcept { return blocks_; }
  double z() const noexcept { return z_; }
  const PropertySuffixTree& tree() const noexcept { return pst_; }
  // Original position of every terminal entry, in leaf order.
  std::span<const std::uint32_t> documents() const noexcept { return docs_; }
  std::span<const std::uint32_t> distinct_counts() const noexcept { return distinct_; }

  void save(std::ostream& out) const;
  static WeightedIndex load(std::istream& in);

  friend bool operator==(const WeightedIndex&, const WeightedIndex&) = default;

 private:
  friend void detail::write_index(std::ostream&, const WeightedIndex&, std::uint8_t,
                                  double);
  friend WeightedIndex detail::read_index(std::istream&, std::uint8_t&, double&);

  std::optional<PropertySuffixTree::Locus> locate(std::string_view pattern) const;
  void index_documents();

  Alphabet alphabet_;
  double z_ = 1.0;
  std::size_t n_ = 0;
  std::size_t blocks_ = 0;
  PropertySuffixTree pst_;
  std::vector<std::uint32_t> docs_;
  std::vector<std::uint32_t> distinct_;
};

// Weighted sequence with at most one positive-probability letter per
// position; probabilities need not sum to one.
class SpecialWeightedSequence {
 public:
  SpecialWeightedSequence(Alphabet alphabet, std::vector<std::optional<Symbol>> letters,
                          std::vector<double> probs);

  std::size_t size() const noexcept { return letters_.size(); }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::optional<Symbol> letter(std::size_t i) const { return letters_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }
  bool is_separator(std::size_t i) const { return !letters_[i]; }
  // P_X(P, pos) for this sequence; zero when any letter differs.
  LogProb match_probability(std::span<const Symbol> pattern, std::size_t pos) const;

 private:
  Alphabet alphabet_;
  std::vector<std::optional<Symbol>> letters_;
  std::vector<double> probs_;
};

// Concatenates the family, taking probabilities from x, with one all-zero
// separator between consecutive strings.
SpecialWeightedSequence to_special_weighted_sequence(const ZEstimation& fam,
                                                     const WeightedSequence& x);

}  // namespace windex
