#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "windex/core.hpp"

namespace windex {

// floor(z) strings of length n with properties such that, for every P and i,
// the number of strings holding P at i within their property equals
// floor(P_X(P, i) * z).
struct ZEstimation {
  double z = 1.0;
  std::vector<Text> strings;
  std::vector<PropertyArray> properties;

  std::size_t size() const noexcept { return strings.size(); }
  std::size_t length() const noexcept {
    return strings.empty() ? 0 : strings.front().size();
  }
};

// Number of j with strings[j][pos, pos + |P|) == P inside properties[j].
std::size_t family_count(std::span<const Text> strings,
                         std::span<const PropertyArray> properties,
                         std::span<const Symbol> pattern, std::size_t pos);

struct ConstructionStats {
  std::uint64_t nodes_created = 0;
  std::uint64_t nodes_deleted = 0;
  // Upward moves made by tokens, summed over all tokens and positions.
  std::uint64_t token_walk_steps = 0;
  std::uint64_t token_requests = 0;
  std::uint64_t max_live_nodes = 0;
  // Every walk made at most 1 + |P_{j,i+1}| - |P_{j,i}| upward moves.
  bool walk_bound_held = true;
};

struct StepStats {
  std::size_t position = 0;
  std::uint64_t nodes_created = 0;
  std::uint64_t nodes_deleted = 0;
  std::uint64_t token_walk_steps = 0;
  std::uint64_t token_requests = 0;
};

// Solid factor trie T_i: one node per P with floor(P_X(P, i) * z) > 0 and
// one token per family member, parked at the node of its current factor.
//
// Nodes are never rewritten when the trie is re-rooted. A node remembers the
// position where it was created together with its depth and log-probability
// there; both values at a later (smaller) position follow from the prefix
// sums of the heavy letters' log-probabilities.
class SolidFactorTrie {
 public:
  static constexpr std::int32_t kNone = -1;

  struct Node {
    std::int32_t parent = kNone;
    Symbol letter = 0;
    std::uint32_t birth = 0;
    std::uint32_t birth_depth = 0;
    double birth_log = 0.0;
    std::uint32_t tokens = 0;
    std::uint32_t processed = 0;
    std::int32_t requests = kNone;
    std::uint16_t child_count = 0;
    bool live = false;
  };

  struct LabelInfo {
    std::string label;
    std::vector<std::size_t> tokens;  // 0-based token ids
  };

  std::int32_t root() const noexcept { return root_; }
  std::size_t live_nodes() const noexcept { return live_; }
  // All live nodes with their labels, sorted by label.
  std::vector<LabelInfo> labels(const Alphabet& alphabet) const;
  // Indented dump: one node per line with letter, probability, token ids
  // (1-based) and pending request count.
  void dump(std::ostream& out, const Alphabet& alphabet) const;

 private:
  friend class ZEstimationBuilder;

  std::int32_t& child(std::int32_t v, Symbol c) {
    return children_[static_cast<std::size_t>(v) * sigma_ + c];
  }
  std::int32_t child(std::int32_t v, Symbol c) const {
    return children_[static_cast<std::size_t>(v) * sigma_ + c];
  }
  std::uint32_t depth(std::int32_t v) const {
    const Node& u = nodes_[v];
    return u.birth_depth + (u.birth - position_);
  }
  LogProb prob(std::int32_t v) const {
    const Node& u = nodes_[v];
    return LogProb::from_log2(u.birth_log + (heavy_prefix_[u.birth] -
                                             heavy_prefix_[position_]));
  }
  std::int32_t allocate(std::int32_t parent, Symbol letter, std::uint32_t depth,
                        LogProb p);
  void release(std::int32_t v);
  std::uint32_t pending_requests(std::int32_t v) const;

  struct Request {
    std::int32_t target;
    std::uint32_t remaining;
    Symbol letter;
    std::int32_t next;
  };

  std::size_t sigma_ = 0;
  std::uint32_t position_ = 0;
  std::int32_t root_ = kNone;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> children_;
  std::vector<std::int32_t> free_;
  std::vector<Request> requests_;
  std::vector<std::uint32_t> token_node_;
  // heavy_prefix_[k] = sum over t < k of log2 p_t(h_t).
  std::vector<double> heavy_prefix_;
  std::size_t live_ = 0;
};

// Runs the right-to-left transformation T_{n+1} -> T_n -> ... -> T_1 and
// records S_j[i] and pi_j[i] for every token j as it settles.
class ZEstimationBuilder {
 public:
  ZEstimationBuilder(const WeightedSequence& x, double z);

  // Positions still to process; the trie currently represents T_{remaining()}
  // in 0-based terms, i.e. the factors starting at position remaining().
  std::size_t remaining() const noexcept { return trie_.position_; }
  bool done() const noexcept { return trie_.position_ == 0; }

  // T_{i+1} -> T_i for i = remaining() - 1.
  const StepStats& step();
  void run();

  const SolidFactorTrie& trie() const noexcept { return trie_; }
  const ConstructionStats& stats() const noexcept { return stats_; }
  const StepStats& last_step() const noexcept { return last_; }

  // Emits the trie after each step (and after the request phase) when set.
  void set_trace(std::ostream* out) noexcept { trace_ = out; }

  // Requires done().
  ZEstimation finish() &&;

 private:
  std::int64_t count_at(LogProb p) const { return p.floor_times(z_); }
  std::int64_t multiplicity(std::int32_t v) const;
  void build_light_subtree(Symbol c, std::size_t pos);
  void move_token(std::uint32_t token, Symbol heavy);
  void place(std::int32_t v, std::uint32_t token);

  const WeightedSequence* x_;
  double z_;
  std::size_t k_;
  SolidFactorTrie trie_;
  std::vector<std::int32_t> touched_;
  std::vector<Text> strings_;
  std::vector<std::vector<std::uint32_t>> ends_;
  ConstructionStats stats_;
  StepStats last_;
  std::ostream* trace_ = nullptr;
};

ZEstimation build_z_estimation(const WeightedSequence& x, double z,
                               ConstructionStats* stats = nullptr,
                               std::ostream* trace = nullptr);

// Brute-force check of the defining equality over the closure of all M_i
// prefixes and their one-letter extensions.
bool verify_z_estimation(const WeightedSequence& x, double z,
                         const ZEstimation& fam);

}  // namespace windex
