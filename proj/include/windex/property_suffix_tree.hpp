#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "windex/core.hpp"

namespace windex {

struct PstBuildStats {
  // Edges walked while locating every S[i, pi[i]), suffix-link hops included.
  std::uint64_t locus_edge_steps = 0;
  std::uint64_t suffix_tree_nodes = 0;
  std::uint64_t nodes = 0;
};

// Compact trie of the strings S[i, pi[i]) (0-based, exclusive end). Each
// terminal node keeps the list of indices i whose string is its path label;
// indices with an empty admissible factor sit on the root.
//
// Nodes are laid out in preorder, so the terminal entries of a subtree form a
// contiguous range [term_begin, subtree_end) of entries().
class PropertySuffixTree {
 public:
  static constexpr std::uint32_t kNoParent = UINT32_MAX;

  struct Node {
    std::uint32_t parent = kNoParent;
    std::uint32_t edge_start = 0;  // edge label is text[edge_start, +edge_length)
    std::uint32_t edge_length = 0;
    std::uint32_t depth = 0;
    std::uint32_t child_begin = 0;  // into children()
    std::uint32_t child_count = 0;
    std::uint32_t term_begin = 0;   // L_v is entries()[term_begin, term_end)
    std::uint32_t term_end = 0;
    std::uint32_t subtree_end = 0;

    friend bool operator==(const Node&, const Node&) = default;
  };

  // Locus of a pattern: `node` is the explicit node at or directly below it.
  struct Locus {
    std::uint32_t node = 0;
    std::uint32_t depth = 0;
    bool is_explicit = false;
  };

  PropertySuffixTree() = default;

  static PropertySuffixTree build(std::span<const Symbol> text, std::size_t sigma,
                                  const PropertyArray& pi,
                                  PstBuildStats* stats = nullptr);

  std::optional<Locus> locate(std::span<const Symbol> pattern) const;
  std::size_t count(std::span<const Symbol> pattern) const;
  std::vector<std::size_t> report(std::span<const Symbol> pattern) const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Node& node(std::uint32_t v) const { return nodes_[v]; }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const std::uint32_t> children() const noexcept { return children_; }
  std::span<const std::uint32_t> entries() const noexcept { return entries_; }
  std::span<const Symbol> text() const noexcept { return text_; }
  std::size_t sigma() const noexcept { return sigma_; }
  // Letter on the first position of the edge into v.
  Symbol first_letter(std::uint32_t v) const { return text_[nodes_[v].edge_start]; }

  // Little-endian "PST1" blob.
  void save(std::ostream& out) const;
  static PropertySuffixTree load(std::istream& in);

  friend bool operator==(const PropertySuffixTree&, const PropertySuffixTree&) = default;

 private:
  std::size_t sigma_ = 0;
  Text text_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> children_;
  std::vector<std::uint32_t> entries_;
};

}  // namespace windex
