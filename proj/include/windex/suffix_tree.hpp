#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "windex/core.hpp"

namespace windex {

// Suffix tree of text$ built with Ukkonen's online algorithm. Letters are
// ranks in [0, sigma); the sentinel is the extra rank `sigma`. Children are
// held in a fixed sigma + 1 slot array per node.
class SuffixTree {
 public:
  static constexpr std::int32_t kNone = -1;

  struct Node {
    std::int32_t start = 0;   // edge label is text[start, end)
    std::int32_t end = 0;
    std::int32_t parent = kNone;
    std::int32_t link = kNone;
    std::int32_t depth = 0;   // path-label length
    std::int32_t suffix = kNone;  // leaves only
  };

  SuffixTree(std::span<const Symbol> text, std::size_t sigma);

  std::int32_t root() const noexcept { return 0; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const Node& node(std::int32_t v) const { return nodes_[v]; }
  std::int32_t child(std::int32_t v, std::uint32_t c) const {
    return children_[static_cast<std::size_t>(v) * slots_ + c];
  }
  std::size_t slots() const noexcept { return slots_; }
  // Text including the trailing sentinel.
  std::span<const std::uint32_t> text() const noexcept { return text_; }
  std::uint32_t sentinel() const noexcept {
    return static_cast<std::uint32_t>(slots_ - 1);
  }
  bool is_leaf(std::int32_t v) const { return nodes_[v].suffix != kNone; }

 private:
  std::int32_t& child_ref(std::int32_t v, std::uint32_t c) {
    return children_[static_cast<std::size_t>(v) * slots_ + c];
  }
  std::int32_t new_node(std::int32_t start, std::int32_t end);
  void finalize();

  std::vector<std::uint32_t> text_;
  std::size_t slots_;
  std::vector<Node> nodes_;
  std::vector<std::int32_t> children_;
};

}  // namespace windex
