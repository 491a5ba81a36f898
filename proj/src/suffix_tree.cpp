#include "windex/suffix_tree.hpp"

#include <algorithm>

namespace windex {

std::int32_t SuffixTree::new_node(std::int32_t start, std::int32_t end) {
  nodes_.push_back(Node{start, end, kNone, 0, 0, kNone});
  children_.resize(children_.size() + slots_, kNone);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

SuffixTree::SuffixTree(std::span<const Symbol> text, std::size_t sigma)
    : slots_(sigma + 1) {
  text_.reserve(text.size() + 1);
  for (Symbol c : text) {
    if (c >= sigma) throw ValidationError("suffix tree: letter outside alphabet");
    text_.push_back(c);
  }
  text_.push_back(static_cast<std::uint32_t>(sigma));

  const auto total = static_cast<std::int32_t>(text_.size());
  nodes_.reserve(2 * text_.size() + 1);
  children_.reserve(nodes_.capacity() * slots_);
  new_node(0, 0);  // root; link stays 0 (itself)

  // Leaves are open-ended during construction; finalize() closes them.
  constexpr std::int32_t kOpen = INT32_MAX;
  std::int32_t active_node = 0;
  std::int32_t active_edge = 0;
  std::int32_t active_length = 0;
  std::int32_t remainder = 0;

  auto edge_length = [&](std::int32_t v, std::int32_t pos) {
    const auto end = nodes_[v].end == kOpen ? pos + 1 : nodes_[v].end;
    return end - nodes_[v].start;
  };

  for (std::int32_t pos = 0; pos < total; ++pos) {
    const auto c = text_[pos];
    ++remainder;
    std::int32_t last_internal = kNone;
    while (remainder > 0) {
      if (active_length == 0) active_edge = pos;
      const auto edge_letter = text_[active_edge];
      const auto next = child_ref(active_node, edge_letter);
      if (next == kNone) {
        const auto leaf = new_node(pos, kOpen);
        nodes_[leaf].parent = active_node;
        child_ref(active_node, edge_letter) = leaf;
        if (last_internal != kNone) {
          nodes_[last_internal].link = active_node;
          last_internal = kNone;
        }
      } else {
        const auto len = edge_length(next, pos);
        if (active_length >= len) {
          active_edge += len;
          active_length -= len;
          active_node = next;
          continue;
        }
        if (text_[nodes_[next].start + active_length] == c) {
          if (last_internal != kNone && active_node != 0) {
            nodes_[last_internal].link = active_node;
            last_internal = kNone;
          }
          ++active_length;
          break;
        }
        const auto split =
            new_node(nodes_[next].start, nodes_[next].start + active_length);
        nodes_[split].parent = active_node;
        child_ref(active_node, edge_letter) = split;
        const auto leaf = new_node(pos, kOpen);
        nodes_[leaf].parent = split;
        child_ref(split, c) = leaf;
        nodes_[next].start += active_length;
        nodes_[next].parent = split;
        child_ref(split, text_[nodes_[next].start]) = next;
        if (last_internal != kNone) nodes_[last_internal].link = split;
        last_internal = split;
      }
      --remainder;
      if (active_node == 0 && active_length > 0) {
        --active_length;
        active_edge = pos - remainder + 1;
      } else if (active_node != 0) {
        active_node = nodes_[active_node].link;
      }
    }
  }
  for (auto& v : nodes_)
    if (v.end == kOpen) v.end = total;
  finalize();
}

void SuffixTree::finalize() {
  const auto total = static_cast<std::int32_t>(text_.size());
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    bool leaf = true;
    for (std::size_t c = 0; c < slots_; ++c) {
      const auto w = child(v, static_cast<std::uint32_t>(c));
      if (w == kNone) continue;
      leaf = false;
      nodes_[w].depth = nodes_[v].depth + (nodes_[w].end - nodes_[w].start);
      stack.push_back(w);
    }
    if (leaf && v != 0) nodes_[v].suffix = total - nodes_[v].depth;
  }
}

}  // namespace windex
