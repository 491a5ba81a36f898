#include "windex/property_suffix_tree.hpp"

#include <algorithm>

#include "windex/binary_io.hpp"
#include "windex/suffix_tree.hpp"

namespace windex {

namespace {

constexpr std::uint32_t kFormatVersion = 1;

// Intermediate node produced while trimming the suffix tree.
struct Draft {
  std::uint32_t depth = 0;
  std::uint32_t label_pos = 0;
  std::uint32_t entry_begin = 0;
  std::uint32_t entry_end = 0;
  std::int32_t first_child = -1;
  std::int32_t next_sibling = -1;
};

// Stable counting sort of `items` by key(item) in [0, keys).
template <class Key>
std::vector<std::uint32_t> counting_sort(const std::vector<std::uint32_t>& items,
                                         std::size_t keys, Key key) {
  std::vector<std::uint32_t> start(keys + 1, 0);
  for (auto it : items) ++start[key(it) + 1];
  for (std::size_t k = 0; k < keys; ++k) start[k + 1] += start[k];
  std::vector<std::uint32_t> out(items.size());
  for (auto it : items) out[start[key(it)]++] = it;
  return out;
}

}  // namespace

PropertySuffixTree PropertySuffixTree::build(std::span<const Symbol> text,
                                             std::size_t sigma,
                                             const PropertyArray& pi,
                                             PstBuildStats* stats) {
  const std::size_t n = text.size();
  if (pi.size() != n)
    throw ValidationError("property array length differs from the text");

  PropertySuffixTree out;
  out.sigma_ = sigma;
  out.text_.assign(text.begin(), text.end());

  const SuffixTree st(text, sigma);
  const auto root = st.root();

  // Phase 1: locus of every S[i, pi[i]). The walk for i starts at the suffix
  // link of the nearest explicit ancestor of the previous locus and reads only
  // the first letter of each edge.
  std::vector<std::int32_t> below(n);
  std::vector<bool> is_explicit(n);
  std::uint64_t steps = 0;
  std::int32_t anchor = root;
  for (std::size_t i = 0; i < n; ++i) {
    const auto len = static_cast<std::int32_t>(pi.span_at(i));
    std::int32_t x = root;
    if (i > 0 && anchor != root) {
      x = st.node(anchor).link;
      ++steps;
    }
    std::int32_t w = x;
    while (st.node(x).depth < len) {
      w = st.child(x, text[i + static_cast<std::size_t>(st.node(x).depth)]);
      ++steps;
      if (st.node(w).depth > len) break;
      x = w;
    }
    is_explicit[i] = st.node(x).depth == len;
    below[i] = is_explicit[i] ? x : w;
    anchor = x;
  }

  // Phase 2: group loci per suffix-tree node; implicit ones are ordered by
  // depth so each edge can be subdivided top-down.
  const std::size_t st_nodes = st.node_count();
  std::vector<std::uint32_t> exp_items, imp_items;
  for (std::size_t i = 0; i < n; ++i)
    (is_explicit[i] ? exp_items : imp_items).push_back(static_cast<std::uint32_t>(i));
  auto by_node = [&](std::uint32_t i) { return static_cast<std::size_t>(below[i]); };
  const auto exp_sorted = counting_sort(exp_items, st_nodes, by_node);
  const auto imp_by_len = counting_sort(imp_items, n + 1, [&](std::uint32_t i) {
    return static_cast<std::size_t>(pi.span_at(i));
  });
  const auto imp_sorted = counting_sort(imp_by_len, st_nodes, by_node);
  auto ranges = [&](const std::vector<std::uint32_t>& sorted) {
    std::vector<std::uint32_t> start(st_nodes + 1, 0);
    for (auto i : sorted) ++start[below[i] + 1];
    for (std::size_t k = 0; k < st_nodes; ++k) start[k + 1] += start[k];
    return start;
  };
  const auto exp_start = ranges(exp_sorted);
  const auto imp_start = ranges(imp_sorted);

  // Phase 3: bottom-up trim. A suffix-tree node survives if it is the root,
  // carries entries, or keeps at least two surviving subtrees; implicit loci
  // on its incoming edge become a chain of terminals above it.
  std::vector<Draft> drafts;
  std::vector<std::uint32_t> draft_entries;
  draft_entries.reserve(n);
  std::vector<std::int32_t> reps;  // surviving representatives, per frame
  struct Frame {
    std::int32_t v;
    std::uint32_t next_slot;
    std::size_t reps_base;
  };
  std::vector<Frame> frames{{root, 0, 0}};
  std::int32_t root_draft = -1;

  auto make_draft = [&](std::uint32_t depth, std::span<const std::uint32_t> entries,
                        std::span<const std::int32_t> kids) {
    Draft d;
    d.depth = depth;
    d.entry_begin = static_cast<std::uint32_t>(draft_entries.size());
    draft_entries.insert(draft_entries.end(), entries.begin(), entries.end());
    d.entry_end = static_cast<std::uint32_t>(draft_entries.size());
    if (!entries.empty()) {
      d.label_pos = entries.front();
    } else if (!kids.empty()) {
      d.label_pos = drafts[kids.front()].label_pos;
    }
    std::int32_t prev = -1;
    for (auto k : kids) {
      if (prev < 0)
        d.first_child = k;
      else
        drafts[prev].next_sibling = k;
      prev = k;
    }
    drafts.push_back(d);
    return static_cast<std::int32_t>(drafts.size() - 1);
  };

  while (!frames.empty()) {
    Frame& f = frames.back();
    bool descended = false;
    while (f.next_slot < st.slots()) {
      const auto w = st.child(f.v, f.next_slot++);
      if (w == SuffixTree::kNone) continue;
      frames.push_back({w, 0, reps.size()});
      descended = true;
      break;
    }
    if (descended) continue;

    const auto v = f.v;
    const auto base = f.reps_base;
    frames.pop_back();
    const std::span<const std::int32_t> kids(reps.data() + base, reps.size() - base);
    const std::span<const std::uint32_t> own(exp_sorted.data() + exp_start[v],
                                             exp_start[v + 1] - exp_start[v]);
    std::int32_t rep = -1;
    const auto depth = static_cast<std::uint32_t>(st.node(v).depth);
    if (v == root || !own.empty() || kids.size() >= 2) {
      rep = make_draft(depth, own, kids);
    } else if (kids.size() == 1) {
      rep = kids.front();
    }
    reps.resize(base);
    if (v == root) {
      root_draft = rep;
      break;
    }
    // Terminals on the incoming edge, deepest first.
    std::uint32_t hi = imp_start[v + 1];
    const std::uint32_t lo = imp_start[v];
    while (hi > lo) {
      const auto len = pi.span_at(imp_sorted[hi - 1]);
      std::uint32_t g = hi;
      while (g > lo && pi.span_at(imp_sorted[g - 1]) == len) --g;
      const std::span<const std::uint32_t> group(imp_sorted.data() + g, hi - g);
      const std::int32_t single[1] = {rep};
      rep = make_draft(len, group,
                       rep < 0 ? std::span<const std::int32_t>()
                               : std::span<const std::int32_t>(single));
      hi = g;
    }
    if (rep >= 0) reps.push_back(rep);
  }

  // Phase 4: preorder layout.
  std::vector<std::uint32_t> final_id(drafts.size(), 0);
  struct Visit {
    std::int32_t draft;
    std::uint32_t parent;
    bool exit;
  };
  std::vector<Visit> visits{{root_draft, kNoParent, false}};
  std::vector<std::int32_t> order;
  order.reserve(drafts.size());
  while (!visits.empty()) {
    const auto [d, parent, exit] = visits.back();
    visits.pop_back();
    if (exit) {
      out.nodes_[final_id[d]].subtree_end =
          static_cast<std::uint32_t>(out.entries_.size());
      continue;
    }
    const auto id = static_cast<std::uint32_t>(out.nodes_.size());
    final_id[d] = id;
    order.push_back(d);
    const Draft& dr = drafts[d];
    Node node;
    node.parent = parent;
    node.depth = dr.depth;
    if (parent != kNoParent) {
      const auto pd = out.nodes_[parent].depth;
      node.edge_start = dr.label_pos + pd;
      node.edge_length = dr.depth - pd;
    }
    node.term_begin = static_cast<std::uint32_t>(out.entries_.size());
    out.entries_.insert(out.entries_.end(), draft_entries.begin() + dr.entry_begin,
                        draft_entries.begin() + dr.entry_end);
    node.term_end = static_cast<std::uint32_t>(out.entries_.size());
    out.nodes_.push_back(node);
    visits.push_back({d, id, true});
    std::vector<std::int32_t> kids;
    for (auto c = dr.first_child; c >= 0; c = drafts[c].next_sibling) kids.push_back(c);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) visits.push_back({*it, id, false});
  }
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    auto& node = out.nodes_[idx];
    node.child_begin = static_cast<std::uint32_t>(out.children_.size());
    for (auto c = drafts[order[idx]].first_child; c >= 0; c = drafts[c].next_sibling)
      out.children_.push_back(final_id[c]);
    node.child_count = static_cast<std::uint32_t>(out.children_.size()) - node.child_begin;
  }

  if (stats) {
    stats->locus_edge_steps = steps;
    stats->suffix_tree_nodes = st_nodes;
    stats->nodes = out.nodes_.size();
  }
  return out;
}

std::optional<PropertySuffixTree::Locus> PropertySuffixTree::locate(
    std::span<const Symbol> pattern) const {
  std::uint32_t v = 0;
  std::size_t d = 0;
  const std::size_t m = pattern.size();
  while (d < m) {
    const Node& nv = nodes_[v];
    std::uint32_t next = kNoParent;
    for (std::uint32_t k = 0; k < nv.child_count; ++k) {
      const auto w = children_[nv.child_begin + k];
      if (first_letter(w) == pattern[d]) {
        next = w;
        break;
      }
    }
    if (next == kNoParent) return std::nullopt;
    const Node& nw = nodes_[next];
    const std::size_t take = std::min<std::size_t>(nw.edge_length, m - d);
    if (!std::equal(pattern.begin() + static_cast<std::ptrdiff_t>(d),
                    pattern.begin() + static_cast<std::ptrdiff_t>(d + take),
                    text_.begin() + nw.edge_start))
      return std::nullopt;
    d += take;
    v = next;
  }
  return Locus{v, static_cast<std::uint32_t>(m), nodes_[v].depth == m};
}

std::size_t PropertySuffixTree::count(std::span<const Symbol> pattern) const {
  const auto locus = locate(pattern);
  if (!locus) return 0;
  const Node& v = nodes_[locus->node];
  return v.subtree_end - v.term_begin;
}

std::vector<std::size_t> PropertySuffixTree::report(
    std::span<const Symbol> pattern) const {
  std::vector<std::size_t> out;
  const auto locus = locate(pattern);
  if (!locus) return out;
  const Node& v = nodes_[locus->node];
  out.assign(entries_.begin() + v.term_begin, entries_.begin() + v.subtree_end);
  std::sort(out.begin(), out.end());
  return out;
}

void PropertySuffixTree::save(std::ostream& out) const {
  detail::BinaryWriter w(out);
  w.magic("PST1");
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(sigma_));
  w.bytes(text_);
  w.u64(nodes_.size());
  for (const Node& v : nodes_) {
    w.u32(v.parent);
    w.u32(v.edge_start);
    w.u32(v.edge_length);
    w.u32(v.child_begin);
    w.u32(v.child_count);
    w.u32(v.term_begin);
    w.u32(v.term_end);
    w.u32(v.subtree_end);
  }
  w.u32s(children_);
  w.u32s(entries_);
}

PropertySuffixTree PropertySuffixTree::load(std::istream& in) {
  detail::BinaryReader r(in);
  r.expect_magic("PST1");
  if (r.u32() != kFormatVersion) throw LoadError("unsupported PST1 version");
  PropertySuffixTree t;
  t.sigma_ = r.u32();
  if (t.sigma_ == 0 || t.sigma_ > kMaxAlphabetSize) throw LoadError("bad alphabet size");
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 32;
  t.text_ = r.bytes(kLimit);
  for (auto c : t.text_)
    if (c >= t.sigma_) throw LoadError("text letter outside alphabet");
  const auto count = r.u64();
  if (count == 0 || count > 2 * t.text_.size() + 1) throw LoadError("bad node count");
  t.nodes_.resize(count);
  for (auto& v : t.nodes_) {
    v.parent = r.u32();
    v.edge_start = r.u32();
    v.edge_length = r.u32();
    v.child_begin = r.u32();
    v.child_count = r.u32();
    v.term_begin = r.u32();
    v.term_end = r.u32();
    v.subtree_end = r.u32();
  }
  t.children_ = r.u32s(count);
  t.entries_ = r.u32s(t.text_.size());

  const auto n = t.text_.size();
  for (std::size_t id = 0; id < count; ++id) {
    auto& v = t.nodes_[id];
    if (id == 0) {
      if (v.parent != kNoParent || v.edge_length != 0) throw LoadError("bad root");
    } else {
      if (v.parent >= id) throw LoadError("node parent out of order");
      v.depth = t.nodes_[v.parent].depth + v.edge_length;
      if (v.edge_length == 0 || std::uint64_t{v.edge_start} + v.edge_length > n)
        throw LoadError("edge label out of range");
    }
    if (std::uint64_t{v.child_begin} + v.child_count > t.children_.size())
      throw LoadError("child range out of range");
    if (v.term_begin > v.term_end || v.term_end > v.subtree_end ||
        v.subtree_end > t.entries_.size())
      throw LoadError("terminal range out of range");
  }
  for (auto c : t.children_)
    if (c == 0 || c >= count) throw LoadError("child id out of range");
  for (auto e : t.entries_)
    if (e >= n) throw LoadError("entry out of range");
  return t;
}

}  // namespace windex
