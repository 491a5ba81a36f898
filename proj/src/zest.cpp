#include "windex/zest.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <set>

namespace windex {

std::size_t family_count(std::span<const Text> strings,
                         std::span<const PropertyArray> properties,
                         std::span<const Symbol> pattern, std::size_t pos) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < strings.size(); ++j) {
    const Text& s = strings[j];
    if (pos >= s.size()) continue;
    if (pos + pattern.size() > properties[j][pos]) continue;
    if (std::equal(pattern.begin(), pattern.end(), s.begin() + pos)) ++count;
  }
  return count;
}

// --- SolidFactorTrie -------------------------------------------------------

std::int32_t SolidFactorTrie::allocate(std::int32_t parent, Symbol letter,
                                       std::uint32_t depth, LogProb p) {
  std::int32_t v;
  if (!free_.empty()) {
    v = free_.back();
    free_.pop_back();
  } else {
    v = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    children_.resize(children_.size() + sigma_, kNone);
  }
  Node& u = nodes_[v];
  u = Node{};
  u.parent = parent;
  u.letter = letter;
  u.birth = position_;
  u.birth_depth = depth;
  u.birth_log = p.log2();
  u.live = true;
  ++live_;
  return v;
}

void SolidFactorTrie::release(std::int32_t v) {
  nodes_[v].live = false;
  std::fill_n(children_.begin() + static_cast<std::ptrdiff_t>(v * sigma_),
              sigma_, kNone);
  free_.push_back(v);
  --live_;
}

std::uint32_t SolidFactorTrie::pending_requests(std::int32_t v) const {
  std::uint32_t total = 0;
  for (auto r = nodes_[v].requests; r != kNone; r = requests_[r].next)
    total += requests_[r].remaining;
  return total;
}

std::vector<SolidFactorTrie::LabelInfo> SolidFactorTrie::labels(
    const Alphabet& alphabet) const {
  std::vector<LabelInfo> out;
  std::vector<std::int32_t> index(nodes_.size(), kNone);
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (!nodes_[v].live) continue;
    std::string label;
    for (auto u = static_cast<std::int32_t>(v); u != root_; u = nodes_[u].parent)
      label.push_back(alphabet.letter(nodes_[u].letter));
    std::reverse(label.begin(), label.end());
    index[v] = static_cast<std::int32_t>(out.size());
    out.push_back({std::move(label), {}});
  }
  for (std::size_t j = 0; j < token_node_.size(); ++j)
    out[index[token_node_[j]]].tokens.push_back(j);
  std::sort(out.begin(), out.end(),
            [](const LabelInfo& a, const LabelInfo& b) { return a.label < b.label; });
  return out;
}

void SolidFactorTrie::dump(std::ostream& out, const Alphabet& alphabet) const {
  std::vector<std::vector<std::size_t>> held(nodes_.size());
  for (std::size_t j = 0; j < token_node_.size(); ++j)
    held[token_node_[j]].push_back(j + 1);
  const auto old = out.precision(6);
  out << "T_" << position_ + 1 << '\n';
  std::vector<std::int32_t> stack{root_};
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    const auto d = depth(v);
    out << std::string(2 * (d + 1), ' ');
    if (v == root_)
      out << '.';
    else
      out << alphabet.letter(nodes_[v].letter);
    out << " p=" << prob(v).linear() << " tokens=[";
    for (std::size_t t = 0; t < held[v].size(); ++t)
      out << (t ? "," : "") << held[v][t];
    out << "] requests=" << pending_requests(v) << '\n';
    for (std::size_t c = sigma_; c-- > 0;) {
      const auto w = child(v, static_cast<Symbol>(c));
      if (w != kNone) stack.push_back(w);
    }
  }
  out.precision(old);
}

// --- ZEstimationBuilder ----------------------------------------------------

ZEstimationBuilder::ZEstimationBuilder(const WeightedSequence& x, double z)
    : x_(&x), z_(z), k_(family_size(z)) {
  const std::size_t n = x.size();
  trie_.sigma_ = x.sigma();
  trie_.position_ = static_cast<std::uint32_t>(n);
  trie_.heavy_prefix_.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    trie_.heavy_prefix_[i + 1] =
        trie_.heavy_prefix_[i] + x.log_prob(i, x.heavy_letter(i)).log2();
  trie_.root_ = trie_.allocate(SolidFactorTrie::kNone, 0, 0, LogProb::one());
  ++stats_.nodes_created;
  trie_.nodes_[trie_.root_].tokens = static_cast<std::uint32_t>(k_);
  trie_.token_node_.assign(k_, static_cast<std::uint32_t>(trie_.root_));
  strings_.assign(k_, Text(n, 0));
  ends_.assign(k_, std::vector<std::uint32_t>(n, 0));
  stats_.max_live_nodes = trie_.live_;
}

std::int64_t ZEstimationBuilder::multiplicity(std::int32_t v) const {
  const LogProb p = trie_.prob(v);
  std::int64_t m = count_at(p);
  const std::size_t next = trie_.position_ + trie_.depth(v);
  if (next < x_->size())
    for (std::size_t c = 0; c < x_->sigma(); ++c)
      m -= count_at(p * x_->log_prob(next, static_cast<Symbol>(c)));
  return m;
}

void ZEstimationBuilder::build_light_subtree(Symbol c, std::size_t pos) {
  auto& t = trie_;
  const auto heavy_root = t.child(t.root_, x_->heavy_letter(pos));
  const auto top = t.allocate(t.root_, c, 1, x_->log_prob(pos, c));
  t.child(t.root_, c) = top;
  ++t.nodes_[t.root_].child_count;
  ++last_.nodes_created;

  // (light node, node with the same label under the heavy letter)
  std::vector<std::pair<std::int32_t, std::int32_t>> stack{{top, heavy_root}};
  while (!stack.empty()) {
    const auto [u, v] = stack.back();
    stack.pop_back();
    const LogProb p = t.prob(u);
    const auto d = t.depth(u);
    std::int64_t m = count_at(p);
    const std::size_t next = pos + d;
    if (next < x_->size()) {
      for (std::size_t e = 0; e < x_->sigma(); ++e) {
        const auto letter = static_cast<Symbol>(e);
        const LogProb q = p * x_->log_prob(next, letter);
        const std::int64_t tc = count_at(q);
        if (tc <= 0) continue;
        const auto vc = t.child(v, letter);
        if (vc == SolidFactorTrie::kNone)
          throw Error("solid factor trie: missing heavy counterpart");
        const auto w = t.allocate(u, letter, d + 1, q);
        t.child(u, letter) = w;
        ++t.nodes_[u].child_count;
        ++last_.nodes_created;
        stack.emplace_back(w, vc);
        m -= tc;
      }
    }
    if (m < 0) throw Error("solid factor trie: negative multiplicity");
    if (m == 0) continue;
    t.requests_.push_back({u, static_cast<std::uint32_t>(m), c, t.nodes_[v].requests});
    t.nodes_[v].requests = static_cast<std::int32_t>(t.requests_.size() - 1);
    touched_.push_back(v);
    last_.token_requests += static_cast<std::uint64_t>(m);
  }
}

void ZEstimationBuilder::place(std::int32_t v, std::uint32_t token) {
  auto& node = trie_.nodes_[v];
  ++node.tokens;
  ++node.processed;
  trie_.token_node_[token] = static_cast<std::uint32_t>(v);
  touched_.push_back(v);
}

void ZEstimationBuilder::move_token(std::uint32_t token, Symbol heavy) {
  auto& t = trie_;
  auto v = static_cast<std::int32_t>(t.token_node_[token]);
  --t.nodes_[v].tokens;
  const auto start_depth = t.depth(v);
  Symbol letter = heavy;
  std::uint64_t steps = 0;
  for (;;) {
    if (v == t.root_) {
      place(v, token);
      break;
    }
    auto& node = t.nodes_[v];
    if (node.requests != SolidFactorTrie::kNone) {
      auto& r = t.requests_[node.requests];
      letter = r.letter;
      const auto target = r.target;
      if (--r.remaining == 0) node.requests = r.next;
      place(target, token);
      break;
    }
    if (static_cast<std::int64_t>(node.processed) < multiplicity(v)) {
      place(v, token);
      break;
    }
    const auto parent = node.parent;
    if (node.child_count == 0 && node.tokens == 0) {
      t.child(parent, node.letter) = SolidFactorTrie::kNone;
      --t.nodes_[parent].child_count;
      t.release(v);
      ++last_.nodes_deleted;
    }
    v = parent;
    ++steps;
  }
  const auto settled = static_cast<std::int32_t>(t.token_node_[token]);
  const auto depth = t.depth(settled);
  const std::size_t pos = t.position_;
  strings_[token][pos] = letter;
  ends_[token][pos] = static_cast<std::uint32_t>(pos + depth);
  if (steps + depth > start_depth) stats_.walk_bound_held = false;
  last_.token_walk_steps += steps;
}

const StepStats& ZEstimationBuilder::step() {
  if (done()) throw Error("z-estimation builder already finished");
  auto& t = trie_;
  last_ = StepStats{};
  --t.position_;
  const std::size_t pos = t.position_;
  last_.position = pos;
  const Symbol heavy = x_->heavy_letter(pos);

  const auto old_root = t.root_;
  t.root_ = t.allocate(SolidFactorTrie::kNone, 0, 0, LogProb::one());
  ++last_.nodes_created;
  t.nodes_[old_root].parent = t.root_;
  t.nodes_[old_root].letter = heavy;
  t.child(t.root_, heavy) = old_root;
  t.nodes_[t.root_].child_count = 1;

  t.requests_.clear();
  touched_.clear();
  for (std::size_t c = 0; c < x_->sigma(); ++c) {
    const auto letter = static_cast<Symbol>(c);
    if (letter == heavy) continue;
    if (count_at(x_->log_prob(pos, letter)) > 0) build_light_subtree(letter, pos);
  }
  if (trace_) {
    *trace_ << "# requests placed at position " << pos + 1 << '\n';
    t.dump(*trace_, x_->alphabet());
  }

  for (std::uint32_t j = 0; j < k_; ++j) move_token(j, heavy);

  for (auto v : touched_) {
    if (t.nodes_[v].live && t.nodes_[v].requests != SolidFactorTrie::kNone)
      throw Error("solid factor trie: unanswered token request");
    t.nodes_[v].processed = 0;
    t.nodes_[v].requests = SolidFactorTrie::kNone;
  }
  if (trace_) {
    *trace_ << "# tokens moved at position " << pos + 1 << '\n';
    t.dump(*trace_, x_->alphabet());
  }

  stats_.nodes_created += last_.nodes_created;
  stats_.nodes_deleted += last_.nodes_deleted;
  stats_.token_walk_steps += last_.token_walk_steps;
  stats_.token_requests += last_.token_requests;
  stats_.max_live_nodes =
      std::max<std::uint64_t>(stats_.max_live_nodes, t.live_);
  return last_;
}

void ZEstimationBuilder::run() {
  while (!done()) step();
}

ZEstimation ZEstimationBuilder::finish() && {
  if (!done()) throw Error("z-estimation builder has positions left");
  ZEstimation out;
  out.z = z_;
  out.strings = std::move(strings_);
  out.properties.reserve(ends_.size());
  for (auto& e : ends_) out.properties.emplace_back(std::move(e));
  return out;
}

ZEstimation build_z_estimation(const WeightedSequence& x, double z,
                               ConstructionStats* stats, std::ostream* trace) {
  ZEstimationBuilder builder(x, z);
  builder.set_trace(trace);
  builder.run();
  if (stats) *stats = builder.stats();
  return std::move(builder).finish();
}

bool verify_z_estimation(const WeightedSequence& x, double z,
                         const ZEstimation& fam) {
  const std::size_t n = x.size();
  if (fam.size() != family_size(z) || fam.properties.size() != fam.size())
    return false;
  for (std::size_t j = 0; j < fam.size(); ++j) {
    if (fam.strings[j].size() != n || fam.properties[j].size() != n) return false;
    if (!PropertyArray::is_valid(fam.properties[j].ends())) return false;
    for (Symbol c : fam.strings[j])
      if (c >= x.sigma()) return false;
  }
  const auto& a = x.alphabet();
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::string> closure;
    auto add_prefixes = [&](const std::string& s) {
      for (std::size_t len = 0; len <= s.size(); ++len) {
        const std::string p = s.substr(0, len);
        closure.insert(p);
        if (i + len < n)
          for (char c : a.letters()) closure.insert(p + c);
      }
    };
    for (const auto& s : enumerate_multiset(x, z, i)) add_prefixes(s);
    for (std::size_t j = 0; j < fam.size(); ++j) {
      const auto& s = fam.strings[j];
      add_prefixes(a.decode(std::span<const Symbol>(s).subspan(
          i, fam.properties[j].span_at(i))));
    }
    for (const auto& p : closure) {
      const auto enc = *a.encode(p);
      const auto have = family_count(fam.strings, fam.properties, enc, i);
      const auto want = factor_counts(x, z, p, i).t;
      if (static_cast<std::int64_t>(have) != want) return false;
    }
  }
  return true;
}

}  // namespace windex
