#include "windex/weighted_index.hpp"

#include <algorithm>
#include <unordered_set>

#include "windex/binary_io.hpp"

namespace windex {

namespace {
constexpr std::uint32_t kIndexVersion = 1;
}

std::uint32_t QueryContext::next_epoch() {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  return epoch_;
}

WeightedIndex WeightedIndex::build(const WeightedSequence& x, double z,
                                   IndexBuildStats* stats) {
  ConstructionStats cstats;
  const auto fam = build_z_estimation(x, z, &cstats);
  PstBuildStats pstats;
  auto index = from_family(x.alphabet(), z, fam.strings, fam.properties, &pstats);
  if (stats) {
    stats->construction = cstats;
    stats->pst = pstats;
    stats->blocks = index.blocks_;
    stats->block_length = index.n_;
  }
  return index;
}

WeightedIndex WeightedIndex::from_family(const Alphabet& alphabet, double z,
                                         std::span<const Text> strings,
                                         std::span<const PropertyArray> properties,
                                         PstBuildStats* stats) {
  if (strings.empty()) throw ValidationError("empty string family");
  if (strings.size() != properties.size())
    throw ValidationError("family strings and properties differ in number");
  const std::size_t n = strings.front().size();
  const std::size_t k = strings.size();
  if (n * k >= UINT32_MAX) throw ValidationError("family too large to index");

  Text text;
  text.reserve(n * k);
  std::vector<std::uint32_t> ends;
  ends.reserve(n * k);
  for (std::size_t j = 0; j < k; ++j) {
    if (strings[j].size() != n || properties[j].size() != n)
      throw ValidationError("family strings differ in length");
    text.insert(text.end(), strings[j].begin(), strings[j].end());
    const auto offset = static_cast<std::uint32_t>(j * n);
    for (auto e : properties[j].ends()) ends.push_back(offset + e);
  }

  WeightedIndex index;
  index.alphabet_ = alphabet;
  index.z_ = z;
  index.n_ = n;
  index.blocks_ = k;
  index.pst_ = PropertySuffixTree::build(text, alphabet.size(),
                                         PropertyArray(std::move(ends)), stats);
  index.index_documents();
  return index;
}

void WeightedIndex::index_documents() {
  const auto entries = pst_.entries();
  docs_.resize(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e)
    docs_[e] = static_cast<std::uint32_t>(entries[e] % n_);

  // Small-to-large merge of position sets, in reverse preorder.
  const auto nodes = pst_.nodes();
  const auto children = pst_.children();
  distinct_.assign(nodes.size(), 0);
  std::vector<std::unordered_set<std::uint32_t>> pool;
  std::vector<std::int32_t> owner(nodes.size(), -1);
  std::vector<std::int32_t> spare;
  for (std::size_t v = nodes.size(); v-- > 0;) {
    const auto& node = nodes[v];
    std::int32_t best = -1;
    for (std::uint32_t c = 0; c < node.child_count; ++c) {
      const auto s = owner[children[node.child_begin + c]];
      if (best < 0 || pool[s].size() > pool[best].size()) best = s;
    }
    if (best < 0) {
      if (!spare.empty()) {
        best = spare.back();
        spare.pop_back();
      } else {
        best = static_cast<std::int32_t>(pool.size());
        pool.emplace_back();
      }
    }
    auto& into = pool[best];
    for (std::uint32_t c = 0; c < node.child_count; ++c) {
      const auto s = owner[children[node.child_begin + c]];
      if (s == best) continue;
      into.insert(pool[s].begin(), pool[s].end());
      pool[s] = {};
      spare.push_back(s);
    }
    for (auto e = node.term_begin; e < node.term_end; ++e) into.insert(docs_[e]);
    distinct_[v] = static_cast<std::uint32_t>(into.size());
    owner[v] = best;
  }
}

std::optional<PropertySuffixTree::Locus> WeightedIndex::locate(
    std::string_view pattern) const {
  const auto enc = alphabet_.encode(pattern);
  if (!enc) return std::nullopt;
  return pst_.locate(*enc);
}

bool WeightedIndex::decide(std::string_view pattern) const {
  return locate(pattern).has_value();
}

std::size_t WeightedIndex::count(std::string_view pattern) const {
  const auto locus = locate(pattern);
  return locus ? distinct_[locus->node] : 0;
}

std::vector<std::size_t> WeightedIndex::report(std::string_view pattern) const {
  std::vector<std::size_t> out;
  const auto locus = locate(pattern);
  if (!locus) return out;
  const auto& v = pst_.node(locus->node);
  out.assign(docs_.begin() + v.term_begin, docs_.begin() + v.subtree_end);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> WeightedIndex::report(std::string_view pattern,
                                               QueryContext& ctx) const {
  return report_frequent(pattern, 1, ctx);
}

std::vector<std::size_t> WeightedIndex::report_frequent(std::string_view pattern,
                                                        std::size_t min_entries,
                                                        QueryContext& ctx) const {
  std::vector<std::size_t> out;
  if (ctx.stamp_.size() < n_) throw ValidationError("query context too small");
  const auto locus = locate(pattern);
  if (!locus) return out;
  if (min_entries == 0) min_entries = 1;
  const auto epoch = ctx.next_epoch();
  const auto& v = pst_.node(locus->node);
  for (auto e = v.term_begin; e < v.subtree_end; ++e) {
    const auto pos = docs_[e];
    if (ctx.stamp_[pos] != epoch) {
      ctx.stamp_[pos] = epoch;
      ctx.counter_[pos] = 0;
    }
    if (++ctx.counter_[pos] == min_entries) out.push_back(pos);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void WeightedIndex::save(std::ostream& out) const {
  detail::write_index(out, *this, 0, 0.0);
}

WeightedIndex WeightedIndex::load(std::istream& in) {
  std::uint8_t kind = 0;
  double eps = 0.0;
  return detail::read_index(in, kind, eps);
}

namespace detail {

void write_index(std::ostream& out, const WeightedIndex& index, std::uint8_t kind,
                 double eps) {
  BinaryWriter w(out);
  w.magic("WIX1");
  w.u32(kIndexVersion);
  w.u8(kind);
  w.f64(eps);
  w.f64(index.z_);
  w.u64(index.n_);
  w.u64(index.blocks_);
  w.str(index.alphabet_.letters());
  index.pst_.save(out);
  w.u32s(index.distinct_);
  if (!out) throw Error("failed to write index");
}

WeightedIndex read_index(std::istream& in, std::uint8_t& kind, double& eps) {
  BinaryReader r(in);
  r.expect_magic("WIX1");
  if (r.u32() != kIndexVersion) throw LoadError("unsupported WIX1 version");
  kind = r.u8();
  if (kind > 1) throw LoadError("unknown index kind");
  eps = r.f64();
  WeightedIndex index;
  index.z_ = r.f64();
  index.n_ = r.u64();
  index.blocks_ = r.u64();
  try {
    index.alphabet_ = Alphabet(r.str(kMaxAlphabetSize));
  } catch (const ValidationError& e) {
    throw LoadError(std::string("bad alphabet: ") + e.what());
  }
  index.pst_ = PropertySuffixTree::load(in);
  if (index.n_ == 0 || index.blocks_ == 0 ||
      index.n_ * index.blocks_ != index.pst_.text().size())
    throw LoadError("block metadata does not match the tree");
  if (index.pst_.sigma() != index.alphabet_.size())
    throw LoadError("alphabet does not match the tree");
  if (kind == 1 && !(eps > 0.0 && eps <= 1.0)) throw LoadError("bad eps");
  index.distinct_ = r.u32s(index.pst_.node_count());
  if (index.distinct_.size() != index.pst_.node_count())
    throw LoadError("distinct-count table size mismatch");
  const auto entries = index.pst_.entries();
  index.docs_.resize(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e)
    index.docs_[e] = static_cast<std::uint32_t>(entries[e] % index.n_);
  return index;
}

}  // namespace detail

SpecialWeightedSequence::SpecialWeightedSequence(
    Alphabet alphabet, std::vector<std::optional<Symbol>> letters,
    std::vector<double> probs)
    : alphabet_(std::move(alphabet)), letters_(std::move(letters)), probs_(std::move(probs)) {
  if (letters_.size() != probs_.size())
    throw ValidationError("letters and probabilities differ in length");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (!(probs_[i] >= 0.0 && probs_[i] <= 1.0))
      throw ValidationError("probability outside [0,1]");
    if (!letters_[i] && probs_[i] != 0.0)
      throw ValidationError("separator with positive probability");
    if (letters_[i] && *letters_[i] >= alphabet_.size())
      throw ValidationError("letter outside alphabet");
  }
}

LogProb SpecialWeightedSequence::match_probability(std::span<const Symbol> pattern,
                                                   std::size_t pos) const {
  if (pos > size() || pattern.size() > size() - pos)
    throw RangeError("pattern window exceeds the sequence");
  LogProb p = LogProb::one();
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    const auto c = letters_[pos + j];
    if (!c || *c != pattern[j]) return LogProb::zero();
    p *= LogProb::from_linear(probs_[pos + j]);
  }
  return p;
}

SpecialWeightedSequence to_special_weighted_sequence(const ZEstimation& fam,
                                                     const WeightedSequence& x) {
  const std::size_t n = x.size();
  const std::size_t k = fam.size();
  std::vector<std::optional<Symbol>> letters;
  std::vector<double> probs;
  letters.reserve(k * n + (k ? k - 1 : 0));
  probs.reserve(letters.capacity());
  for (std::size_t j = 0; j < k; ++j) {
    if (fam.strings[j].size() != n)
      throw ValidationError("family string length differs from the sequence");
    if (j > 0) {
      letters.emplace_back(std::nullopt);
      probs.push_back(0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Symbol c = fam.strings[j][i];
      letters.emplace_back(c);
      probs.push_back(x.prob(i, c));
    }
  }
  return SpecialWeightedSequence(x.alphabet(), std::move(letters), std::move(probs));
}

}  // namespace windex
