#include "windex/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace windex {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

Alphabet::Alphabet(std::string_view letters) : letters_(letters) {
  rank_.fill(-1);
  if (letters_.empty()) throw ValidationError("alphabet is empty");
  if (letters_.size() > kMaxAlphabetSize)
    throw ValidationError("alphabet larger than 128 letters");
  std::sort(letters_.begin(), letters_.end());
  for (std::size_t r = 0; r < letters_.size(); ++r) {
    const auto c = static_cast<unsigned char>(letters_[r]);
    if (c <= 0x20 || c >= 0x7f || c == ':' || c == '#')
      throw ValidationError(std::string("invalid alphabet letter '") +
                            letters_[r] + "'");
    if (rank_[c] >= 0)
      throw ValidationError(std::string("duplicate alphabet letter '") +
                            letters_[r] + "'");
    rank_[c] = static_cast<std::int16_t>(r);
  }
}

std::optional<Text> Alphabet::encode(std::string_view s) const {
  Text out;
  out.reserve(s.size());
  for (char c : s) {
    auto r = rank(c);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  return out;
}

std::string Alphabet::decode(std::span<const Symbol> text) const {
  std::string out;
  out.reserve(text.size());
  for (Symbol c : text) out.push_back(letters_.at(c));
  return out;
}

LogProb LogProb::from_linear(double p) {
  if (p <= 0.0) return zero();
  return LogProb(std::log2(p));
}

double LogProb::linear() const noexcept { return std::exp2(log2_); }

bool LogProb::at_least_reciprocal(double z) const noexcept {
  if (is_zero()) return false;
  return std::exp2(log2_ + std::log2(z)) >= 1.0 - kCompareSlack;
}

std::int64_t LogProb::floor_times(double z) const noexcept {
  if (is_zero()) return 0;
  return static_cast<std::int64_t>(
      std::floor(std::exp2(log2_ + std::log2(z)) + kCompareSlack));
}

std::size_t family_size(double z) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw ValidationError("threshold z must be a positive finite number");
  const auto k = LogProb::one().floor_times(z);
  if (k < 1) throw ValidationError("floor(z) must be at least 1");
  return static_cast<std::size_t>(k);
}

PropertyArray::PropertyArray(std::vector<std::uint32_t> ends)
    : ends_(std::move(ends)) {
  if (!is_valid(ends_)) throw ValidationError("invalid property array");
}

bool PropertyArray::is_valid(std::span<const std::uint32_t> ends) {
  const std::size_t n = ends.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (ends[i] < i || ends[i] > n) return false;
    if (i > 0 && ends[i] < ends[i - 1]) return false;
  }
  return true;
}

WeightedSequence::WeightedSequence(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  const std::size_t s = alphabet_.size();
  if (s == 0) throw ValidationError("alphabet is empty");
  if (probs_.size() % s != 0)
    throw ValidationError("probability table is not a multiple of sigma");
  n_ = probs_.size() / s;
  logs_.resize(probs_.size());
  heavy_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    std::size_t best = 0;
    for (std::size_t c = 0; c < s; ++c) {
      const double p = probs_[i * s + c];
      if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("position " + std::to_string(i + 1) +
                              ": probability outside [0,1]");
      sum += p;
      if (p > probs_[i * s + best]) best = c;
      logs_[i * s + c] = LogProb::from_linear(p);
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      std::ostringstream msg;
      msg << "position " << i + 1 << ": probabilities sum to "
          << std::setprecision(12) << sum;
      throw ValidationError(msg.str());
    }
    heavy_[i] = static_cast<Symbol>(best);
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
  const auto h = s.find('#');
  return h == std::string_view::npos ? s : s.substr(0, h);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

WeightedSequence parse_weighted_sequence(std::istream& in, ParseOptions opts) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<Alphabet> alphabet;
  std::size_t n = 0;
  std::vector<double> probs;
  std::size_t rows = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto fields = split_ws(line);
    if (!alphabet) {
      if (fields.size() != 3 || fields[0] != "WSEQ")
        throw ParseError(line_no, "expected header 'WSEQ <n> <alphabet>'");
      unsigned long long parsed = 0;
      const auto [p, ec] = std::from_chars(
          fields[1].data(), fields[1].data() + fields[1].size(), parsed);
      if (ec != std::errc() || p != fields[1].data() + fields[1].size() ||
          parsed == 0)
        throw ParseError(line_no, "invalid sequence length");
      n = static_cast<std::size_t>(parsed);
      try {
        alphabet.emplace(fields[2]);
      } catch (const ValidationError& e) {
        throw ParseError(line_no, e.what());
      }
      probs.reserve(n * alphabet->size());
      continue;
    }
    if (rows == n) throw ParseError(line_no, "more rows than declared");
    const std::size_t s = alphabet->size();
    std::vector<double> row(s, 0.0);
    std::vector<bool> seen(s, false);
    for (auto field : fields) {
      const auto colon = field.rfind(':');
      if (colon == std::string_view::npos || colon == 0 ||
          colon + 1 == field.size())
        throw ParseError(line_no, "expected 'letter:prob', got '" +
                                      std::string(field) + "'");
      if (colon != 1)
        throw ParseError(line_no, "letters are single characters");
      const auto r = alphabet->rank(field[0]);
      if (!r)
        throw ValidationError("line " + std::to_string(line_no) +
                              ": unknown letter '" + field[0] + "'");
      if (seen[*r])
        throw ParseError(line_no, std::string("letter '") + field[0] +
                                      "' given twice");
      seen[*r] = true;
      double value = 0.0;
      const char* first = field.data() + colon + 1;
      const char* last = field.data() + field.size();
      const auto [p, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || p != last)
        throw ParseError(line_no, "invalid probability '" +
                                      std::string(first, last) + "'");
      row[*r] = value;
    }
    if (opts.renormalize) {
      double sum = 0.0;
      for (double v : row) sum += v;
      if (sum > 0.0)
        for (double& v : row) v /= sum;
    }
    probs.insert(probs.end(), row.begin(), row.end());
    ++rows;
  }
  if (!alphabet) throw ParseError(line_no, "missing WSEQ header");
  if (rows != n)
    throw ParseError(line_no, "expected " + std::to_string(n) + " rows, got " +
                                  std::to_string(rows));
  return WeightedSequence(std::move(*alphabet), std::move(probs));
}

WeightedSequence parse_weighted_sequence(std::string_view text,
                                         ParseOptions opts) {
  std::istringstream in{std::string(text)};
  return parse_weighted_sequence(in, opts);
}

WeightedSequence load_weighted_sequence(const std::string& path,
                                        ParseOptions opts) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_weighted_sequence(in, opts);
}

void write_weighted_sequence(std::ostream& out, const WeightedSequence& x) {
  const auto& a = x.alphabet();
  out << "WSEQ " << x.size() << ' ' << a.letters() << '\n';
  const auto old = out.precision(12);
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool first = true;
    for (std::size_t c = 0; c < a.size(); ++c) {
      const double p = x.prob(i, static_cast<Symbol>(c));
      if (p == 0.0) continue;
      if (!first) out << ' ';
      out << a.letter(static_cast<Symbol>(c)) << ':' << p;
      first = false;
    }
    out << '\n';
  }
  out.precision(old);
}

LogProb match_probability(const WeightedSequence& x,
                          std::span<const Symbol> pattern, std::size_t pos) {
  if (pos > x.size() || pattern.size() > x.size() - pos)
    throw RangeError("pattern window exceeds the sequence");
  LogProb p = LogProb::one();
  for (std::size_t j = 0; j < pattern.size(); ++j) {
    p *= x.log_prob(pos + j, pattern[j]);
    if (p.is_zero()) break;
  }
  return p;
}

LogProb match_probability(const WeightedSequence& x, std::string_view pattern,
                          std::size_t pos) {
  if (pos > x.size() || pattern.size() > x.size() - pos)
    throw RangeError("pattern window exceeds the sequence");
  const auto enc = x.alphabet().encode(pattern);
  if (!enc) return LogProb::zero();
  return match_probability(x, *enc, pos);
}

FactorCounts factor_counts(const WeightedSequence& x, double z,
                           std::string_view pattern, std::size_t pos) {
  const LogProb p = match_probability(x, pattern, pos);
  FactorCounts out;
  out.t = p.floor_times(z);
  out.m = out.t;
  const std::size_t next = pos + pattern.size();
  if (next < x.size() && out.t > 0) {
    for (std::size_t c = 0; c < x.sigma(); ++c)
      out.m -= (p * x.log_prob(next, static_cast<Symbol>(c))).floor_times(z);
  }
  return out;
}

namespace {

// Depth-first walk over all P with floor(P_X(P, pos) * z) > 0.
template <class Visit>
void walk_solid(const WeightedSequence& x, double z, std::size_t pos,
                Visit&& visit) {
  struct Frame {
    std::string label;
    LogProb p;
  };
  std::vector<Frame> stack{{std::string(), LogProb::one()}};
  const auto& a = x.alphabet();
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const std::int64_t t = f.p.floor_times(z);
    std::int64_t m = t;
    const std::size_t next = pos + f.label.size();
    if (next < x.size()) {
      for (std::size_t c = x.sigma(); c-- > 0;) {
        const LogProb q = f.p * x.log_prob(next, static_cast<Symbol>(c));
        const std::int64_t tc = q.floor_times(z);
        if (tc <= 0) continue;
        m -= tc;
        stack.push_back({f.label + a.letter(static_cast<Symbol>(c)), q});
      }
    }
    visit(f.label, t, m);
  }
}

}  // namespace

std::vector<std::string> enumerate_multiset(const WeightedSequence& x, double z,
                                            std::size_t pos) {
  if (pos > x.size()) throw RangeError("position past the end");
  std::vector<std::string> out;
  walk_solid(x, z, pos, [&](const std::string& label, std::int64_t,
                            std::int64_t m) {
    for (std::int64_t r = 0; r < m; ++r) out.push_back(label);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> solid_factors_at(const WeightedSequence& x, double z,
                                          std::size_t pos) {
  if (pos > x.size()) throw RangeError("position past the end");
  std::vector<std::string> out;
  walk_solid(x, z, pos, [&](const std::string& label, std::int64_t t,
                            std::int64_t) {
    if (t > 0) out.push_back(label);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> naive_weighted_occurrences(const WeightedSequence& x,
                                                    double z,
                                                    std::string_view pattern) {
  std::vector<std::size_t> out;
  if (pattern.size() > x.size()) return out;
  for (std::size_t i = 0; i < x.size() && i + pattern.size() <= x.size(); ++i)
    if (match_probability(x, pattern, i).at_least_reciprocal(z))
      out.push_back(i);
  return out;
}

std::vector<std::size_t> naive_occurrences_at_least(const WeightedSequence& x,
                                                    double threshold,
                                                    std::string_view pattern) {
  if (threshold > 0.0) return naive_weighted_occurrences(x, 1.0 / threshold, pattern);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    out.push_back(i);
  return out;
}

std::vector<std::size_t> naive_property_occurrences(std::string_view s,
                                                    const PropertyArray& pi,
                                                    std::string_view pattern) {
  if (pi.size() != s.size())
    throw ValidationError("property array length differs from the text");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.size() && i + pattern.size() <= s.size(); ++i) {
    if (s.substr(i, pattern.size()) != pattern) continue;
    if (i + pattern.size() <= pi[i]) out.push_back(i);
  }
  return out;
}

}  // namespace windex
