#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace windex {

// Slack used when validating that a distribution sums to one.
inline constexpr double kSumTolerance = 1e-6;
// Slack used by every `p >= 1/z` test and every `floor(p * z)`.
inline constexpr double kCompareSlack = 1e-9;
inline constexpr std::size_t kMaxAlphabetSize = 128;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Truncated, corrupt or mismatched binary index data.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Letters are handled internally by their rank in the alphabet.
using Symbol = std::uint8_t;
using Text = std::vector<Symbol>;

class Alphabet {
 public:
  Alphabet() { rank_.fill(-1); }
  // Letters may be given in any order; they are stored sorted. Duplicates,
  // whitespace and the format separators ':' and '#' are rejected.
  explicit Alphabet(std::string_view letters);

  std::size_t size() const noexcept { return letters_.size(); }
  const std::string& letters() const noexcept { return letters_; }
  char letter(Symbol rank) const { return letters_.at(rank); }

  std::optional<Symbol> rank(char c) const noexcept {
    const auto r = rank_[static_cast<unsigned char>(c)];
    if (r < 0) return std::nullopt;
    return static_cast<Symbol>(r);
  }

  // nullopt when `s` holds a letter outside the alphabet.
  std::optional<Text> encode(std::string_view s) const;
  std::string decode(std::span<const Symbol> text) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.letters_ == b.letters_;
  }

 private:
  std::string letters_;
  std::array<std::int16_t, 256> rank_{};
};

// Probability stored as a base-2 logarithm; zero is -infinity.
class LogProb {
 public:
  constexpr LogProb() = default;

  static LogProb from_linear(double p);
  static constexpr LogProb from_log2(double l) { return LogProb(l); }
  static constexpr LogProb one() { return LogProb(0.0); }
  static constexpr LogProb zero() {
    return LogProb(-std::numeric_limits<double>::infinity());
  }

  double log2() const noexcept { return log2_; }
  double linear() const noexcept;
  bool is_zero() const noexcept { return log2_ == zero().log2_; }

  LogProb operator*(LogProb o) const noexcept { return LogProb(log2_ + o.log2_); }
  LogProb& operator*=(LogProb o) noexcept {
    log2_ += o.log2_;
    return *this;
  }

  // p * z >= 1 - kCompareSlack
  bool at_least_reciprocal(double z) const noexcept;
  // floor(p * z + kCompareSlack)
  std::int64_t floor_times(double z) const noexcept;

  friend auto operator<=>(LogProb a, LogProb b) = default;

 private:
  explicit constexpr LogProb(double l) : log2_(l) {}
  double log2_ = 0.0;
};

// floor(z) under the slack rule; throws ValidationError when it is below 1.
std::size_t family_size(double z);

class PropertyArray {
 public:
  PropertyArray() = default;
  // ends[i] is the exclusive end of the longest admissible interval starting
  // at i (0-based), i.e. the value of the 1-based array at position i + 1.
  explicit PropertyArray(std::vector<std::uint32_t> ends);

  std::size_t size() const noexcept { return ends_.size(); }
  std::uint32_t operator[](std::size_t i) const { return ends_[i]; }
  std::span<const std::uint32_t> ends() const noexcept { return ends_; }
  // Length of the longest admissible factor starting at i.
  std::uint32_t span_at(std::size_t i) const {
    return ends_[i] - static_cast<std::uint32_t>(i);
  }

  static bool is_valid(std::span<const std::uint32_t> ends);

  friend bool operator==(const PropertyArray&, const PropertyArray&) = default;

 private:
  std::vector<std::uint32_t> ends_;
};

class WeightedSequence {
 public:
  WeightedSequence() = default;
  // `probs` is row-major: n rows of alphabet.size() probabilities.
  WeightedSequence(Alphabet alphabet, std::vector<double> probs);

  std::size_t size() const noexcept { return n_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t sigma() const noexcept { return alphabet_.size(); }

  double prob(std::size_t i, Symbol c) const { return probs_[i * sigma() + c]; }
  LogProb log_prob(std::size_t i, Symbol c) const {
    return logs_[i * sigma() + c];
  }
  std::span<const double> distribution(std::size_t i) const {
    return {probs_.data() + i * sigma(), sigma()};
  }
  // Most probable letter at i; ties go to the smallest letter.
  Symbol heavy_letter(std::size_t i) const { return heavy_[i]; }

 private:
  Alphabet alphabet_;
  std::size_t n_ = 0;
  std::vector<double> probs_;
  std::vector<LogProb> logs_;
  std::vector<Symbol> heavy_;
};

struct ParseOptions {
  bool renormalize = false;
};

WeightedSequence parse_weighted_sequence(std::istream& in, ParseOptions opts = {});
WeightedSequence parse_weighted_sequence(std::string_view text, ParseOptions opts = {});
WeightedSequence load_weighted_sequence(const std::string& path, ParseOptions opts = {});
void write_weighted_sequence(std::ostream& out, const WeightedSequence& x);

// Product of letter probabilities of `pattern` starting at `pos` (0-based).
// Throws RangeError when pos + |pattern| > n. Foreign letters give zero.
LogProb match_probability(const WeightedSequence& x, std::string_view pattern,
                          std::size_t pos);
LogProb match_probability(const WeightedSequence& x,
                          std::span<const Symbol> pattern, std::size_t pos);

struct FactorCounts {
  std::int64_t t = 0;  // floor(P_X(P, i) * z)
  std::int64_t m = 0;  // t minus the counts of all one-letter extensions
};

FactorCounts factor_counts(const WeightedSequence& x, double z,
                           std::string_view pattern, std::size_t pos);

// The multiset M_i (sorted) whose prefix counts equal floor(P_X(., i) * z).
// pos == n yields floor(z) empty strings.
std::vector<std::string> enumerate_multiset(const WeightedSequence& x, double z,
                                            std::size_t pos);

// Every P (including the empty string) with P_X(P, pos) >= 1/z, sorted.
std::vector<std::string> solid_factors_at(const WeightedSequence& x, double z,
                                          std::size_t pos);

// Brute-force occurrence oracles; positions are 0-based and ascending.
std::vector<std::size_t> naive_weighted_occurrences(const WeightedSequence& x,
                                                    double z,
                                                    std::string_view pattern);
// Positions with P_X(P, i) >= threshold (linear); threshold <= 0 admits all.
std::vector<std::size_t> naive_occurrences_at_least(const WeightedSequence& x,
                                                    double threshold,
                                                    std::string_view pattern);
std::vector<std::size_t> naive_property_occurrences(std::string_view s,
                                                    const PropertyArray& pi,
                                                    std::string_view pattern);

}  // namespace windex
