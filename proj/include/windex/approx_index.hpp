#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "windex/weighted_index.hpp"

namespace windex {

// Weighted index built for z = 1/eps. A query with threshold 1/z' reports
// every position with probability >= 1/z' and none below 1/z' - eps.
class ApproxIndex {
 public:
  ApproxIndex() = default;

  static ApproxIndex build(const WeightedSequence& x, double eps,
                           IndexBuildStats* stats = nullptr);

  std::vector<std::size_t> report(std::string_view pattern, double zprime) const;
  std::vector<std::size_t> report(std::string_view pattern, double zprime,
                                  QueryContext& ctx) const;

  // floor(z / z') under the slack rule, never below one. Only meaningful when
  // the query is not trivial.
  std::size_t min_count(double zprime) const;
  // True when 1/z' < eps: every position may be reported.
  bool is_trivial(double zprime) const;

  double eps() const noexcept { return eps_; }
  const WeightedIndex& index() const noexcept { return index_; }

  void save(std::ostream& out) const;
  static ApproxIndex load(std::istream& in);

 private:
  double eps_ = 1.0;
  WeightedIndex index_;
};

// The approximate query on any weighted index, treating it as built for eps.
std::vector<std::size_t> approx_report(const WeightedIndex& index, double eps,
                                       std::string_view pattern, double zprime,
                                       QueryContext& ctx);

// Either kind of index file, as read by the command-line tool.
struct LoadedIndex {
  WeightedIndex index;
  std::optional<double> eps;  // set for approximate indexes
};

LoadedIndex load_index_file(std::istream& in);

}  // namespace windex
