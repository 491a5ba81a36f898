#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "windex/approx_index.hpp"

namespace windex {

enum class QueryMode { decide, count, report, approx };

// One line of a query batch: `<mode> <pattern> [zprime]`. The pattern `""`
// stands for the empty string.
struct Query {
  QueryMode mode = QueryMode::decide;
  std::string pattern;
  double zprime = 0.0;  // approx only
};

// Blank lines and '#' comments are skipped; malformed lines raise ParseError.
std::vector<Query> parse_query_batch(std::istream& in);
Query parse_query_line(const std::string& line, std::size_t line_no = 1);

// Answers in input order, one line each, positions 1-based:
//   decide P true|false / count P N / report P i1 i2 ... / approx P i1 i2 ...
// `eps` marks an approximate index; an exact index answers approx lines as
// one built for eps = 1/z.
void answer_queries(const WeightedIndex& index, std::optional<double> eps,
                    const std::vector<Query>& batch, std::ostream& out);
std::string answer_query(const WeightedIndex& index, std::optional<double> eps,
                         const Query& q, QueryContext& ctx);

}  // namespace windex
