#include "windex/query.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace windex {

namespace {

std::string_view mode_name(QueryMode m) {
  switch (m) {
    case QueryMode::decide: return "decide";
    case QueryMode::count: return "count";
    case QueryMode::report: return "report";
    case QueryMode::approx: return "approx";
  }
  return "";
}

std::string shown(const std::string& pattern) {
  return pattern.empty() ? "\"\"" : pattern;
}

void append_positions(std::string& line, const std::vector<std::size_t>& pos) {
  for (auto p : pos) {
    line.push_back(' ');
    line += std::to_string(p + 1);
  }
}

}  // namespace

Query parse_query_line(const std::string& line, std::size_t line_no) {
  std::istringstream in(line);
  std::string mode, pattern, zprime, extra;
  in >> mode >> pattern;
  if (mode.empty() || pattern.empty())
    throw ParseError(line_no, "expected '<mode> <pattern> [zprime]'");
  Query q;
  if (mode == "decide") q.mode = QueryMode::decide;
  else if (mode == "count") q.mode = QueryMode::count;
  else if (mode == "report") q.mode = QueryMode::report;
  else if (mode == "approx") q.mode = QueryMode::approx;
  else throw ParseError(line_no, "unknown query mode '" + mode + "'");
  q.pattern = pattern == "\"\"" ? std::string() : pattern;
  if (q.mode == QueryMode::approx) {
    if (!(in >> zprime)) throw ParseError(line_no, "approx queries need a zprime");
    const auto [p, ec] = std::from_chars(zprime.data(), zprime.data() + zprime.size(), q.zprime);
    if (ec != std::errc() || p != zprime.data() + zprime.size() || !std::isfinite(q.zprime))
      throw ParseError(line_no, "invalid zprime '" + zprime + "'");
  }
  if (in >> extra) throw ParseError(line_no, "trailing input '" + extra + "'");
  return q;
}

std::vector<Query> parse_query_batch(std::istream& in) {
  std::vector<Query> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_query_line(line, line_no));
  }
  return out;
}

std::string answer_query(const WeightedIndex& index, std::optional<double> eps,
                         const Query& q, QueryContext& ctx) {
  std::string line(mode_name(q.mode));
  line.push_back(' ');
  line += shown(q.pattern);
  switch (q.mode) {
    case QueryMode::decide:
      line += index.decide(q.pattern) ? " true" : " false";
      break;
    case QueryMode::count:
      line += ' ' + std::to_string(index.count(q.pattern));
      break;
    case QueryMode::report:
      append_positions(line, index.report(q.pattern, ctx));
      break;
    case QueryMode::approx:
      append_positions(line, approx_report(index, eps.value_or(1.0 / index.z()),
                                           q.pattern, q.zprime, ctx));
      break;
  }
  return line;
}

void answer_queries(const WeightedIndex& index, std::optional<double> eps,
                    const std::vector<Query>& batch, std::ostream& out) {
  QueryContext ctx(index.length());
  for (const auto& q : batch) out << answer_query(index, eps, q, ctx) << '\n';
}

}  // namespace windex
