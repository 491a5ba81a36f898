#include "windex/approx_index.hpp"

#include <cmath>

#include "windex/binary_io.hpp"

namespace windex {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw ValidationError("eps must lie in (0, 1]");
}

void check_zprime(double zprime) {
  if (!(zprime >= 1.0) || !std::isfinite(zprime))
    throw ValidationError("z' must be a finite value >= 1");
}

}  // namespace

ApproxIndex ApproxIndex::build(const WeightedSequence& x, double eps,
                               IndexBuildStats* stats) {
  check_eps(eps);
  ApproxIndex a;
  a.eps_ = eps;
  a.index_ = WeightedIndex::build(x, 1.0 / eps, stats);
  return a;
}

namespace {

bool trivial_query(double eps, double zprime) {
  check_zprime(zprime);
  return eps * zprime > 1.0 + kCompareSlack;
}

std::size_t frequency_cut(double z, double zprime) {
  check_zprime(zprime);
  const auto l = LogProb::from_linear(1.0 / zprime).floor_times(z);
  return l < 1 ? 1 : static_cast<std::size_t>(l);
}

}  // namespace

bool ApproxIndex::is_trivial(double zprime) const { return trivial_query(eps_, zprime); }

std::size_t ApproxIndex::min_count(double zprime) const {
  return frequency_cut(index_.z(), zprime);
}

std::vector<std::size_t> approx_report(const WeightedIndex& index, double eps,
                                       std::string_view pattern, double zprime,
                                       QueryContext& ctx) {
  if (trivial_query(eps, zprime)) {
    std::vector<std::size_t> all(index.length());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
  }
  return index.report_frequent(pattern, frequency_cut(index.z(), zprime), ctx);
}

std::vector<std::size_t> ApproxIndex::report(std::string_view pattern,
                                             double zprime) const {
  QueryContext ctx(index_.length());
  return report(pattern, zprime, ctx);
}

std::vector<std::size_t> ApproxIndex::report(std::string_view pattern, double zprime,
                                             QueryContext& ctx) const {
  return approx_report(index_, eps_, pattern, zprime, ctx);
}

void ApproxIndex::save(std::ostream& out) const {
  detail::write_index(out, index_, 1, eps_);
}

ApproxIndex ApproxIndex::load(std::istream& in) {
  std::uint8_t kind = 0;
  double eps = 0.0;
  ApproxIndex a;
  a.index_ = detail::read_index(in, kind, eps);
  if (kind != 1) throw LoadError("not an approximate index");
  a.eps_ = eps;
  return a;
}

LoadedIndex load_index_file(std::istream& in) {
  std::uint8_t kind = 0;
  double eps = 0.0;
  LoadedIndex out;
  out.index = detail::read_index(in, kind, eps);
  if (kind == 1) out.eps = eps;
  return out;
}

}  // namespace windex
