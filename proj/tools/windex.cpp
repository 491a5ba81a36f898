// windex: generate weighted sequences, build and query indexes, and check
// the constructions against brute-force oracles.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "windex/approx_index.hpp"
#include "windex/query.hpp"
#include "windex/randomized.hpp"
#include "windex/weighted_index.hpp"

using namespace windex;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitError = 2;

void stat(const char* key, auto value) { std::cerr << key << '=' << value << '\n'; }

// ---- gen ----

struct GenArgs {
  std::size_t n = 0;
  std::size_t sigma = 0;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_gen(const GenArgs& a) {
  if (a.n == 0) throw ValidationError("n must be at least 1");
  const auto x = generate_weighted_sequence(a.n, a.sigma, a.seed);
  if (a.output.empty() || a.output == "-") {
    write_weighted_sequence(std::cout, x);
  } else {
    std::ofstream out(a.output);
    if (!out) throw Error("cannot open '" + a.output + "' for writing");
    write_weighted_sequence(out, x);
  }
  return 0;
}

// ---- build ----

struct BuildArgs {
  std::string input;
  std::optional<double> z;
  std::optional<double> eps;
  std::string output;
  bool randomized = false;
  double confidence = 2.0;
  std::uint64_t seed = 0;
  bool dump_tries = false;
  bool renormalize = false;
};

WeightedSequence read_input(const std::string& path, bool renormalize) {
  ParseOptions opts;
  opts.renormalize = renormalize;
  if (path == "-") return parse_weighted_sequence(std::cin, opts);
  return load_weighted_sequence(path, opts);
}

int cmd_build(const BuildArgs& a) {
  const auto x = read_input(a.input, a.renormalize);
  const auto t0 = std::chrono::steady_clock::now();
  const double z = a.z ? *a.z : 1.0 / *a.eps;
  if (a.eps && !(*a.eps > 0.0 && *a.eps <= 1.0))
    throw ValidationError("eps must lie in (0, 1]");

  WeightedIndex index;
  IndexBuildStats stats;
  if (a.randomized) {
    const auto fam = build_randomized_family(x, z, {a.confidence, a.seed});
    index = WeightedIndex::from_family(x.alphabet(), z, fam.strings, fam.properties,
                                       &stats.pst);
    stats.blocks = index.blocks();
    stats.block_length = index.length();
  } else {
    ConstructionStats cstats;
    const auto fam =
        build_z_estimation(x, z, &cstats, a.dump_tries ? &std::cerr : nullptr);
    index = WeightedIndex::from_family(x.alphabet(), z, fam.strings, fam.properties,
                                       &stats.pst);
    stats.construction = cstats;
    stats.blocks = index.blocks();
    stats.block_length = index.length();
  }
  const auto t1 = std::chrono::steady_clock::now();

  if (!a.output.empty()) {
    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw Error("cannot open '" + a.output + "' for writing");
    if (a.eps)
      detail::write_index(out, index, 1, *a.eps);
    else
      index.save(out);
  }

  stat("kind", a.eps ? "approximate" : "exact");
  stat("z", z);
  if (a.eps) stat("eps", *a.eps);
  stat("randomized", a.randomized ? 1 : 0);
  stat("blocks", stats.blocks);
  stat("block_length", stats.block_length);
  stat("trie_nodes_created", stats.construction.nodes_created);
  stat("trie_nodes_deleted", stats.construction.nodes_deleted);
  stat("trie_max_live_nodes", stats.construction.max_live_nodes);
  stat("token_walk_steps", stats.construction.token_walk_steps);
  stat("token_requests", stats.construction.token_requests);
  stat("walk_bound_held", stats.construction.walk_bound_held ? 1 : 0);
  stat("pst_nodes", stats.pst.nodes);
  stat("pst_locus_steps", stats.pst.locus_edge_steps);
  stat("build_ms", std::chrono::duration<double, std::milli>(t1 - t0).count());
  return 0;
}

// ---- query ----

struct QueryArgs {
  std::string index;
  std::string batch = "-";
};

int cmd_query(const QueryArgs& a) {
  std::ifstream in(a.index, std::ios::binary);
  if (!in) throw Error("cannot open '" + a.index + "'");
  const auto loaded = load_index_file(in);
  if (loaded.eps) stat("eps", *loaded.eps);

  std::vector<Query> batch;
  if (a.batch == "-") {
    batch = parse_query_batch(std::cin);
  } else {
    std::ifstream b(a.batch);
    if (!b) throw Error("cannot open '" + a.batch + "'");
    batch = parse_query_batch(b);
  }
  answer_queries(loaded.index, loaded.eps, batch, std::cout);
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  std::string input;
  double z = 0.0;
  std::size_t seeds = 5;
};

// "random:n=30,sigma=4,seed=7"
WeightedSequence verify_input(const std::string& spec) {
  const std::string prefix = "random:";
  if (spec.rfind(prefix, 0) != 0) return read_input(spec, false);
  std::map<std::string, std::uint64_t> kv{{"n", 0}, {"sigma", 2}, {"seed", 0}};
  std::stringstream ss(spec.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || !kv.count(item.substr(0, eq)))
      throw ValidationError("bad random input spec '" + item + "'");
    try {
      kv[item.substr(0, eq)] = std::stoull(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ValidationError("bad random input spec '" + item + "'");
    }
  }
  return generate_weighted_sequence(kv["n"], kv["sigma"], kv["seed"]);
}

class Checker {
 public:
  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    ++total_;
    if (ok) {
      std::cout << "PASS " << name << '\n';
    } else {
      ++failed_;
      std::cout << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << '\n';
    }
  }
  int finish() const {
    std::cout << (failed_ ? "verify: FAILED " : "verify: passed ") << total_ - failed_
              << '/' << total_ << " checks\n";
    return failed_ ? kExitFailure : 0;
  }

 private:
  std::size_t total_ = 0;
  std::size_t failed_ = 0;
};

// Every solid pattern with its positions.
std::map<std::string, std::set<std::size_t>> solid_pairs(const WeightedSequence& x,
                                                         double z) {
  std::map<std::string, std::set<std::size_t>> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (const auto& p : solid_factors_at(x, z, i)) out[p].insert(i);
  return out;
}

std::string random_pattern(std::mt19937_64& rng, const Alphabet& a, std::size_t max_len) {
  std::string p(1 + rng() % max_len, ' ');
  for (auto& c : p) c = a.letter(static_cast<Symbol>(rng() % a.size()));
  return p;
}

int cmd_verify(const VerifyArgs& a) {
  const auto x = verify_input(a.input);
  const double z = a.z;
  Checker ck;
  std::cout << "input n=" << x.size() << " sigma=" << x.sigma() << " z=" << z << '\n';

  ConstructionStats cstats;
  const auto fam = build_z_estimation(x, z, &cstats);
  ck.check("z-estimation count equality", verify_z_estimation(x, z, fam));
  ck.check("token walk bound", cstats.walk_bound_held);

  const auto solid = solid_pairs(x, z);
  const auto index = WeightedIndex::from_family(x.alphabet(), z, fam.strings, fam.properties);
  {
    bool ok = true;
    std::string bad;
    QueryContext ctx(x.size());
    for (const auto& [p, pos] : solid) {
      const std::vector<std::size_t> want(pos.begin(), pos.end());
      if (index.report(p) != want || index.report(p, ctx) != want ||
          index.count(p) != want.size() || !index.decide(p)) {
        ok = false;
        bad = p;
        break;
      }
    }
    std::mt19937_64 rng(a.seeds);
    for (std::size_t q = 0; ok && q < 200; ++q) {
      const auto p = random_pattern(rng, x.alphabet(), std::min<std::size_t>(8, x.size()));
      const auto want = naive_weighted_occurrences(x, z, p);
      if (index.report(p) != want || index.count(p) != want.size() ||
          index.decide(p) != !want.empty()) {
        ok = false;
        bad = p;
      }
    }
    ck.check("weighted index vs oracle", ok, bad.empty() ? "" : "pattern " + bad);
  }

  {
    bool ok = true;
    for (std::size_t j = 0; ok && j < fam.size(); ++j) {
      const auto t = PropertySuffixTree::build(fam.strings[j], x.sigma(), fam.properties[j]);
      const auto s = x.alphabet().decode(fam.strings[j]);
      std::set<std::string> patterns{""};
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t l = 1; i + l <= s.size() && l <= 12; ++l) patterns.insert(s.substr(i, l));
      for (const auto& p : patterns) {
        if (t.report(*x.alphabet().encode(p)) !=
            naive_property_occurrences(s, fam.properties[j], p)) {
          ok = false;
          break;
        }
      }
    }
    ck.check("property suffix trees vs oracle", ok);
  }

  {
    const double eps = 1.0 / std::floor(z + kCompareSlack);
    const auto approx = ApproxIndex::build(x, eps);
    bool ok = true;
    std::mt19937_64 rng(a.seeds + 1);
    QueryContext ctx(x.size());
    for (std::size_t q = 0; ok && q < 200; ++q) {
      const auto p = random_pattern(rng, x.alphabet(), std::min<std::size_t>(4, x.size()));
      const double zp = 1.0 + static_cast<double>(rng() % 100) / 10.0;
      const auto got = approx.report(p, zp, ctx);
      const auto lo = naive_occurrences_at_least(x, 1.0 / zp, p);
      const auto hi = naive_occurrences_at_least(x, 1.0 / zp - eps, p);
      ok = std::includes(got.begin(), got.end(), lo.begin(), lo.end()) &&
           std::includes(hi.begin(), hi.end(), got.begin(), got.end());
    }
    ck.check("approximate sandwich (eps=1/floor(z))", ok);
  }

  {
    const auto sws = to_special_weighted_sequence(fam, x);
    const auto k = fam.size();
    bool ok = sws.size() == k * x.size() + k - 1;
    std::set<std::string> got{""};
    for (std::size_t i = 0; ok && i < sws.size(); ++i) {
      Text p;
      for (std::size_t e = i; e < sws.size() && !sws.is_separator(e); ++e) {
        p.push_back(*sws.letter(e));
        if (!sws.match_probability(p, i).at_least_reciprocal(z)) break;
        got.insert(x.alphabet().decode(p));
      }
    }
    std::set<std::string> want;
    for (const auto& [p, pos] : solid) want.insert(p);
    ck.check("special weighted sequence preserves solid factors", ok && got == want);
  }

  {
    std::stringstream buf;
    index.save(buf);
    const auto loaded = WeightedIndex::load(buf);
    std::mt19937_64 rng(a.seeds + 2);
    std::vector<Query> batch;
    for (int q = 0; q < 100; ++q) {
      Query query;
      query.mode = static_cast<QueryMode>(rng() % 4);
      query.pattern = random_pattern(rng, x.alphabet(), std::min<std::size_t>(5, x.size()));
      query.zprime = 1.0 + static_cast<double>(rng() % 50) / 10.0;
      batch.push_back(query);
    }
    std::ostringstream before, after;
    answer_queries(index, std::nullopt, batch, before);
    answer_queries(loaded, std::nullopt, batch, after);
    ck.check("serialization round trip", loaded == index && before.str() == after.str());
  }

  {
    bool sound = true;
    std::size_t exact = 0;
    for (std::size_t s = 0; s < a.seeds; ++s) {
      const auto sample = build_randomized_family(x, z, {2.0, s});
      const auto w =
          WeightedIndex::from_family(x.alphabet(), z, sample.strings, sample.properties);
      bool all = true;
      for (const auto& [p, pos] : solid) {
        const auto got = w.report(p);
        for (auto i : got) sound = sound && pos.count(i);
        all = all && got.size() == pos.size();
      }
      exact += all;
    }
    ck.check("randomized family soundness over " + std::to_string(a.seeds) + " seeds",
             sound);
    std::cout << "info randomized families exact in " << exact << '/' << a.seeds
              << " seeds\n";
  }

  return ck.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indexing weighted sequences"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a random weighted sequence (WSEQ)");
  g->add_option("n", gen.n, "Sequence length")->required();
  g->add_option("sigma", gen.sigma, "Alphabet size")->required();
  g->add_option("--seed", gen.seed, "Generator seed");
  g->add_option("-o,--output", gen.output, "Output file (default: stdout)");

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a weighted index (WIX1)");
  b->add_option("input", build.input, "WSEQ file, or - for stdin")->required();
  auto* zopt = b->add_option("--z", build.z, "Threshold z: index factors with probability >= 1/z");
  auto* eopt = b->add_option("--eps", build.eps, "Build an approximate index for eps");
  zopt->excludes(eopt);
  b->add_option("-o,--output", build.output, "Index file to write");
  auto* ropt = b->add_flag("--randomized", build.randomized,
                           "Use a sampled family instead of the z-estimation");
  ropt->excludes(eopt);
  b->add_option("--confidence", build.confidence, "Confidence constant c >= 1");
  b->add_option("--seed", build.seed, "Seed for --randomized");
  b->add_flag("--dump-tries", build.dump_tries, "Print every solid factor trie to stderr");
  b->add_flag("--renormalize", build.renormalize, "Rescale each distribution to sum to 1");

  QueryArgs query;
  auto* q = app.add_subcommand("query", "Answer a batch of queries");
  q->add_option("index", query.index, "Index file")->required();
  q->add_option("batch", query.batch, "Batch file, or - for stdin (default)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check the constructions against oracles");
  v->add_option("input", verify.input, "WSEQ file, or random:n=N,sigma=S,seed=K")
      ->required();
  v->add_option("--z", verify.z, "Threshold z")->required();
  v->add_option("--seeds", verify.seeds, "Seeds for randomized checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) return cmd_gen(gen);
    if (*b) {
      if (!build.z && !build.eps) throw ValidationError("one of --z or --eps is required");
      return cmd_build(build);
    }
    if (*q) return cmd_query(query);
    if (*v) return cmd_verify(verify);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
