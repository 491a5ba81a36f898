#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "windex/approx_index.hpp"
#include "windex/query.hpp"
#include "windex/randomized.hpp"
#include "windex/weighted_index.hpp"

namespace py = pybind11;
using namespace windex;

namespace {

std::vector<std::string> decode_all(const Alphabet& a, const std::vector<Text>& strings) {
  std::vector<std::string> out;
  out.reserve(strings.size());
  for (const auto& s : strings) out.push_back(a.decode(s));
  return out;
}

std::vector<std::vector<std::uint32_t>> ends_of(const std::vector<PropertyArray>& props) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(props.size());
  for (const auto& p : props) out.emplace_back(p.ends().begin(), p.ends().end());
  return out;
}

std::vector<Text> encode_all(const Alphabet& a, const std::vector<std::string>& strings) {
  std::vector<Text> out;
  for (const auto& s : strings) {
    auto t = a.encode(s);
    if (!t) throw ValidationError("string '" + s + "' leaves the alphabet");
    out.push_back(std::move(*t));
  }
  return out;
}

std::vector<PropertyArray> props_of(const std::vector<std::vector<std::uint32_t>>& ends) {
  std::vector<PropertyArray> out;
  for (const auto& e : ends) out.emplace_back(e);
  return out;
}

struct LetteredTree {
  Alphabet alphabet;
  PropertySuffixTree tree;
};

template <class T>
py::bytes to_bytes(const T& obj) {
  std::ostringstream out;
  obj.save(out);
  return py::bytes(out.str());
}

template <class T>
void to_file(const T& obj, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  obj.save(out);
}

template <class T>
T from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return T::load(in);
}

template <class T>
T from_bytes(const py::bytes& data) {
  std::istringstream in{std::string(data)};
  return T::load(in);
}

std::string run_batch(const WeightedIndex& index, std::optional<double> eps,
                      const std::string& batch) {
  std::istringstream in(batch);
  std::ostringstream out;
  answer_queries(index, eps, parse_query_batch(in), out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_windex, m) {
  m.doc() = "Indexing weighted sequences: z-estimations, property suffix trees, "
            "weighted and approximate indexes. Positions are 0-based.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());
  py::register_exception<LoadError>(m, "LoadError", base.ptr());

  py::class_<WeightedSequence>(m, "WeightedSequence")
      .def(py::init([](const std::string& letters, const std::vector<std::vector<double>>& rows) {
             const Alphabet a(letters);
             std::vector<double> flat;
             for (const auto& r : rows) {
               if (r.size() != a.size())
                 throw ValidationError("every row needs one probability per letter");
               flat.insert(flat.end(), r.begin(), r.end());
             }
             return WeightedSequence(a, std::move(flat));
           }),
           py::arg("letters"), py::arg("rows"))
      .def_static("parse",
                  [](const std::string& text, bool renormalize) {
                    return parse_weighted_sequence(text, ParseOptions{renormalize});
                  },
                  py::arg("text"), py::arg("renormalize") = false)
      .def_static("load",
                  [](const std::string& path, bool renormalize) {
                    return load_weighted_sequence(path, ParseOptions{renormalize});
                  },
                  py::arg("path"), py::arg("renormalize") = false)
      .def_static("random", &generate_weighted_sequence, py::arg("n"), py::arg("sigma"),
                  py::arg("seed") = 0)
      .def("__len__", &WeightedSequence::size)
      .def_property_readonly("letters",
                             [](const WeightedSequence& x) { return x.alphabet().letters(); })
      .def("prob",
           [](const WeightedSequence& x, std::size_t i, char c) {
             if (i >= x.size()) throw RangeError("position out of range");
             const auto r = x.alphabet().rank(c);
             return r ? x.prob(i, *r) : 0.0;
           },
           py::arg("i"), py::arg("letter"))
      .def("to_text", [](const WeightedSequence& x) {
        std::ostringstream out;
        write_weighted_sequence(out, x);
        return out.str();
      });

  m.def("match_probability",
        [](const WeightedSequence& x, const std::string& p, std::size_t pos) {
          return match_probability(x, p, pos).linear();
        },
        py::arg("x"), py::arg("pattern"), py::arg("pos"));
  m.def("naive_weighted_occurrences", &naive_weighted_occurrences, py::arg("x"),
        py::arg("z"), py::arg("pattern"));
  m.def("enumerate_multiset", &enumerate_multiset, py::arg("x"), py::arg("z"),
        py::arg("pos"));
  m.def("solid_factors_at", &solid_factors_at, py::arg("x"), py::arg("z"), py::arg("pos"));

  m.def("build_z_estimation",
        [](const WeightedSequence& x, double z) {
          auto fam = build_z_estimation(x, z);
          return py::make_tuple(decode_all(x.alphabet(), fam.strings), ends_of(fam.properties));
        },
        py::arg("x"), py::arg("z"),
        "Returns (strings, ends): floor(z) strings and, per string, the exclusive end "
        "of the admissible factor at every position.");
  m.def("verify_z_estimation",
        [](const WeightedSequence& x, double z, const std::vector<std::string>& strings,
           const std::vector<std::vector<std::uint32_t>>& ends) {
          ZEstimation fam;
          fam.z = z;
          fam.strings = encode_all(x.alphabet(), strings);
          fam.properties = props_of(ends);
          return verify_z_estimation(x, z, fam);
        },
        py::arg("x"), py::arg("z"), py::arg("strings"), py::arg("ends"));

  py::class_<WeightedIndex>(m, "WeightedIndex")
      .def_static("build", [](const WeightedSequence& x, double z) { return WeightedIndex::build(x, z); },
                  py::arg("x"), py::arg("z"))
      .def_static("from_family",
                  [](const std::string& letters, double z, const std::vector<std::string>& strings,
                     const std::vector<std::vector<std::uint32_t>>& ends) {
                    const Alphabet a(letters);
                    return WeightedIndex::from_family(a, z, encode_all(a, strings), props_of(ends));
                  },
                  py::arg("letters"), py::arg("z"), py::arg("strings"), py::arg("ends"))
      .def("decide", &WeightedIndex::decide, py::arg("pattern"))
      .def("count", &WeightedIndex::count, py::arg("pattern"))
      .def("report", py::overload_cast<std::string_view>(&WeightedIndex::report, py::const_),
           py::arg("pattern"))
      .def("query", [](const WeightedIndex& w, const std::string& batch) {
             return run_batch(w, std::nullopt, batch);
           },
           py::arg("batch"), "Answer a text query batch; output positions are 1-based.")
      .def("__len__", &WeightedIndex::length)
      .def_property_readonly("z", &WeightedIndex::z)
      .def_property_readonly("blocks", &WeightedIndex::blocks)
      .def_property_readonly("letters", [](const WeightedIndex& w) { return w.alphabet().letters(); })
      .def("to_bytes", &to_bytes<WeightedIndex>)
      .def_static("from_bytes", &from_bytes<WeightedIndex>, py::arg("data"))
      .def("save", &to_file<WeightedIndex>, py::arg("path"))
      .def_static("load", &from_file<WeightedIndex>, py::arg("path"))
      .def("__eq__", [](const WeightedIndex& a, const WeightedIndex& b) { return a == b; });

  py::class_<ApproxIndex>(m, "ApproxIndex")
      .def_static("build", [](const WeightedSequence& x, double eps) { return ApproxIndex::build(x, eps); },
                  py::arg("x"), py::arg("eps"))
      .def("report",
           [](const ApproxIndex& a, const std::string& p, double zprime) {
             return a.report(p, zprime);
           },
           py::arg("pattern"), py::arg("zprime"))
      .def("min_count", &ApproxIndex::min_count, py::arg("zprime"))
      .def("is_trivial", &ApproxIndex::is_trivial, py::arg("zprime"))
      .def("query", [](const ApproxIndex& a, const std::string& batch) {
             return run_batch(a.index(), a.eps(), batch);
           },
           py::arg("batch"))
      .def_property_readonly("eps", &ApproxIndex::eps)
      .def_property_readonly("index", &ApproxIndex::index)
      .def("to_bytes", &to_bytes<ApproxIndex>)
      .def_static("from_bytes", &from_bytes<ApproxIndex>, py::arg("data"))
      .def("save", &to_file<ApproxIndex>, py::arg("path"))
      .def_static("load", &from_file<ApproxIndex>, py::arg("path"));

  py::class_<LetteredTree>(m, "PropertySuffixTree")
      .def(py::init([](const std::string& letters, const std::string& s,
                       const std::vector<std::uint32_t>& ends) {
             Alphabet a(letters);
             auto t = PropertySuffixTree::build(encode_all(a, {s})[0], a.size(),
                                                PropertyArray(ends));
             return LetteredTree{std::move(a), std::move(t)};
           }),
           py::arg("letters"), py::arg("text"), py::arg("ends"))
      .def("count",
           [](const LetteredTree& t, const std::string& p) {
             const auto enc = t.alphabet.encode(p);
             return enc ? t.tree.count(*enc) : 0;
           },
           py::arg("pattern"))
      .def("report",
           [](const LetteredTree& t, const std::string& p) {
             const auto enc = t.alphabet.encode(p);
             return enc ? t.tree.report(*enc) : std::vector<std::size_t>{};
           },
           py::arg("pattern"))
      .def_property_readonly("node_count",
                             [](const LetteredTree& t) { return t.tree.node_count(); });

  m.def("randomized_family_size", &randomized_family_size, py::arg("n"), py::arg("z"),
        py::arg("c") = 2.0);
  m.def("randomized_approx_family_size", &randomized_approx_family_size, py::arg("n"),
        py::arg("eps"), py::arg("c") = 2.0);
  m.def("build_randomized_family",
        [](const WeightedSequence& x, double z, double c, std::uint64_t seed) {
          auto fam = build_randomized_family(x, z, {c, seed});
          return py::make_tuple(decode_all(x.alphabet(), fam.strings), ends_of(fam.properties));
        },
        py::arg("x"), py::arg("z"), py::arg("c") = 2.0, py::arg("seed") = 0);
  m.def("build_randomized_approx_family",
        [](const WeightedSequence& x, double eps, double c, std::uint64_t seed) {
          auto fam = build_randomized_approx_family(x, eps, {c, seed});
          return py::make_tuple(decode_all(x.alphabet(), fam.strings), ends_of(fam.properties));
        },
        py::arg("x"), py::arg("eps"), py::arg("c") = 2.0, py::arg("seed") = 0);
}
