#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "matchadapt/adapt_sm.hpp"
#include "matchadapt/adapt_sr.hpp"
#include "matchadapt/gen.hpp"
#include "matchadapt/io.hpp"
#include "matchadapt/oracle.hpp"
#include "matchadapt/rotations.hpp"

namespace py = pybind11;
using namespace matchadapt;

namespace {

using NamePair = std::pair<std::string, std::string>;

std::vector<NamePair> named(const Instance& instance, const std::vector<Pair>& pairs) {
  std::vector<NamePair> out;
  for (Pair p : pairs) out.emplace_back(instance.name(p.first), instance.name(p.second));
  return out;
}

std::vector<Pair> resolve(const Instance& instance, const std::vector<NamePair>& pairs) {
  std::vector<Pair> out;
  for (const auto& [a, b] : pairs) out.push_back(pair_by_name(instance, a, b));
  return out;
}

Notion notion_of(const std::string& s) {
  if (s == "strict") return Notion::strict;
  if (s == "weak") return Notion::weak;
  if (s == "strong") return Notion::strong;
  throw std::invalid_argument("unknown notion '" + s + "'");
}

AdaptQuery make_query(const Instance& instance, const std::vector<NamePair>& m1, const std::vector<NamePair>& forced,
                      const std::vector<NamePair>& forbidden, long long k) {
  AdaptQuery q;
  q.m1 = Matching::on(instance, resolve(instance, m1));
  q.forced = resolve(instance, forced);
  q.forbidden = resolve(instance, forbidden);
  q.k = k;
  return q;
}

py::object result_of(const Instance& instance, const std::optional<AdaptResult>& r) {
  if (!r) return py::none();
  py::dict d;
  d["matching"] = named(instance, r->matching.pairs());
  d["delta"] = r->delta;
  return d;
}

}  // namespace

PYBIND11_MODULE(_matchadapt, m) {
  m.doc() = "Stable matching adaptation with forced and forbidden pairs";

  py::register_exception<Error>(m, "MatchAdaptError", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("size", &Instance::size)
      .def_property_readonly("names", &Instance::names)
      .def_property_readonly("kind", [](const Instance& i) { return i.kind() == Kind::marriage ? "sm" : "sr"; })
      .def_property_readonly("is_strict", &Instance::is_strict)
      .def("pairs", [](const Instance& i) { return named(i, i.pairs()); })
      .def("__str__", [](const Instance& i) { return emit_instance(i); });

  m.def("parse_instance", [](const std::string& text) { return parse_instance(text); }, py::arg("text"));
  m.def("random_instance",
        [](int n, const std::string& kind, double ties, double density, std::uint64_t seed) {
          return random_instance(n, kind == "sm" ? Kind::marriage : Kind::roommates, ties, density, seed);
        },
        py::arg("n"), py::arg("kind") = "sr", py::arg("ties") = 0.0, py::arg("density") = 1.0, py::arg("seed") = 0);

  m.def("blocking_pairs",
        [](const Instance& i, const std::vector<NamePair>& matching, const std::string& notion) {
          return named(i, blocking_pairs(i, Matching::on(i, resolve(i, matching)), notion_of(notion)));
        },
        py::arg("instance"), py::arg("matching"), py::arg("notion") = "strict");

  m.def("stable_matchings",
        [](const Instance& i, const std::string& notion) {
          std::vector<std::vector<NamePair>> out;
          for (const Matching& s : enumerate_stable_matchings(i, notion_of(notion))) out.push_back(named(i, s.pairs()));
          return out;
        },
        py::arg("instance"), py::arg("notion") = "strict");

  m.def("rotation_summary",
        [](const Instance& i) {
          const RotationPoset poset = build_rotation_poset(i);
          py::dict d;
          std::vector<std::vector<NamePair>> cycles;
          for (const Rotation& r : poset.rotations()) {
            std::vector<NamePair> c;
            for (auto [a, b] : r.cycle) c.emplace_back(i.name(a), i.name(b));
            cycles.push_back(c);
          }
          d["rotations"] = cycles;
          d["dual_pairs"] = poset.dual_pairs();
          d["precedence"] = poset.precedence_edges();
          d["singular"] = poset.singular();
          return d;
        },
        py::arg("instance"));

  m.def("adapt",
        [](const Instance& i, const std::vector<NamePair>& m1, const std::vector<NamePair>& forced,
           const std::vector<NamePair>& forbidden, long long k) {
          return result_of(i, adapt(i, make_query(i, m1, forced, forbidden, k)));
        },
        py::arg("instance"), py::arg("m1"), py::arg("forced") = std::vector<NamePair>{},
        py::arg("forbidden") = std::vector<NamePair>{}, py::arg("k") = 0);

  m.def("adapt_sm",
        [](const Instance& i, const std::vector<NamePair>& m1, const std::vector<NamePair>& forced,
           const std::vector<NamePair>& forbidden, long long k) {
          return result_of(i, adapt_sm(i, make_query(i, m1, forced, forbidden, k)));
        },
        py::arg("instance"), py::arg("m1"), py::arg("forced") = std::vector<NamePair>{},
        py::arg("forbidden") = std::vector<NamePair>{}, py::arg("k") = 0);

  m.def("oracle_adapt",
        [](const Instance& i, const std::vector<NamePair>& m1, const std::vector<NamePair>& forced,
           const std::vector<NamePair>& forbidden, long long k, const std::string& notion) {
          return result_of(i, oracle_adapt(i, make_query(i, m1, forced, forbidden, k), notion_of(notion)));
        },
        py::arg("instance"), py::arg("m1"), py::arg("forced") = std::vector<NamePair>{},
        py::arg("forbidden") = std::vector<NamePair>{}, py::arg("k") = 0, py::arg("notion") = "strict");
}
