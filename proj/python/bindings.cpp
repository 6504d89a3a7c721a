// Python surface: text formats in, plain tuples/dicts out.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>
#include <sstream>

#include "zzvine/dpc.hpp"
#include "zzvine/errors.hpp"
#include "zzvine/filtration.hpp"
#include "zzvine/fzz.hpp"
#include "zzvine/planner.hpp"
#include "zzvine/rep_updates.hpp"

namespace py = pybind11;
using namespace zzvine;

namespace {

using BarTuple = std::tuple<int, int, int>;

std::vector<BarTuple> bars(const Barcode& b) {
  std::vector<BarTuple> out;
  for (const auto& x : b) out.emplace_back(x.dim, x.birth, x.death);
  return out;
}

std::vector<std::string> script_lines(const std::vector<Op>& ops) {
  std::vector<std::string> out;
  for (const auto& op : ops) out.push_back(format_op(op));
  return out;
}

ZigzagFiltration valid_filtration(const std::string& text, RegistryPtr reg = nullptr) {
  auto f = parse_filtration_text(text, std::move(reg));
  require_valid(f);
  return f;
}

py::dict op_result(const OpResult& r) {
  py::list created, destroyed;
  for (const auto& v : r.vines) {
    if (v.from == kNoInterval) created.append(v.to);
    else destroyed.append(v.from);
  }
  py::dict d;
  d["created"] = created;
  d["destroyed"] = destroyed;
  return d;
}

}  // namespace

PYBIND11_MODULE(zzvine, m) {
  m.doc() = "Zigzag persistence with representative-based updates";
  py::register_exception<Error>(m, "ZzvineError", PyExc_ValueError);

  m.def("barcode", [](const std::string& text) { return bars(barcode_from_scratch(valid_filtration(text))); },
        py::arg("filtration"), "from-scratch barcode as (dim, birth, death) tuples");

  py::class_<PersistenceState>(m, "PersistenceState")
      .def(py::init([](const std::string& text) { return PersistenceState::build(valid_filtration(text)); }),
           py::arg("filtration"))
      .def("barcode", [](const PersistenceState& s) { return bars(s.barcode()); })
      .def("intervals",
           [](const PersistenceState& s) {
             std::vector<std::tuple<IntervalId, int, int, int>> out;
             for (const auto& t : s.intervals()) out.emplace_back(t.id, t.rep.dim, t.rep.birth, t.rep.death);
             return out;
           })
      .def("certify", &PersistenceState::certify, "None when every representative checks out")
      .def("filtration", [](const PersistenceState& s) { return format_filtration(s.filtration()); })
      .def("apply", [](PersistenceState& s, const std::string& op) { return op_result(s.apply(parse_op(op))); },
           py::arg("op"));

  py::class_<FzzState>(m, "FzzState")
      .def(py::init([](const std::string& text) { return FzzState(valid_filtration(text)); }), py::arg("filtration"))
      .def("barcode", [](const FzzState& s) { return bars(s.barcode()); })
      .def("apply", [](FzzState& s, const std::string& op) { s.apply(parse_op(op)); }, py::arg("op"));

  m.def(
      "random_filtration",
      [](std::uint64_t seed, int vertices, int max_dim, int max_complex, int max_length) {
        std::mt19937_64 rng(seed);
        return format_filtration(random_filtration(rng, {vertices, max_dim, max_complex, max_length}));
      },
      py::arg("seed"), py::arg("vertices") = 5, py::arg("max_dim") = 2, py::arg("max_complex") = 12,
      py::arg("max_length") = 40);
  m.def(
      "random_script",
      [](const std::string& text, int k, std::uint64_t seed) {
        return script_lines(random_script(valid_filtration(text), k, seed));
      },
      py::arg("filtration"), py::arg("count"), py::arg("seed"));
  m.def(
      "reduce_to_empty", [](const std::string& text) { return script_lines(reduce_to_empty(valid_filtration(text))); },
      py::arg("filtration"));
  m.def(
      "transform",
      [](const std::string& a, const std::string& b) {
        auto f1 = valid_filtration(a);
        auto f2 = valid_filtration(b, f1.registry_ptr());
        return script_lines(transform(f1, f2));
      },
      py::arg("source"), py::arg("target"));

  m.def(
      "detect_events",
      [](const std::string& csv, int dim_cap) {
        py::list out;
        for (const auto& e : detect_events(parse_trajectories_text(csv), dim_cap).events) {
          py::dict d;
          d["delta"] = e.delta;
          d["time"] = e.time;
          d["kind"] = event_kind_name(e.kind);
          d["first"] = e.first;
          if (e.second.first >= 0) d["second"] = e.second;
          d["boundary"] = e.boundary;
          out.append(d);
        }
        return out;
      },
      py::arg("points_csv"), py::arg("dim_cap") = 2);
  m.def(
      "vineyard",
      [](const std::string& csv, int dim_cap, int check_every) {
        VineyardOptions opt;
        opt.dim_cap = dim_cap;
        opt.check_every = check_every;
        auto v = vineyard(parse_trajectories_text(csv), opt);
        py::list out;
        for (const auto& b : v.bands) {
          py::dict d;
          d["index"] = b.index;
          d["delta_hi"] = b.delta_hi;
          d["delta_lo"] = b.delta_lo;
          std::vector<std::tuple<int, int, int, IntervalId>> bs;
          for (const auto& x : b.bars) bs.emplace_back(x.dim, x.birth, x.death, x.vine);
          d["bars"] = bs;
          d["ops"] = b.script.size();
          out.append(d);
        }
        return out;
      },
      py::arg("points_csv"), py::arg("dim_cap") = 2, py::arg("check_every") = 0);
}
