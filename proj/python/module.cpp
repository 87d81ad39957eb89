#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cblab/cbp.hpp"
#include "cblab/cover.hpp"
#include "cblab/harness.hpp"
#include "cblab/hilbert.hpp"
#include "cblab/io.hpp"

namespace py = pybind11;
using namespace cblab;

namespace {

// Point sets cross the boundary as JSON text; the Python side wraps this.
PointSet parse(const std::string& text) {
  try {
    return point_set_from_json(Json::parse(text));
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

Json cover_json(const CoverResult& c) {
  return {{"config", to_json(c.config)}, {"total_dim", c.total_dim}, {"blocks", c.blocks}, {"optimal", c.optimal}};
}

CoverOptions options_for(std::optional<std::size_t> limit) {
  CoverOptions o;
  if (limit) o.exhaustive_limit = *limit;
  return o;
}

std::string instance_json(const Instance& inst) {
  Json j = to_json(inst.point_set);
  j["provenance"] = inst.provenance;
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_cblab, m) {
  m.doc() = "Exact Hilbert functions, Cayley-Bacharach tests and plane-configuration covers";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InexhaustiveError>(m, "InexhaustiveError", PyExc_RuntimeError);
  py::register_exception<CbpDisagreement>(m, "CbpDisagreement", PyExc_RuntimeError);

  m.def("hilbert_function", [](const std::string& x) {
    const auto h = hf_full(parse(x));
    return py::make_tuple(h.values, h.reg_index);
  });
  m.def("hf", [](const std::string& x, long degree) { return hf(parse(x), degree); });

  m.def(
      "cbp",
      [](const std::string& x, int r, bool fast) {
        const auto rep = cbp(parse(x), r, fast);
        py::dict d;
        d["r"] = rep.r;
        d["verdict"] = rep.verdict;
        d["hf"] = rep.by_hf;
        d["alpha"] = rep.by_alpha;
        d["divisibility"] = rep.by_divisibility;
        d["dual"] = rep.by_dual;
        d["failing_label"] = rep.failing_label;
        return d;
      },
      py::arg("x"), py::arg("r"), py::arg("fast") = false);
  m.def("max_cbp_degree", [](const std::string& x, bool fast) {
    const auto mc = max_cbp_degree(parse(x), fast);
    return py::make_tuple(mc.degree, mc.is_cb_scheme);
  }, py::arg("x"), py::arg("fast") = false);

  m.def(
      "min_cover",
      [](const std::string& x, std::size_t budget, std::optional<std::size_t> limit) -> std::optional<std::string> {
        const auto c = min_cover(parse(x), budget, options_for(limit));
        if (!c) return std::nullopt;
        return cover_json(*c).dump();
      },
      py::arg("x"), py::arg("budget"), py::arg("limit") = py::none());
  m.def(
      "min_cover_dim",
      [](const std::string& x, std::optional<std::size_t> limit) {
        return min_cover_dim(parse(x), options_for(limit));
      },
      py::arg("x"), py::arg("limit") = py::none());

  m.def("replay", [](const std::string& provenance) {
    try {
      return instance_json(replay(Json::parse(provenance)));
    } catch (const Json::exception& e) {
      throw ParseError(e.what());
    }
  });
  m.def("corpus", [](const std::string& kind, std::size_t count, std::uint64_t seed) {
    std::vector<std::string> out;
    for (const auto& inst : corpus(kind, count, seed)) out.push_back(instance_json(inst));
    return out;
  });
  m.def(
      "counterexample_search",
      [](std::size_t d, std::size_t r, std::size_t trials, std::uint64_t seed, std::optional<std::size_t> limit) {
        std::string out;
        {
          py::gil_scoped_release release;
          out = to_json(counterexample_search(d, r, trials, seed, options_for(limit)), d, r, seed).dump();
        }
        return out;
      },
      py::arg("d"), py::arg("r"), py::arg("trials"), py::arg("seed"), py::arg("limit") = py::none());
  m.def("run_suite", [](const std::string& config) {
    Json j;
    try {
      j = Json::parse(config);
    } catch (const Json::exception& e) {
      throw ParseError(e.what());
    }
    std::string lines;
    {
      py::gil_scoped_release release;
      lines = report_lines(run_suite(j));
    }
    return lines;
  });
}
