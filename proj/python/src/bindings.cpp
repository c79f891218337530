// Thin bindings: every entry point returns the JSON report as a string; the
// Python package decodes it.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "novikit/advisor.hpp"
#include "novikit/report.hpp"

namespace py = pybind11;
using namespace novikit;
using report::Json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FreeComplex load_complex(const std::string& path) {
  auto dir = std::filesystem::path(path).parent_path();
  return FreeComplex::parse(slurp(path), dir.empty() ? "." : dir.string());
}

Character char_or_default(const PresentationPtr& p, const std::string& spec) {
  if (!spec.empty()) return Character::parse(p, spec);
  if (!p->default_character()) fail(ErrorCode::PreconditionFailed, "no character given and none declared");
  return Character::parse(p, *p->default_character());
}

std::string collect(const std::string& pres, const std::string& word) {
  auto p = PcPresentation::parse(pres);
  return p->format(p->collect(p->parse_word(word)));
}

std::string hirsch(const std::string& pres) {
  auto p = PcPresentation::parse(pres);
  return Json{{"hirsch", p->hirsch_number()}, {"poly_z", p->is_poly_z()}}.dump();
}

std::string homology(const std::string& path, const std::string& chr, std::int64_t prec, const std::string& strategy) {
  auto c = load_complex(path);
  return report::to_json(novikov_homology(c, char_or_default(c.presentation(), chr), prec, PivotStrategy::parse(strategy)))
      .dump();
}

std::vector<std::size_t> fingerprint_of(const std::string& path, const std::string& chr, std::uint64_t p) {
  auto c = load_complex(path);
  return fingerprint(c, char_or_default(c.presentation(), chr), p);
}

std::string duality(const std::string& path, const std::string& chr, std::int64_t prec) {
  auto c = load_complex(path);
  return report::to_json(duality_check(c, char_or_default(c.presentation(), chr), prec)).dump();
}

std::string torus(const std::vector<std::vector<long>>& phi) {
  std::vector<std::vector<Integer>> m;
  for (const auto& row : phi) m.emplace_back(row.begin(), row.end());
  return mapping_torus(m).serialize();
}

std::string advise_json(const std::string& kind, int dim, const std::string& pres, bool torsion,
                        std::optional<std::int64_t> euler, bool kernel_finite) {
  AdvisorInput in;
  if (kind == "cw") {
    in.kind = SpaceKind::Cw;
  } else if (kind == "manifold") {
    in.kind = SpaceKind::Manifold;
  } else {
    fail(ErrorCode::InvalidArgument, "kind must be 'cw' or 'manifold'");
  }
  in.dimension = dim;
  in.pres = PcPresentation::parse(pres);
  in.torsion = torsion;
  in.euler = euler;
  in.kernel_finite = kernel_finite;
  auto v = advise(in);
  auto j = report::to_json(v);
  j["citations"] = report::citations(v.citations);
  return j.dump();
}

std::string obstruction(const std::string& path, const std::string& chr, std::int64_t prec, bool whitehead,
                        bool kernel_fp) {
  auto c = load_complex(path);
  auto r = obstruction_report(c, char_or_default(c.presentation(), chr), prec, {whitehead, kernel_fp});
  auto j = report::to_json(r);
  j["citations"] = report::citations(r.citations);
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  static py::exception<Error> error(m, "NovikitError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, ("[" + std::string(to_string(e.code())) + "] " + e.what()).c_str());
    }
  });
  m.attr("DEFAULT_PRECISION") = kDefaultPrecision;
  m.def("collect", &collect, py::arg("pres"), py::arg("word"));
  m.def("hirsch", &hirsch, py::arg("pres"));
  m.def("homology", &homology, py::arg("path"), py::arg("char") = "", py::arg("prec") = kDefaultPrecision,
        py::arg("strategy") = "lowest");
  m.def("fingerprint", &fingerprint_of, py::arg("path"), py::arg("char") = "", py::arg("p") = 2);
  m.def("duality", &duality, py::arg("path"), py::arg("char") = "", py::arg("prec") = kDefaultPrecision);
  m.def("mapping_torus", &torus, py::arg("phi"));
  m.def("advise", &advise_json, py::arg("kind"), py::arg("dim"), py::arg("pres"), py::arg("torsion") = false,
        py::arg("euler") = py::none(), py::arg("kernel_finite") = false);
  m.def("obstruction", &obstruction, py::arg("path"), py::arg("char") = "", py::arg("prec") = kDefaultPrecision,
        py::arg("whitehead_trivial") = false, py::arg("kernel_fp") = false);
}
