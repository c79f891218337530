#include "novikit/report.hpp"

namespace novikit::report {

Json to_json(const ConsistencyReport& r, const PcPresentation& p) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"identity", c.identity}, {"lhs", p.format(c.lhs)}, {"rhs", p.format(c.rhs)}, {"passed", c.passed}});
  }
  return {{"consistent", r.consistent()}, {"checks", checks}};
}

Json to_json(const ReductionMove& m) {
  return {{"degree", m.degree},
          {"source", m.source},
          {"target", m.target},
          {"pivot", m.pivot_text},
          {"lead_height", m.pivot.height},
          {"lead_coefficient", m.pivot.coefficient.get_str()}};
}

Json to_json(const BettiReport& r) {
  Json pivots = Json::array();
  for (const auto& m : r.trace.moves) pivots.push_back(to_json(m));
  Json j{{"verdict", to_string(r.verdict)}};
  if (r.verdict == Verdict::Indeterminate) {
    j["betti"] = nullptr;
    j["residual_ranks"] = r.betti;
  } else {
    j["betti"] = r.betti;
  }
  j["euler"] = r.euler;
  j["trace_length"] = r.trace.moves.size();
  j["precision"] = r.precision >= kExactPrecision ? Json("inf") : Json(r.precision);
  j["pivots"] = pivots;
  return j;
}

Json to_json(const DualityReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"source", c.source}, {"l", c.l}, {"degree", c.degree}, {"status", c.status}});
  }
  return {{"dimension", r.dimension},
          {"u", to_json(r.plus)},
          {"minus_u", to_json(r.minus)},
          {"checks", checks},
          {"violated", r.violated()}};
}

Json to_json(const ValuationReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back(
        {{"degree", f.degree}, {"basis", f.label}, {"v_basis", f.lhs}, {"v_boundary", f.rhs}});
  }
  return {{"ok", r.ok}, {"failures", failures}, {"suggested_nu", r.suggested_nu}};
}

Json to_json(const WitnessReport& r) { return {{"accepted", r.accepted}, {"reasons", r.reasons}}; }

Json to_json(const FinishCertificate& c) {
  Json degrees = Json::array();
  for (const auto& d : c.degrees) {
    degrees.push_back({{"degree", d.degree},
                       {"rank", d.rank},
                       {"precision", d.precision},
                       {"left_inverse", d.left_inverse},
                       {"right_inverse", d.right_inverse},
                       {"chain_map", d.chain_map},
                       {"null_homotopic", d.null_homotopic}});
  }
  return {{"certified", c.certified}, {"acyclic_below", c.precision}, {"degrees", degrees}, {"reasons", c.reasons}};
}

Json citations(const std::vector<Citation>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) out.push_back({{"clause", c.clause}, {"condition", c.condition}});
  return out;
}

Json to_json(const AdvisorVerdict& v) {
  Json j{{"verdict", to_string(v.verdict)}, {"hirsch", v.hirsch}, {"poly_z", v.poly_z}};
  if (v.low_degree) j["low_degree"] = *v.low_degree;
  if (v.targets_pi2) j["target"] = "pi_2";
  j["caveats"] = v.caveats;
  return j;
}

Json to_json(const ObstructionReport& r) {
  Json fp = Json::object();
  for (const auto& [p, b] : r.fingerprints) fp[std::to_string(p)] = b;
  return {{"condition1", {{"status", r.condition1}, {"homology", to_json(r.homology)}, {"fingerprints", fp},
                          {"oracle_agrees", r.oracle_agrees}}},
          {"condition2", r.condition2},
          {"condition3", r.condition3},
          {"conclusion", r.conclusion},
          {"notes", r.notes}};
}

}  // namespace novikit::report
