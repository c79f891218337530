#pragma once

#include "json.hpp"

#include "novikit/advisor.hpp"
#include "novikit/complex.hpp"
#include "novikit/reduction.hpp"
#include "novikit/sigma.hpp"

namespace novikit::report {

using Json = nlohmann::ordered_json;

Json to_json(const ConsistencyReport& r, const PcPresentation& p);
Json to_json(const ReductionMove& m);
/// {verdict, betti, euler, trace_length, precision, pivots}
Json to_json(const BettiReport& r);
Json to_json(const DualityReport& r);
Json to_json(const ValuationReport& r);
Json to_json(const WitnessReport& r);
Json to_json(const FinishCertificate& c);
Json to_json(const AdvisorVerdict& v);
Json to_json(const ObstructionReport& r);
Json citations(const std::vector<Citation>& cs);

}  // namespace novikit::report
