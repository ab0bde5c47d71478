#pragma once
// Canonical report emission: sorted keys, fixed 12-significant-digit floats,
// so identical config + seeds always produce byte-identical files.

#include <string>

#include "calibra/hardness.hpp"
#include "calibra/learn.hpp"
#include "calibra/metrics.hpp"
#include "calibra/rules.hpp"
#include "json.hpp"

namespace calibra {

nlohmann::json report_json(const AuditReport& rep);
std::string report_csv(const AuditReport& rep);  // one row per constraint

nlohmann::json report_json(const ConflictReport& rep);
std::string report_csv(const ConflictReport& rep);  // one summary row per trial

nlohmann::json report_json(const FractionPreservationReport& rep);
std::string report_csv(const FractionPreservationReport& rep);

nlohmann::json rule_json(const DecisionRule& rule);  // tagged kind + parameters
nlohmann::json certificate_json(const AffinenessCertificate& cert);
nlohmann::json lipschitz_json(const LipschitzEstimate& est);

std::string trace_jsonl(const LearnTrace& trace);    // one JSON record per iteration
std::string trace_plotdata(const LearnTrace& trace); // x,y columns: iteration, |gap|

// canonical serialization: keys sorted (nlohmann objects are ordered maps),
// all floats pre-rendered via fmt12
std::string canonical(const nlohmann::json& j);

AuditReport audit_report_from_json(const nlohmann::json& j);
nlohmann::json conflict_roundtrip_check(const nlohmann::json& j);  // parse + re-emit

}  // namespace calibra
