#pragma once

#include <string>
#include <string_view>

#include "trustgate/checks.hpp"
#include "trustgate/error.hpp"
#include "trustgate/json.hpp"
#include "trustgate/lifecycle.hpp"
#include "trustgate/risk.hpp"
#include "trustgate/scoring.hpp"

namespace trustgate {

// Record <-> JSON. Encoders emit fields in a fixed order so that dumps are
// canonical; decoders throw InvalidArgument naming the offending field.

Json encode(const AiSystem& s);
AiSystem decode_system(const Json& j);

Json encode(const ControlStatus& s);
ControlStatus decode_status(const Json& j);

Json encode(const PillarAssessment& a);
PillarAssessment decode_assessment(const Json& j);

Json encode(const TrustIndexResult& t);
TrustIndexResult decode_trust_index(const Json& j);

Json encode(const PillarDeficit& d);
PillarDeficit decode_deficit(const Json& j);

Json encode(const GateEvaluation& e);
GateEvaluation decode_evaluation(const Json& j);

Json encode(const Approval& a);
Approval decode_approval(const Json& j);

Json encode(const ApprovalClause& c);

Json encode(const GateDecision& d);
GateDecision decode_decision(const Json& j);

// Request bodies. Approval timestamps default to `now` when absent.
DecisionRequest decode_decision_request(const Json& j, Timestamp now);
ExceptionRequest decode_exception_request(const Json& j, Date today);

Json encode(const ExceptionRecord& e);
ExceptionRecord decode_exception(const Json& j);

Json encode(const CheckSpec& s);
CheckSpec decode_check_spec(const Json& j);

Json encode(const CheckResult& r);
CheckResult decode_check_result(const Json& j);

Json encode(const RiskItem& r);
RiskItem decode_risk(const Json& j);

Json encode(const KpiMetric& k);
KpiMetric decode_kpi(const Json& j);

Json encode(const Error& e);

// Shortest-roundtrip number rendering, shared with the text reports.
std::string format_number(double v);

}  // namespace trustgate
