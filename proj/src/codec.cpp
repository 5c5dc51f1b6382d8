#include "trustgate/codec.hpp"

#include "trustgate/error.hpp"

namespace trustgate {
namespace {

[[noreturn]] void bad(std::string_view key, const std::string& what) {
  throw Error(ErrorKind::InvalidArgument, "field '" + std::string(key) + "': " + what,
              Json{{"field", std::string(key)}});
}

const Json& need(const Json& j, std::string_view key) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) bad(key, "required");
  return *it;
}

bool has(const Json& j, std::string_view key) {
  if (!j.is_object()) return false;
  auto it = j.find(key);
  return it != j.end() && !it->is_null();
}

std::string str(const Json& j, std::string_view key) {
  const auto& v = need(j, key);
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

std::string str_or(const Json& j, std::string_view key, std::string fallback) {
  return has(j, key) ? str(j, key) : fallback;
}

std::optional<std::string> opt_str(const Json& j, std::string_view key) {
  if (!has(j, key)) return std::nullopt;
  return str(j, key);
}

double num(const Json& j, std::string_view key) {
  const auto& v = need(j, key);
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::optional<double> opt_num(const Json& j, std::string_view key) {
  if (!has(j, key)) return std::nullopt;
  return num(j, key);
}

int integer(const Json& j, std::string_view key) {
  const auto& v = need(j, key);
  if (!v.is_number_integer()) bad(key, "expected an integer");
  return v.get<int>();
}

std::optional<int> opt_int(const Json& j, std::string_view key) {
  if (!has(j, key)) return std::nullopt;
  return integer(j, key);
}

bool boolean(const Json& j, std::string_view key, bool fallback) {
  if (!has(j, key)) return fallback;
  const auto& v = j.at(std::string(key));
  if (!v.is_boolean()) bad(key, "expected a boolean");
  return v.get<bool>();
}

const Json& arr(const Json& j, std::string_view key) {
  const auto& v = need(j, key);
  if (!v.is_array()) bad(key, "expected an array");
  return v;
}

std::vector<std::string> str_list(const Json& j, std::string_view key) {
  std::vector<std::string> out;
  if (!has(j, key)) return out;
  for (const auto& v : arr(j, key)) {
    if (!v.is_string()) bad(key, "expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

template <typename E, typename Parse>
E enum_field(const Json& j, std::string_view key, Parse parse) {
  const auto text = str(j, key);
  auto v = parse(text);
  if (!v) bad(key, "unknown value '" + text + "'");
  return *v;
}

Pillar pillar_key(const std::string& name) {
  auto p = parse_pillar(name);
  if (!p) throw Error(ErrorKind::InvalidArgument, "unknown pillar '" + name + "'", Json{{"pillar", name}});
  return *p;
}

Date date_field(const Json& j, std::string_view key) { return Date::parse(str(j, key)); }

std::optional<Date> opt_date(const Json& j, std::string_view key) {
  if (!has(j, key)) return std::nullopt;
  return date_field(j, key);
}

Timestamp ts_field(const Json& j, std::string_view key) { return Timestamp::parse(str(j, key)); }

template <typename T>
Json nullable(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json nullable(const std::optional<Date>& v) { return v ? Json(v->to_string()) : Json(nullptr); }

}  // namespace

std::string format_number(double v) { return Json(v).dump(); }

Json encode(const AiSystem& s) {
  Json prio = Json::object();
  for (const auto& [p, v] : s.pillar_priorities) prio[std::string(to_string(p))] = to_string(v);
  Json overrides = Json::object();
  for (const auto& [p, v] : s.pillar_min_overrides) overrides[std::string(to_string(p))] = v;
  return Json{{"system_id", s.system_id},
              {"name", s.name},
              {"risk_tier", to_string(s.risk_tier)},
              {"current_phase", s.current_phase},
              {"pending_gate", nullable(s.pending_gate)},
              {"retired", s.retired},
              {"pillar_priorities", prio},
              {"pillar_min_overrides", overrides},
              {"trust_index_threshold", nullable(s.trust_index_threshold)},
              {"owner", s.owner},
              {"origin", to_string(s.origin)},
              {"business_unit", s.business_unit},
              {"vendor_attestation", nullable(s.vendor_attestation)}};
}

AiSystem decode_system(const Json& j) {
  AiSystem s;
  s.system_id = str(j, "system_id");
  s.name = str_or(j, "name", s.system_id);
  s.risk_tier = enum_field<RiskTier>(j, "risk_tier", parse_risk_tier);
  s.current_phase = opt_int(j, "current_phase").value_or(0);
  s.pending_gate = opt_int(j, "pending_gate");
  s.retired = boolean(j, "retired", false);
  if (has(j, "pillar_priorities")) {
    const auto& m = need(j, "pillar_priorities");
    if (!m.is_object()) bad("pillar_priorities", "expected an object");
    for (const auto& [k, v] : m.items()) {
      auto prio = v.is_string() ? parse_pillar_priority(v.get<std::string>()) : std::nullopt;
      if (!prio) bad("pillar_priorities." + k, "expected Critical, High, Standard or Low");
      s.pillar_priorities[pillar_key(k)] = *prio;
    }
  }
  if (has(j, "pillar_min_overrides")) {
    const auto& m = need(j, "pillar_min_overrides");
    if (!m.is_object()) bad("pillar_min_overrides", "expected an object");
    for (const auto& [k, v] : m.items()) {
      if (!v.is_number()) bad("pillar_min_overrides." + k, "expected a number");
      s.pillar_min_overrides[pillar_key(k)] = v.get<double>();
    }
  }
  s.trust_index_threshold = opt_num(j, "trust_index_threshold");
  s.owner = str_or(j, "owner", "");
  s.origin = has(j, "origin") ? enum_field<Origin>(j, "origin", parse_origin) : Origin::Internal;
  s.business_unit = str_or(j, "business_unit", "");
  s.vendor_attestation = opt_str(j, "vendor_attestation");
  return s;
}

Json encode(const ControlStatus& s) {
  return Json{{"control_id", s.control_id},
              {"implementation", s.implementation.to_token()},
              {"effectiveness", to_token(s.effectiveness)},
              {"evidence_refs", s.evidence_refs}};
}

ControlStatus decode_status(const Json& j) {
  ControlStatus s;
  s.control_id = str(j, "control_id");
  s.implementation = Implementation::parse_token(str(j, "implementation"));
  s.effectiveness = has(j, "effectiveness") ? parse_effectiveness(str(j, "effectiveness")) : Effectiveness::NotValidated;
  s.evidence_refs = str_list(j, "evidence_refs");
  s.validate();
  return s;
}

Json encode(const PillarAssessment& a) {
  return Json{{"pillar", to_string(a.pillar)}, {"ci", a.ci},           {"ce", a.ce},
              {"re_score", a.re_score},        {"cs", a.cs},           {"composite", a.composite}};
}

PillarAssessment decode_assessment(const Json& j) {
  PillarAssessment a;
  a.pillar = pillar_key(str(j, "pillar"));
  a.ci = num(j, "ci");
  a.ce = num(j, "ce");
  a.re_score = num(j, "re_score");
  a.cs = num(j, "cs");
  a.composite = num(j, "composite");
  return a;
}

Json encode(const TrustIndexResult& t) {
  Json per = Json::object();
  for (const auto& [p, a] : t.per_pillar) per[std::string(to_string(p))] = encode(a);
  return Json{{"static_ti", t.static_ti},
              {"weighted_ti", t.weighted_ti},
              {"band", to_string(t.band)},
              {"color", color_of(t.band)},
              {"per_pillar", per}};
}

TrustIndexResult decode_trust_index(const Json& j) {
  TrustIndexResult t;
  t.static_ti = num(j, "static_ti");
  t.weighted_ti = num(j, "weighted_ti");
  t.band = enum_field<RiskLevel>(j, "band", parse_risk_level);
  if (has(j, "per_pillar")) {
    for (const auto& [k, v] : need(j, "per_pillar").items()) t.per_pillar[pillar_key(k)] = decode_assessment(v);
  }
  return t;
}

Json encode(const PillarDeficit& d) {
  return Json{{"pillar", to_string(d.pillar)},
              {"required", d.required},
              {"actual", d.actual},
              {"deficit", d.deficit},
              {"excepted", d.excepted}};
}

PillarDeficit decode_deficit(const Json& j) {
  PillarDeficit d;
  d.pillar = pillar_key(str(j, "pillar"));
  d.required = num(j, "required");
  d.actual = num(j, "actual");
  d.deficit = num(j, "deficit");
  d.excepted = boolean(j, "excepted", false);
  return d;
}

Json encode(const GateEvaluation& e) {
  Json per = Json::array();
  for (const auto& d : e.per_pillar) per.push_back(encode(d));
  Json required = Json::array();
  for (const auto& c : required_approvals(e.gate, e.risk_tier, e.executive_approval_required)) {
    required.push_back(c.to_string());
  }
  return Json{{"system_id", e.system_id},
              {"risk_tier", to_string(e.risk_tier)},
              {"gate", e.gate},
              {"per_pillar", per},
              {"trust_index", encode(e.trust_index)},
              {"trust_index_threshold", nullable(e.trust_index_threshold)},
              {"controls_satisfied", e.controls_satisfied},
              {"controls_required", e.controls_required},
              {"controls_excepted", e.controls_excepted},
              {"trust_index_excepted", e.trust_index_excepted},
              {"recommended", to_string(e.recommended)},
              {"band_constraint", to_string(e.band_constraint)},
              {"executive_approval_required", e.executive_approval_required},
              {"required_approvals", required},
              {"findings", e.findings}};
}

GateEvaluation decode_evaluation(const Json& j) {
  GateEvaluation e;
  e.system_id = str(j, "system_id");
  e.risk_tier = enum_field<RiskTier>(j, "risk_tier", parse_risk_tier);
  e.gate = integer(j, "gate");
  for (const auto& d : arr(j, "per_pillar")) e.per_pillar.push_back(decode_deficit(d));
  e.trust_index = decode_trust_index(need(j, "trust_index"));
  e.trust_index_threshold = opt_num(j, "trust_index_threshold");
  e.controls_satisfied = integer(j, "controls_satisfied");
  e.controls_required = integer(j, "controls_required");
  e.controls_excepted = boolean(j, "controls_excepted", false);
  e.trust_index_excepted = boolean(j, "trust_index_excepted", false);
  e.recommended = enum_field<GateOutcome>(j, "recommended", parse_gate_outcome);
  e.band_constraint = enum_field<RiskLevel>(j, "band_constraint", parse_risk_level);
  e.executive_approval_required = boolean(j, "executive_approval_required", false);
  e.findings = str_list(j, "findings");
  return e;
}

Json encode(const Approval& a) {
  return Json{{"role", to_string(a.role)}, {"actor", a.actor}, {"timestamp", a.timestamp.to_string()}};
}

Approval decode_approval(const Json& j) {
  Approval a;
  a.role = enum_field<ApprovalRole>(j, "role", parse_approval_role);
  a.actor = str_or(j, "actor", "");
  a.timestamp = ts_field(j, "timestamp");
  return a;
}

Json encode(const ApprovalClause& c) {
  Json any = Json::array();
  for (auto r : c.any_of) any.push_back(to_string(r));
  return any;
}

Json encode(const GateDecision& d) {
  Json approvals = Json::array();
  for (const auto& a : d.approvals) approvals.push_back(encode(a));
  return Json{{"decision_id", d.decision_id},
              {"system_id", d.system_id},
              {"gate", d.gate},
              {"outcome", to_string(d.outcome)},
              {"approvals", approvals},
              {"scorecard_snapshot", encode(d.scorecard_snapshot)},
              {"remediation_plan_ref", nullable(d.remediation_plan_ref)},
              {"re_review_due", nullable(d.re_review_due)},
              {"rationale", d.rationale},
              {"decided_at", d.decided_at.to_string()},
              {"phase_before", d.phase_before},
              {"phase_after", d.phase_after}};
}

GateDecision decode_decision(const Json& j) {
  GateDecision d;
  d.decision_id = str(j, "decision_id");
  d.system_id = str(j, "system_id");
  d.gate = integer(j, "gate");
  d.outcome = enum_field<GateOutcome>(j, "outcome", parse_gate_outcome);
  for (const auto& a : arr(j, "approvals")) d.approvals.push_back(decode_approval(a));
  d.scorecard_snapshot = decode_evaluation(need(j, "scorecard_snapshot"));
  d.remediation_plan_ref = opt_str(j, "remediation_plan_ref");
  d.re_review_due = opt_date(j, "re_review_due");
  d.rationale = str_or(j, "rationale", "");
  d.decided_at = ts_field(j, "decided_at");
  d.phase_before = integer(j, "phase_before");
  d.phase_after = integer(j, "phase_after");
  return d;
}

DecisionRequest decode_decision_request(const Json& j, Timestamp now) {
  DecisionRequest r;
  r.outcome = enum_field<GateOutcome>(j, "outcome", parse_gate_outcome);
  if (has(j, "approvals")) {
    for (const auto& a : arr(j, "approvals")) {
      Approval ap;
      ap.role = enum_field<ApprovalRole>(a, "role", parse_approval_role);
      ap.actor = str_or(a, "actor", "");
      ap.timestamp = has(a, "timestamp") ? ts_field(a, "timestamp") : now;
      r.approvals.push_back(std::move(ap));
    }
  }
  r.remediation_plan_ref = opt_str(j, "remediation_plan_ref");
  r.re_review_due = opt_date(j, "re_review_due");
  r.rationale = str_or(j, "rationale", "");
  return r;
}

ExceptionRequest decode_exception_request(const Json& j, Date today) {
  ExceptionRequest r;
  r.kind = enum_field<ExceptionKind>(j, "kind", parse_exception_kind);
  r.gap_target = GapTarget::parse(str(j, "gap_target"));
  r.gap_description = str_or(j, "gap_description", "");
  r.compensating_controls = str_list(j, "compensating_controls");
  r.residual_risk = enum_field<ResidualRisk>(j, "residual_risk", parse_residual_risk);
  r.approver_role = enum_field<ApprovalRole>(j, "approver_role", parse_approval_role);
  r.granted = has(j, "granted") ? date_field(j, "granted") : today;
  r.expiry = opt_date(j, "expiry");
  r.remediation_plan_ref = opt_str(j, "remediation_plan_ref");
  r.reassessment_due = opt_date(j, "reassessment_due");
  return r;
}

Json encode(const ExceptionRecord& e) {
  return Json{{"exception_id", e.exception_id},
              {"system_id", e.system_id},
              {"kind", to_string(e.kind)},
              {"gap_target", e.gap_target.to_string()},
              {"gap_description", e.gap_description},
              {"compensating_controls", e.compensating_controls},
              {"residual_risk", to_string(e.residual_risk)},
              {"approver_role", to_string(e.approver_role)},
              {"granted", e.granted.to_string()},
              {"expiry", nullable(e.expiry)},
              {"remediation_plan_ref", nullable(e.remediation_plan_ref)},
              {"reassessment_due", nullable(e.reassessment_due)},
              {"state", to_string(e.state)}};
}

ExceptionRecord decode_exception(const Json& j) {
  ExceptionRecord e;
  e.exception_id = str(j, "exception_id");
  e.system_id = str(j, "system_id");
  e.kind = enum_field<ExceptionKind>(j, "kind", parse_exception_kind);
  e.gap_target = GapTarget::parse(str(j, "gap_target"));
  e.gap_description = str_or(j, "gap_description", "");
  e.compensating_controls = str_list(j, "compensating_controls");
  e.residual_risk = enum_field<ResidualRisk>(j, "residual_risk", parse_residual_risk);
  e.approver_role = enum_field<ApprovalRole>(j, "approver_role", parse_approval_role);
  e.granted = date_field(j, "granted");
  e.expiry = opt_date(j, "expiry");
  e.remediation_plan_ref = opt_str(j, "remediation_plan_ref");
  e.reassessment_due = opt_date(j, "reassessment_due");
  e.state = has(j, "state") ? enum_field<ExceptionState>(j, "state", parse_exception_state) : ExceptionState::Active;
  return e;
}

Json encode(const CheckSpec& s) {
  Json params;
  switch (s.kind) {
    case CheckKind::DemographicParity:
      params = Json{{"protected_column", s.parity.protected_column},
                    {"prediction_column", s.parity.prediction_column},
                    {"threshold", s.parity.threshold},
                    {"expected_groups", s.parity.expected_groups}};
      break;
    case CheckKind::RobustnessThreshold: {
      Json thr = Json::object();
      for (const auto& [k, v] : s.robustness.min_accuracy) thr[k] = v;
      params = Json{{"min_accuracy", thr}};
      break;
    }
    case CheckKind::PiiScan: {
      Json allowed = Json::array();
      for (auto t : s.pii.allowed_types) allowed.push_back(to_string(t));
      Json detectors = Json::array();
      for (auto t : s.pii.detectors) detectors.push_back(to_string(t));
      params = Json{{"allowed_types", allowed},
                    {"detectors", detectors},
                    {"medical_record_prefix", s.pii.medical_record_prefix},
                    {"medical_record_min_digits", s.pii.medical_record_min_digits},
                    {"medical_record_max_digits", s.pii.medical_record_max_digits}};
      break;
    }
  }
  return Json{{"kind", to_string(s.kind)}, {"bound_control", s.bound_control}, {"params", params}};
}

CheckSpec decode_check_spec(const Json& j) {
  CheckSpec s;
  s.kind = enum_field<CheckKind>(j, "kind", parse_check_kind);
  s.bound_control = str_or(j, "bound_control", "");
  const Json p = has(j, "params") ? need(j, "params") : Json::object();
  switch (s.kind) {
    case CheckKind::DemographicParity:
      s.parity.protected_column = str_or(p, "protected_column", s.parity.protected_column);
      s.parity.prediction_column = str_or(p, "prediction_column", s.parity.prediction_column);
      s.parity.threshold = opt_num(p, "threshold").value_or(s.parity.threshold);
      s.parity.expected_groups = str_list(p, "expected_groups");
      break;
    case CheckKind::RobustnessThreshold:
      if (has(p, "min_accuracy")) {
        s.robustness.min_accuracy.clear();
        for (const auto& [k, v] : need(p, "min_accuracy").items()) {
          if (!v.is_number()) bad("min_accuracy." + k, "expected a number");
          s.robustness.min_accuracy[k] = v.get<double>();
        }
      }
      break;
    case CheckKind::PiiScan: {
      auto types = [&](std::string_view key, std::set<PiiType>& out) {
        if (!has(p, key)) return;
        out.clear();
        for (const auto& name : str_list(p, key)) {
          auto t = parse_pii_type(name);
          if (!t) bad(key, "unknown PII type '" + name + "'");
          out.insert(*t);
        }
      };
      types("allowed_types", s.pii.allowed_types);
      types("detectors", s.pii.detectors);
      s.pii.medical_record_prefix = str_or(p, "medical_record_prefix", s.pii.medical_record_prefix);
      s.pii.medical_record_min_digits = opt_int(p, "medical_record_min_digits").value_or(s.pii.medical_record_min_digits);
      s.pii.medical_record_max_digits = opt_int(p, "medical_record_max_digits").value_or(s.pii.medical_record_max_digits);
      break;
    }
  }
  return s;
}

Json encode(const CheckResult& r) {
  return Json{{"spec", encode(r.spec)},
              {"passed", r.passed},
              {"measured", r.measured},
              {"message", r.message},
              {"executed_at", r.executed_at.to_string()}};
}

CheckResult decode_check_result(const Json& j) {
  CheckResult r;
  r.spec = decode_check_spec(need(j, "spec"));
  r.passed = boolean(j, "passed", false);
  r.measured = has(j, "measured") ? need(j, "measured") : Json::object();
  r.message = str_or(j, "message", "");
  r.executed_at = ts_field(j, "executed_at");
  return r;
}

Json encode(const RiskItem& r) {
  return Json{{"risk_id", r.risk_id},
              {"description", r.description},
              {"pillar", to_string(r.pillar)},
              {"project", r.project},
              {"likelihood", to_string(r.likelihood)},
              {"impact", to_string(r.impact)},
              {"score", r.score},
              {"level", to_string(r.level)},
              {"mitigation", r.mitigation},
              {"owner", r.owner},
              {"due_date", nullable(r.due_date)},
              {"status", to_string(r.status)}};
}

RiskItem decode_risk(const Json& j) {
  RiskItem r;
  r.risk_id = str(j, "risk_id");
  r.description = str_or(j, "description", "");
  r.pillar = pillar_key(str(j, "pillar"));
  r.project = str_or(j, "project", "");
  r.likelihood = enum_field<RiskRating>(j, "likelihood", parse_risk_rating);
  r.impact = enum_field<RiskRating>(j, "impact", parse_risk_rating);
  r.mitigation = str_or(j, "mitigation", "");
  r.owner = str_or(j, "owner", "");
  r.due_date = opt_date(j, "due_date");
  r.status = has(j, "status") ? enum_field<RiskStatus>(j, "status", parse_risk_status) : RiskStatus::Open;
  return score_risk(std::move(r));
}

Json encode(const KpiMetric& k) {
  return Json{{"name", k.name},
              {"current", k.current},
              {"target", k.target},
              {"direction", to_string(k.direction)},
              {"category", to_string(k.category)},
              {"status", to_string(k.status)},
              {"trend", k.trend ? Json(to_string(*k.trend)) : Json(nullptr)},
              {"yoy_change", nullable(k.yoy_change)}};
}

KpiMetric decode_kpi(const Json& j) {
  KpiMetric k;
  k.name = str(j, "name");
  k.current = num(j, "current");
  k.target = num(j, "target");
  k.direction = enum_field<KpiDirection>(j, "direction", parse_kpi_direction);
  k.category = has(j, "category") ? enum_field<KpiCategory>(j, "category", parse_kpi_category) : KpiCategory::Leading;
  if (has(j, "trend")) k.trend = enum_field<KpiTrend>(j, "trend", parse_kpi_trend);
  k.yoy_change = opt_num(j, "yoy_change");
  return kpi_status(std::move(k));
}

Json encode(const Error& e) { return e.to_json(); }

}  // namespace trustgate
