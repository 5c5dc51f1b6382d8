#include "trustgate/report.hpp"

#include <algorithm>
#include <sstream>

#include "trustgate/codec.hpp"
#include "trustgate/engine.hpp"
#include "trustgate/error.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<ReportLevel, 5> kLevelNames{{
    {ReportLevel::Enterprise, "Enterprise"},
    {ReportLevel::BusinessUnit, "BusinessUnit"},
    {ReportLevel::Project, "Project"},
    {ReportLevel::ControlTracker, "ControlTracker"},
    {ReportLevel::Vendor, "Vendor"},
}};

constexpr EnumNames<ReportLevel, 5> kKebabNames{{
    {ReportLevel::Enterprise, "enterprise"},
    {ReportLevel::BusinessUnit, "business-unit"},
    {ReportLevel::Project, "project"},
    {ReportLevel::ControlTracker, "control-tracker"},
    {ReportLevel::Vendor, "vendor"},
}};

constexpr std::array<RiskLevel, 4> kBands{RiskLevel::Low, RiskLevel::Moderate, RiskLevel::Elevated, RiskLevel::High};

[[noreturn]] void unknown_scope(ReportLevel level, std::string_view scope) {
  throw Error(ErrorKind::UnknownScope,
              "no " + std::string(to_string(level)) + " scope named '" + std::string(scope) + "'",
              Json{{"level", to_string(level)}, {"scope", std::string(scope)}});
}

Date as_of(const RegistryState& state) { return state.last_timestamp ? state.last_timestamp->date() : Date(); }

// Evaluation at the gate under review, or nothing when the system cannot be
// evaluated (not assessed, retired, or a prohibited use).
std::optional<GateEvaluation> try_evaluate(const SystemState& s, const FrameworkConfig& config, const Date& date) {
  if (!s.assessment || s.system.retired || s.system.risk_tier == RiskTier::Unacceptable) return std::nullopt;
  return evaluate_system(s, config, s.system.gate_under_review(), date);
}

Json ti_or_null(const SystemState& s) {
  return s.assessment ? Json(s.assessment->trust_index.weighted_ti) : Json(nullptr);
}

Json band_or_null(const SystemState& s) {
  return s.assessment ? Json(to_string(s.assessment->trust_index.band)) : Json(nullptr);
}

Json color_or_null(const SystemState& s) {
  return s.assessment ? Json(color_of(s.assessment->trust_index.band)) : Json(nullptr);
}

std::string readiness(GateOutcome o) {
  switch (o) {
    case GateOutcome::Pass: return "Ready";
    case GateOutcome::ConditionalPass: return "Conditional";
    case GateOutcome::Fail: return "Blocked";
  }
  return "?";
}

Json enterprise(const RegistryState& state, const FrameworkConfig& config) {
  const Date date = as_of(state);
  std::map<RiskLevel, int> bands;
  double ti_sum = 0.0;
  int assessed = 0;
  int compliant = 0;
  int conditional = 0;
  int non_compliant = 0;
  PillarMap<double> pillar_sums;
  Json portfolio = Json::array();
  int implemented = 0;
  int in_scope = 0;
  int effective = 0;

  for (const auto& [id, s] : state.systems) {
    for (const auto& [cid, st] : s.statuses) {
      if (st.implementation.kind == ImplementationKind::NotApplicable) continue;
      ++in_scope;
      if (st.implementation.kind == ImplementationKind::Implemented) {
        ++implemented;
        if (st.effectiveness == Effectiveness::ValidatedEffective) ++effective;
      }
    }
    Json recommended = nullptr;
    if (s.assessment) {
      ++assessed;
      ti_sum += s.assessment->trust_index.weighted_ti;
      ++bands[s.assessment->trust_index.band];
      for (const auto& [p, a] : s.assessment->assessments) pillar_sums[p] += a.composite;
      if (auto ev = try_evaluate(s, config, date)) {
        recommended = to_string(ev->recommended);
        if (ev->recommended == GateOutcome::Pass) ++compliant;
        else if (ev->recommended == GateOutcome::ConditionalPass) ++conditional;
        else ++non_compliant;
      }
    }
    portfolio.push_back(Json{{"system_id", id},
                             {"name", s.system.name},
                             {"weighted_ti", ti_or_null(s)},
                             {"band", band_or_null(s)},
                             {"color", color_or_null(s)},
                             {"recommended", recommended}});
  }

  Json distribution = Json::object();
  for (auto b : kBands) {
    if (bands[b] > 0) distribution[std::string(to_string(b))] = bands[b];
  }
  Json pillar_means = Json::object();
  for (const auto& [p, sum] : pillar_sums) pillar_means[std::string(to_string(p))] = sum / assessed;

  int critical = 0;
  int high = 0;
  for (const auto& [id, r] : state.risks) {
    if (!r.is_open()) continue;
    if (r.level == RiskItemLevel::Critical) ++critical;
    if (r.level == RiskItemLevel::High) ++high;
  }
  const int evaluated = compliant + conditional + non_compliant;
  const bool has_mean = assessed > 0;
  const double mean = has_mean ? ti_sum / assessed : 0.0;

  int decisions = 0;
  int advanced = 0;
  for (const auto& [id, s] : state.systems) {
    for (const auto& d : s.decisions) {
      ++decisions;
      if (d.outcome != GateOutcome::Fail) ++advanced;
    }
  }
  Json kpis = Json::array();
  auto kpi = [&](std::string name, double current, double target, KpiDirection dir, KpiCategory cat) {
    KpiMetric m;
    m.name = std::move(name);
    m.current = current;
    m.target = target;
    m.direction = dir;
    m.category = cat;
    kpis.push_back(encode(kpi_status(m)));
  };
  if (has_mean) kpi("Overall Trust Score", mean, 85.0, KpiDirection::HigherBetter, KpiCategory::Lagging);
  kpi("Open Critical Risks", critical, 0.0, KpiDirection::LowerBetter, KpiCategory::Lagging);
  if (in_scope) {
    kpi("Controls Implemented %", 100.0 * implemented / in_scope, 100.0, KpiDirection::HigherBetter,
        KpiCategory::Leading);
  }
  if (implemented) {
    kpi("Controls Validated %", 100.0 * effective / implemented, 95.0, KpiDirection::HigherBetter,
        KpiCategory::Leading);
  }
  if (decisions) {
    kpi("Gate Pass Rate %", 100.0 * advanced / decisions, 80.0, KpiDirection::HigherBetter, KpiCategory::Leading);
  }

  return Json{{"systems", state.systems.size()},
              {"no_systems", state.systems.empty()},
              {"assessed", assessed},
              {"mean_weighted_ti", has_mean ? Json(mean) : Json(nullptr)},
              {"mean_band", has_mean ? Json(to_string(classify(mean))) : Json(nullptr)},
              {"band_distribution", distribution},
              {"pillar_means", pillar_means},
              {"open_risks", Json{{"Critical", critical}, {"High", high}}},
              {"compliance",
               Json{{"compliant", compliant},
                    {"conditional", conditional},
                    {"non_compliant", non_compliant},
                    {"not_evaluated", static_cast<int>(state.systems.size()) - evaluated},
                    {"percent_compliant", evaluated ? Json(100.0 * compliant / evaluated) : Json(nullptr)}}},
              {"benchmark", nullptr},
              {"kpis", kpis},
              {"portfolio", portfolio}};
}

Json business_unit(std::string_view unit, const RegistryState& state, const FrameworkConfig& config) {
  const Date date = as_of(state);
  Json systems = Json::array();
  double sum = 0.0;
  int assessed = 0;
  for (const auto& [id, s] : state.systems) {
    if (s.system.business_unit != unit) continue;
    Json recommended = nullptr;
    Json findings = Json::array();
    if (auto ev = try_evaluate(s, config, date)) {
      recommended = to_string(ev->recommended);
      findings = ev->findings;
    }
    if (s.assessment) {
      sum += s.assessment->trust_index.weighted_ti;
      ++assessed;
    }
    systems.push_back(Json{{"system_id", id},
                           {"name", s.system.name},
                           {"risk_tier", to_string(s.system.risk_tier)},
                           {"phase", s.system.current_phase},
                           {"gate_under_review", s.system.gate_under_review()},
                           {"weighted_ti", ti_or_null(s)},
                           {"band", band_or_null(s)},
                           {"color", color_or_null(s)},
                           {"recommended", recommended},
                           {"open_findings", findings.size()}});
  }
  if (systems.empty()) unknown_scope(ReportLevel::BusinessUnit, unit);
  return Json{{"business_unit", std::string(unit)},
              {"systems", systems},
              {"mean_weighted_ti", assessed ? Json(sum / assessed) : Json(nullptr)}};
}

Json project(const SystemState& s, const RegistryState& state, const FrameworkConfig& config) {
  const Date date = as_of(state);
  const int gate = s.system.gate_under_review();
  std::string status = "Assessed";
  if (s.system.retired) status = "Retired";
  else if (s.system.risk_tier == RiskTier::Unacceptable) status = "Prohibited";
  else if (!s.assessment) status = "NotAssessed";

  const auto ev = try_evaluate(s, config, date);
  Json pillars = Json::array();
  if (s.assessment) {
    for (const auto& [p, a] : s.assessment->assessments) {
      Json row{{"pillar", to_string(p)},       {"ci", a.ci},
               {"ce", a.ce},                   {"re_score", a.re_score},
               {"cs", a.cs},                   {"composite", a.composite},
               {"band", to_string(classify(a.composite))},
               {"color", color_of(classify(a.composite))},
               {"required", nullptr},          {"deficit", nullptr},
               {"excepted", false}};
      if (ev) {
        for (const auto& d : ev->per_pillar) {
          if (d.pillar != p) continue;
          row["required"] = d.required;
          row["deficit"] = d.deficit;
          row["excepted"] = d.excepted;
        }
      }
      pillars.push_back(std::move(row));
    }
  }
  Json ti = nullptr;
  if (s.assessment) {
    const auto& t = s.assessment->trust_index;
    ti = Json{{"static_ti", t.static_ti},
              {"weighted_ti", t.weighted_ti},
              {"band", to_string(t.band)},
              {"color", color_of(t.band)},
              {"threshold", ev ? (ev->trust_index_threshold ? Json(*ev->trust_index_threshold) : Json(nullptr))
                               : Json(nullptr)}};
  }
  Json exceptions = Json::array();
  for (const auto& e : s.open_exceptions()) {
    exceptions.push_back(Json{{"exception_id", e.exception_id},
                              {"kind", to_string(e.kind)},
                              {"gap_target", e.gap_target.to_string()},
                              {"state", to_string(e.state)},
                              {"expiry", e.expiry ? Json(e.expiry->to_string()) : Json(nullptr)}});
  }
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    checks.push_back(Json{{"result_id", c.result_id},
                          {"control", c.result.spec.bound_control},
                          {"passed", c.result.passed},
                          {"message", c.result.message}});
  }
  Json approvals = Json::array();
  if (ev) {
    for (const auto& c : required_approvals(gate, s.system.risk_tier, ev->executive_approval_required)) {
      approvals.push_back(c.to_string());
    }
  }
  return Json{{"system",
               Json{{"system_id", s.system.system_id},
                    {"name", s.system.name},
                    {"risk_tier", to_string(s.system.risk_tier)},
                    {"current_phase", s.system.current_phase},
                    {"pending_gate", s.system.pending_gate ? Json(*s.system.pending_gate) : Json(nullptr)},
                    {"business_unit", s.system.business_unit}}},
              {"gate", gate},
              {"status", status},
              {"pillars", pillars},
              {"trust_index", ti},
              {"controls", ev ? Json{{"satisfied", ev->controls_satisfied}, {"required", ev->controls_required}}
                              : Json(nullptr)},
              {"recommendation", ev ? Json(to_string(ev->recommended)) : Json(nullptr)},
              {"gate_readiness", ev ? Json(readiness(ev->recommended)) : Json(nullptr)},
              {"open_findings", ev ? Json(ev->findings) : Json::array()},
              {"required_approvals", approvals},
              {"open_exceptions", exceptions},
              {"checks", checks},
              {"assessment_sequence", s.assessment ? Json(s.assessment->sequence) : Json(nullptr)}};
}

Json control_tracker(const SystemState& s, const FrameworkConfig& config) {
  const int gate = std::min(s.system.gate_under_review(), kLastGatedPhase);
  Json controls = Json::array();
  std::map<std::string, int> summary{{"applicable", 0},  {"implemented", 0},           {"partial", 0},
                                     {"not_started", 0}, {"not_applicable", 0},        {"not_recorded", 0},
                                     {"effective", 0},   {"ineffective", 0}};
  for (const auto& c : applicable_controls(config, gate)) {
    ++summary["applicable"];
    Json row{{"control_id", c.id},
             {"title", c.title},
             {"family", c.family},
             {"priority", to_string(c.priority)},
             {"pillar", to_string(c.primary_pillar())},
             {"required_from_gate", c.required_from_gate ? Json(*c.required_from_gate) : Json(nullptr)},
             {"implementation", nullptr},
             {"effectiveness", nullptr},
             {"evidence_refs", Json::array()}};
    if (auto it = s.statuses.find(c.id); it != s.statuses.end()) {
      const auto& st = it->second;
      row["implementation"] = st.implementation.to_token();
      row["effectiveness"] = to_token(st.effectiveness);
      row["evidence_refs"] = st.evidence_refs;
      switch (st.implementation.kind) {
        case ImplementationKind::Implemented: ++summary["implemented"]; break;
        case ImplementationKind::Partial: ++summary["partial"]; break;
        case ImplementationKind::NotStarted: ++summary["not_started"]; break;
        case ImplementationKind::NotApplicable: ++summary["not_applicable"]; break;
      }
      if (st.effectiveness == Effectiveness::ValidatedEffective) ++summary["effective"];
      if (st.effectiveness == Effectiveness::ValidatedIneffective) ++summary["ineffective"];
    } else {
      ++summary["not_recorded"];
    }
    controls.push_back(std::move(row));
  }
  Json sum = Json::object();
  for (const char* key : {"applicable", "implemented", "partial", "not_started", "not_applicable", "not_recorded",
                          "effective", "ineffective"}) {
    sum[key] = summary[key];
  }
  return Json{{"system_id", s.system.system_id}, {"gate", gate}, {"summary", sum}, {"controls", controls}};
}

Json vendor(std::string_view scope, const RegistryState& state) {
  Json systems = Json::array();
  int attested = 0;
  for (const auto& [id, s] : state.systems) {
    if (s.system.origin != Origin::Vendor) continue;
    if (scope != kPortfolioScope && id != scope) continue;
    if (s.system.vendor_attestation) ++attested;
    systems.push_back(Json{{"system_id", id},
                           {"name", s.system.name},
                           {"business_unit", s.system.business_unit},
                           {"risk_tier", to_string(s.system.risk_tier)},
                           {"phase", s.system.current_phase},
                           {"vendor_attestation",
                            s.system.vendor_attestation ? Json(*s.system.vendor_attestation) : Json(nullptr)},
                           {"attestation_status", s.system.vendor_attestation ? "attested" : "missing"},
                           {"weighted_ti", ti_or_null(s)},
                           {"band", band_or_null(s)}});
  }
  if (scope != kPortfolioScope && systems.empty()) unknown_scope(ReportLevel::Vendor, scope);
  const int count = static_cast<int>(systems.size());
  return Json{{"vendor_systems", count},
              {"no_systems", count == 0},
              {"attested", attested},
              {"unattested", count - attested},
              {"systems", systems}};
}

const SystemState& scoped_system(ReportLevel level, std::string_view scope, const RegistryState& state) {
  auto it = state.systems.find(std::string(scope));
  if (it == state.systems.end()) unknown_scope(level, scope);
  return it->second;
}

// ---- text rendering --------------------------------------------------------

std::string cell(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) {
      if (!out.empty()) out += ";";
      out += cell(e);
    }
    return out.empty() ? "-" : out;
  }
  return v.dump();
}

struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(const Json& obj, const std::vector<std::string>& keys) {
    std::vector<std::string> row;
    for (const auto& k : keys) row.push_back(cell(obj.contains(k) ? obj[k] : Json(nullptr)));
    rows.push_back(std::move(row));
  }

  std::string render() const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) {
      width[c] = header[c].size();
      for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& r) {
      std::string text;
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (c) text += "  ";
        text += r[c];
        if (c + 1 < r.size()) text += std::string(width[c] - r[c].size(), ' ');
      }
      os << "  " << text << "\n";
    };
    line(header);
    std::vector<std::string> rule;
    for (auto w : width) rule.emplace_back(w, '-');
    line(rule);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

void key_values(std::ostringstream& os, const std::vector<std::pair<std::string, Json>>& kv) {
  std::size_t w = 0;
  for (const auto& [k, v] : kv) w = std::max(w, k.size());
  for (const auto& [k, v] : kv) os << k << ":" << std::string(w - k.size() + 1, ' ') << cell(v) << "\n";
}

TextTable table_of(const Json& rows, const std::vector<std::string>& keys) {
  TextTable t;
  t.header = keys;
  for (const auto& r : rows) t.add(r, keys);
  return t;
}

}  // namespace

std::string_view to_string(ReportLevel l) { return enum_name(kLevelNames, l); }

std::optional<ReportLevel> parse_report_level(std::string_view name) {
  if (auto l = enum_from_name(kLevelNames, name)) return l;
  return enum_from_name(kKebabNames, name);
}

ScorecardReport render_scorecard(ReportLevel level, std::string_view scope, const RegistryState& state,
                                 const FrameworkConfig& config) {
  ScorecardReport r;
  r.level = level;
  r.scope = std::string(scope);
  r.audit_sequence = state.sequence;
  switch (level) {
    case ReportLevel::Enterprise:
      if (scope != kPortfolioScope) unknown_scope(level, scope);
      r.cadence = "Quarterly";
      r.body = enterprise(state, config);
      break;
    case ReportLevel::BusinessUnit:
      r.cadence = "Monthly";
      r.body = business_unit(scope, state, config);
      break;
    case ReportLevel::Project:
      r.cadence = "Continuous";
      r.body = project(scoped_system(level, scope, state), state, config);
      break;
    case ReportLevel::ControlTracker:
      r.cadence = "Continuous";
      r.body = control_tracker(scoped_system(level, scope, state), config);
      break;
    case ReportLevel::Vendor:
      r.cadence = "Quarterly";
      r.body = vendor(scope, state);
      break;
  }
  return r;
}

Json encode(const ScorecardReport& r) {
  return Json{{"level", to_string(r.level)},
              {"scope", r.scope},
              {"audit_sequence", r.audit_sequence},
              {"cadence", r.cadence},
              {"body", r.body}};
}

std::string render_text(const ScorecardReport& r) {
  std::ostringstream os;
  const Json& b = r.body;
  os << to_string(r.level) << " scorecard: " << r.scope << "\n";
  key_values(os, {{"audit sequence", r.audit_sequence}, {"cadence", r.cadence}});
  os << "\n";
  switch (r.level) {
    case ReportLevel::Enterprise: {
      if (b["no_systems"].get<bool>()) {
        os << "no systems registered\n";
        break;
      }
      key_values(os, {{"systems", b["systems"]},
                      {"assessed", b["assessed"]},
                      {"mean weighted TI", b["mean_weighted_ti"]},
                      {"mean band", b["mean_band"]},
                      {"open Critical risks", b["open_risks"]["Critical"]},
                      {"open High risks", b["open_risks"]["High"]},
                      {"compliant", b["compliance"]["compliant"]},
                      {"conditional", b["compliance"]["conditional"]},
                      {"non-compliant", b["compliance"]["non_compliant"]},
                      {"not evaluated", b["compliance"]["not_evaluated"]},
                      {"% compliant", b["compliance"]["percent_compliant"]},
                      {"benchmark", b["benchmark"]}});
      os << "\nband distribution\n";
      TextTable bands;
      bands.header = {"band", "color", "systems"};
      for (const auto& [name, n] : b["band_distribution"].items()) {
        bands.rows.push_back({name, std::string(color_of(*parse_risk_level(name))), cell(n)});
      }
      os << bands.render();
      os << "\nsystems\n" << table_of(b["portfolio"], {"system_id", "weighted_ti", "band", "color", "recommended"}).render();
      os << "\nKPIs\n" << table_of(b["kpis"], {"name", "current", "target", "direction", "status"}).render();
      break;
    }
    case ReportLevel::BusinessUnit:
      key_values(os, {{"mean weighted TI", b["mean_weighted_ti"]}});
      os << "\n"
         << table_of(b["systems"], {"system_id", "risk_tier", "phase", "weighted_ti", "band", "recommended",
                                    "open_findings"})
                .render();
      break;
    case ReportLevel::Project: {
      const auto& sys = b["system"];
      key_values(os, {{"system", sys["system_id"]},
                      {"risk tier", sys["risk_tier"]},
                      {"phase", sys["current_phase"]},
                      {"gate under review", b["gate"]},
                      {"status", b["status"]},
                      {"recommendation", b["recommendation"]},
                      {"gate readiness", b["gate_readiness"]}});
      if (!b["trust_index"].is_null()) {
        const auto& ti = b["trust_index"];
        key_values(os, {{"weighted TI", ti["weighted_ti"]},
                        {"static TI", ti["static_ti"]},
                        {"band", ti["band"]},
                        {"TI threshold", ti["threshold"]}});
      }
      if (!b["controls"].is_null()) {
        key_values(os, {{"controls", cell(b["controls"]["satisfied"]) + " of " + cell(b["controls"]["required"])}});
      }
      if (!b["pillars"].empty()) {
        os << "\npillars\n"
           << table_of(b["pillars"], {"pillar", "composite", "required", "deficit", "excepted", "band"}).render();
      }
      if (!b["open_findings"].empty()) {
        os << "\nfindings\n";
        for (const auto& f : b["open_findings"]) os << "  - " << f.get<std::string>() << "\n";
      }
      if (!b["required_approvals"].empty()) {
        os << "\nrequired approvals\n";
        for (const auto& a : b["required_approvals"]) os << "  - " << a.get<std::string>() << "\n";
      }
      if (!b["open_exceptions"].empty()) {
        os << "\nopen exceptions\n"
           << table_of(b["open_exceptions"], {"exception_id", "kind", "gap_target", "state", "expiry"}).render();
      }
      if (!b["checks"].empty()) {
        os << "\nchecks\n" << table_of(b["checks"], {"result_id", "control", "passed", "message"}).render();
      }
      break;
    }
    case ReportLevel::ControlTracker: {
      std::vector<std::pair<std::string, Json>> kv{{"system", b["system_id"]}, {"gate", b["gate"]}};
      for (const auto& [k, v] : b["summary"].items()) kv.emplace_back(k, v);
      key_values(os, kv);
      os << "\n"
         << table_of(b["controls"], {"control_id", "priority", "pillar", "implementation", "effectiveness",
                                     "evidence_refs"})
                .render();
      break;
    }
    case ReportLevel::Vendor:
      if (b["no_systems"].get<bool>()) {
        os << "no vendor systems registered\n";
        break;
      }
      key_values(os, {{"vendor systems", b["vendor_systems"]},
                      {"attested", b["attested"]},
                      {"unattested", b["unattested"]}});
      os << "\n"
         << table_of(b["systems"], {"system_id", "risk_tier", "phase", "attestation_status", "weighted_ti", "band"})
                .render();
      break;
  }
  return os.str();
}

}  // namespace trustgate
