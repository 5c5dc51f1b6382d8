#include "trustgate/lifecycle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trustgate/error.hpp"
#include "trustgate/json.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<RiskTier, 4> kRiskTierNames{{
    {RiskTier::Unacceptable, "Unacceptable"},
    {RiskTier::HighRisk, "HighRisk"},
    {RiskTier::LimitedRisk, "LimitedRisk"},
    {RiskTier::MinimalRisk, "MinimalRisk"},
}};

constexpr EnumNames<Origin, 2> kOriginNames{{
    {Origin::Internal, "internal"},
    {Origin::Vendor, "vendor"},
}};

constexpr EnumNames<ApprovalRole, 16> kRoleNames{{
    {ApprovalRole::RiskCommittee, "RiskCommittee"},
    {ApprovalRole::CSuite, "CSuite"},
    {ApprovalRole::BusinessUnitLead, "BusinessUnitLead"},
    {ApprovalRole::AiCoE, "AiCoE"},
    {ApprovalRole::PrivacyOfficer, "PrivacyOfficer"},
    {ApprovalRole::SecurityEngineering, "SecurityEngineering"},
    {ApprovalRole::Legal, "Legal"},
    {ApprovalRole::ModelRiskManager, "ModelRiskManager"},
    {ApprovalRole::EthicsBoard, "EthicsBoard"},
    {ApprovalRole::DataScienceLead, "DataScienceLead"},
    {ApprovalRole::IndependentValidator, "IndependentValidator"},
    {ApprovalRole::ProductionApprovalBoard, "ProductionApprovalBoard"},
    {ApprovalRole::ExecutiveSponsor, "ExecutiveSponsor"},
    {ApprovalRole::ITOperations, "ITOperations"},
    {ApprovalRole::BusinessOwner, "BusinessOwner"},
    {ApprovalRole::SystemOwner, "SystemOwner"},
}};

constexpr EnumNames<GateOutcome, 3> kOutcomeNames{{
    {GateOutcome::Fail, "Fail"},
    {GateOutcome::ConditionalPass, "ConditionalPass"},
    {GateOutcome::Pass, "Pass"},
}};

constexpr EnumNames<ExceptionKind, 3> kExceptionKindNames{{
    {ExceptionKind::RiskAcceptance, "RiskAcceptance"},
    {ExceptionKind::Temporary, "Temporary"},
    {ExceptionKind::Permanent, "Permanent"},
}};

constexpr EnumNames<ResidualRisk, 3> kResidualNames{{
    {ResidualRisk::Low, "Low"},
    {ResidualRisk::Medium, "Medium"},
    {ResidualRisk::High, "High"},
}};

constexpr EnumNames<ExceptionState, 3> kExceptionStateNames{{
    {ExceptionState::Active, "Active"},
    {ExceptionState::Expired, "Expired"},
    {ExceptionState::Overdue, "Overdue"},
}};

constexpr EnumNames<RevalidationTrigger, 6> kTriggerNames{{
    {RevalidationTrigger::RetrainSignificantData, "RetrainSignificantData"},
    {RevalidationTrigger::ArchitectureChange, "ArchitectureChange"},
    {RevalidationTrigger::NewUserPopulation, "NewUserPopulation"},
    {RevalidationTrigger::RegulatoryChange, "RegulatoryChange"},
    {RevalidationTrigger::MaterialPerformanceDegradation, "MaterialPerformanceDegradation"},
    {RevalidationTrigger::SecurityIncidentRequiringChange, "SecurityIncidentRequiringChange"},
}};

std::string fmt_score(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void require_gate(int gate, int max) {
  if (gate < 0 || gate > max) {
    throw Error(ErrorKind::GateOutOfRange,
                "gate " + std::to_string(gate) + " outside 0.." + std::to_string(max), Json{{"gate", gate}});
  }
}

void reject_unacceptable(const AiSystem& system) {
  if (system.risk_tier == RiskTier::Unacceptable) {
    throw Error(ErrorKind::UnacceptableTier,
                "system '" + system.system_id + "' is a prohibited use and cannot be gated",
                Json{{"system_id", system.system_id}});
  }
}

ApprovalClause one(ApprovalRole r) { return ApprovalClause{{r}}; }

// Exception approval authority: AI CoE < risk manager < risk committee / C-suite.
int exception_authority(ApprovalRole role) {
  switch (role) {
    case ApprovalRole::AiCoE: return 1;
    case ApprovalRole::ModelRiskManager: return 2;
    case ApprovalRole::RiskCommittee:
    case ApprovalRole::CSuite: return 3;
    default: return 0;
  }
}

int required_exception_authority(ExceptionKind kind, ResidualRisk residual) {
  if (kind == ExceptionKind::Permanent) return 3;
  switch (residual) {
    case ResidualRisk::Low: return 1;
    case ResidualRisk::Medium: return 2;
    case ResidualRisk::High: return 3;
  }
  return 3;
}

}  // namespace

std::string_view to_string(RiskTier t) { return enum_name(kRiskTierNames, t); }
std::optional<RiskTier> parse_risk_tier(std::string_view name) { return enum_from_name(kRiskTierNames, name); }
std::string_view to_string(Origin o) { return enum_name(kOriginNames, o); }
std::optional<Origin> parse_origin(std::string_view name) { return enum_from_name(kOriginNames, name); }
std::string_view to_string(ApprovalRole r) { return enum_name(kRoleNames, r); }
std::optional<ApprovalRole> parse_approval_role(std::string_view name) { return enum_from_name(kRoleNames, name); }
std::string_view to_string(GateOutcome o) { return enum_name(kOutcomeNames, o); }
std::optional<GateOutcome> parse_gate_outcome(std::string_view name) { return enum_from_name(kOutcomeNames, name); }
std::string_view to_string(ExceptionKind k) { return enum_name(kExceptionKindNames, k); }
std::optional<ExceptionKind> parse_exception_kind(std::string_view name) {
  return enum_from_name(kExceptionKindNames, name);
}
std::string_view to_string(ResidualRisk r) { return enum_name(kResidualNames, r); }
std::optional<ResidualRisk> parse_residual_risk(std::string_view name) { return enum_from_name(kResidualNames, name); }
std::string_view to_string(ExceptionState s) { return enum_name(kExceptionStateNames, s); }
std::optional<ExceptionState> parse_exception_state(std::string_view name) {
  return enum_from_name(kExceptionStateNames, name);
}
std::string_view to_string(RevalidationTrigger t) { return enum_name(kTriggerNames, t); }
std::optional<RevalidationTrigger> parse_revalidation_trigger(std::string_view name) {
  return enum_from_name(kTriggerNames, name);
}

// ---- systems ---------------------------------------------------------------

AiSystem normalize_system(AiSystem system, const FrameworkConfig& config) {
  if (system.system_id.empty()) throw Error(ErrorKind::ValidationError, "system_id must not be empty");
  if (system.current_phase < 0 || system.current_phase > kRetirementPhase) {
    throw Error(ErrorKind::ValidationError, "current_phase outside 0..6",
                Json{{"system_id", system.system_id}, {"current_phase", system.current_phase}});
  }
  if (system.risk_tier == RiskTier::Unacceptable && system.current_phase != 0) {
    throw Error(ErrorKind::ValidationError, "an Unacceptable-tier system cannot be past phase 0",
                Json{{"system_id", system.system_id}});
  }
  if (system.pending_gate &&
      (*system.pending_gate < 0 || *system.pending_gate >= system.current_phase)) {
    throw Error(ErrorKind::ValidationError, "pending_gate must precede current_phase",
                Json{{"system_id", system.system_id}});
  }
  for (Pillar p : kAllPillars) system.pillar_priorities.try_emplace(p, PillarPriority::Standard);
  for (const auto& [pillar, score] : system.pillar_min_overrides) {
    const auto prio = system.pillar_priorities.at(pillar);
    const auto& range = config.priority_min_ranges.at(prio);
    if (!range.contains(score)) {
      std::ostringstream msg;
      msg << "minimum override " << score << " for pillar '" << to_string(pillar) << "' outside the "
          << to_string(prio) << " range [" << range.low << "," << range.high << "]";
      throw Error(ErrorKind::ValidationError, msg.str(),
                  Json{{"pillar", to_string(pillar)}, {"override", score}, {"priority", to_string(prio)}});
    }
  }
  if (system.trust_index_threshold &&
      (*system.trust_index_threshold < 0.0 || *system.trust_index_threshold > 100.0)) {
    throw Error(ErrorKind::ValidationError, "trust_index_threshold outside [0,100]");
  }
  return system;
}

std::optional<double> default_trust_index_threshold(RiskTier tier) {
  switch (tier) {
    case RiskTier::HighRisk: return 70.0;
    case RiskTier::LimitedRisk: return 60.0;
    default: return std::nullopt;
  }
}

std::optional<double> trust_index_threshold(const AiSystem& system) {
  if (system.trust_index_threshold) return system.trust_index_threshold;
  return default_trust_index_threshold(system.risk_tier);
}

double default_pillar_minimum(const FrameworkConfig& config, PillarPriority priority) {
  const auto& range = config.priority_min_ranges.at(priority);
  return std::round((range.low + range.high) / 2.0);
}

PillarMap<double> effective_minimums(const AiSystem& system, const FrameworkConfig& config, int gate) {
  require_gate(gate, kLastGatedPhase);
  const auto& phase_min = *config.phase(gate).per_pillar_min;
  PillarMap<double> out;
  for (Pillar p : kAllPillars) {
    double own;
    if (auto it = system.pillar_min_overrides.find(p); it != system.pillar_min_overrides.end()) {
      own = it->second;
    } else {
      auto prio = system.pillar_priorities.find(p);
      own = default_pillar_minimum(config,
                                   prio == system.pillar_priorities.end() ? PillarPriority::Standard : prio->second);
    }
    out[p] = std::max(phase_min.at(p), own);
  }
  return out;
}

// ---- exceptions ------------------------------------------------------------

std::string GapTarget::to_string() const {
  switch (kind) {
    case Kind::Pillar: return std::string(trustgate::to_string(pillar));
    case Kind::Controls: return "controls";
    case Kind::TrustIndex: return "trust_index";
  }
  return "?";
}

GapTarget GapTarget::parse(std::string_view text) {
  if (text == "controls") return {Kind::Controls, Pillar::Cybersecurity};
  if (text == "trust_index") return {Kind::TrustIndex, Pillar::Cybersecurity};
  if (auto p = parse_pillar(text)) return {Kind::Pillar, *p};
  throw Error(ErrorKind::InvalidArgument,
              "unknown gap target '" + std::string(text) + "' (expected a pillar, 'controls' or 'trust_index')");
}

bool ExceptionRecord::suppresses(const GapTarget& gap, const Date& as_of) const {
  if (!(gap_target == gap)) return false;
  if (state == ExceptionState::Expired) return false;
  if (kind == ExceptionKind::Temporary && expiry && as_of > *expiry) return false;
  return as_of >= granted;
}

bool approver_satisfies(ExceptionKind kind, ResidualRisk residual, ApprovalRole role) {
  return exception_authority(role) >= required_exception_authority(kind, residual);
}

ExceptionRecord make_exception(const AiSystem& system, const ExceptionRequest& request,
                               std::string exception_id) {
  if (!approver_satisfies(request.kind, request.residual_risk, request.approver_role)) {
    std::string needed;
    if (request.kind == ExceptionKind::Permanent || request.residual_risk == ResidualRisk::High) {
      needed = "RiskCommittee or CSuite";
    } else if (request.residual_risk == ResidualRisk::Medium) {
      needed = "ModelRiskManager or higher";
    } else {
      needed = "AiCoE or higher";
    }
    throw Error(ErrorKind::ApproverInsufficient,
                std::string(to_string(request.approver_role)) + " cannot approve a " +
                    std::string(to_string(request.kind)) + " exception with " +
                    std::string(to_string(request.residual_risk)) + " residual risk; requires " + needed,
                Json{{"approver_role", to_string(request.approver_role)}, {"required", needed}});
  }

  ExceptionRecord rec;
  rec.exception_id = std::move(exception_id);
  rec.system_id = system.system_id;
  rec.kind = request.kind;
  rec.gap_target = request.gap_target;
  rec.gap_description = request.gap_description;
  rec.compensating_controls = request.compensating_controls;
  rec.residual_risk = request.residual_risk;
  rec.approver_role = request.approver_role;
  rec.granted = request.granted;

  switch (request.kind) {
    case ExceptionKind::Temporary: {
      if (!request.expiry) {
        throw Error(ErrorKind::InvalidArgument, "a temporary exception needs an expiry date");
      }
      const long days = request.granted.days_until(*request.expiry);
      if (days <= 0) throw Error(ErrorKind::InvalidArgument, "expiry must follow the grant date");
      if (days > kMaxTemporaryExceptionDays) {
        throw Error(ErrorKind::ExpiryTooLate,
                    "temporary exception runs " + std::to_string(days) + " days; maximum is " +
                        std::to_string(kMaxTemporaryExceptionDays),
                    Json{{"days", days}, {"max_days", kMaxTemporaryExceptionDays}});
      }
      if (!request.remediation_plan_ref || request.remediation_plan_ref->empty()) {
        throw Error(ErrorKind::MissingPlan, "a temporary exception needs a remediation plan reference");
      }
      rec.expiry = request.expiry;
      rec.remediation_plan_ref = request.remediation_plan_ref;
      break;
    }
    case ExceptionKind::Permanent: {
      const Date annual = request.granted.plus_years(1);
      const Date due = request.reassessment_due.value_or(annual);
      if (due <= request.granted || due > annual) {
        throw Error(ErrorKind::InvalidArgument, "permanent exception re-assessment must fall within one year of grant");
      }
      rec.reassessment_due = due;
      break;
    }
    case ExceptionKind::RiskAcceptance:
      break;
  }
  return rec;
}

std::vector<ExceptionRecord> expire_exceptions(std::span<const ExceptionRecord> records, const Date& now) {
  std::vector<ExceptionRecord> changed;
  for (const auto& r : records) {
    if (r.state != ExceptionState::Active) continue;
    if (r.kind == ExceptionKind::Temporary && r.expiry && now > *r.expiry) {
      auto next = r;
      next.state = ExceptionState::Expired;
      changed.push_back(std::move(next));
    } else if (r.kind == ExceptionKind::Permanent && r.reassessment_due && now > *r.reassessment_due) {
      auto next = r;
      next.state = ExceptionState::Overdue;
      changed.push_back(std::move(next));
    }
  }
  return changed;
}

// ---- gate evaluation -------------------------------------------------------

GateOutcome deficit_outcome(std::span<const double> deficits) {
  int nonzero = 0;
  for (double d : deficits) {
    if (d > kConditionalDeficitLimit) return GateOutcome::Fail;
    if (d > 0.0) ++nonzero;
  }
  if (nonzero == 0) return GateOutcome::Pass;
  if (nonzero <= kMaxConditionalPillars) return GateOutcome::ConditionalPass;
  return GateOutcome::Fail;
}

GateEvaluation evaluate_gate(const AiSystem& system, const FrameworkConfig& config, int gate,
                             const GateInputs& inputs) {
  reject_unacceptable(system);
  require_gate(gate, kRetirementPhase);
  for (Pillar p : kAllPillars) {
    if (!inputs.assessments.count(p)) {
      throw Error(ErrorKind::IncompleteAssessment,
                  "assessment for system '" + system.system_id + "' lacks pillar '" + std::string(to_string(p)) + "'",
                  Json{{"pillar", to_string(p)}});
    }
  }

  auto suppressed = [&](const GapTarget& gap) {
    return std::any_of(inputs.exceptions.begin(), inputs.exceptions.end(), [&](const ExceptionRecord& e) {
      return e.system_id == system.system_id && e.suppresses(gap, inputs.as_of);
    });
  };

  GateEvaluation ev;
  ev.system_id = system.system_id;
  ev.risk_tier = system.risk_tier;
  ev.gate = gate;
  ev.trust_index = inputs.trust_index_override
                       ? *inputs.trust_index_override
                       : trust_index(inputs.assessments, config.default_weights(), system.pillar_priorities);
  ev.band_constraint = classify(ev.trust_index.weighted_ti);
  ev.trust_index_threshold = trust_index_threshold(system);

  std::vector<double> counted_deficits;
  if (gate <= kLastGatedPhase) {
    for (const auto& [pillar, required] : effective_minimums(system, config, gate)) {
      PillarDeficit d;
      d.pillar = pillar;
      d.required = required;
      d.actual = inputs.assessments.at(pillar).composite;
      d.deficit = std::max(0.0, required - d.actual);
      d.excepted = d.deficit > 0.0 && suppressed(GapTarget{GapTarget::Kind::Pillar, pillar});
      if (!d.excepted) counted_deficits.push_back(d.deficit);
      if (d.deficit > 0.0) {
        ev.findings.push_back(std::string(to_string(pillar)) + " " + fmt_score(d.actual) + " below minimum " +
                              fmt_score(required) + " (-" + fmt_score(d.deficit) + ")" +
                              (d.excepted ? " [excepted]" : ""));
      }
      ev.per_pillar.push_back(d);
    }
  }

  // Cumulative control requirement; retirement keeps every gated control.
  const auto applicable = applicable_controls(config, std::min(gate, kLastGatedPhase));
  int in_scope = 0;
  for (const auto& c : applicable) {
    const auto it = std::find_if(inputs.statuses.begin(), inputs.statuses.end(),
                                 [&](const ControlStatus& s) { return s.control_id == c.id; });
    if (it == inputs.statuses.end()) {
      ++in_scope;
      continue;
    }
    if (it->implementation.kind == ImplementationKind::NotApplicable) continue;
    ++in_scope;
    if (it->implementation.kind == ImplementationKind::Implemented) ++ev.controls_satisfied;
  }
  const auto& min_controls = config.phase(gate).min_cumulative_controls;
  ev.controls_required = min_controls ? std::min(*min_controls, in_scope) : in_scope;

  GateOutcome outcome = deficit_outcome(counted_deficits);

  if (ev.controls_satisfied < ev.controls_required) {
    ev.controls_excepted = suppressed(GapTarget{GapTarget::Kind::Controls, Pillar::Cybersecurity});
    ev.findings.push_back("controls implemented " + std::to_string(ev.controls_satisfied) + " of " +
                          std::to_string(ev.controls_required) + " required" +
                          (ev.controls_excepted ? " [excepted]" : ""));
    if (!ev.controls_excepted) outcome = GateOutcome::Fail;
  }
  if (ev.trust_index_threshold && ev.trust_index.weighted_ti < *ev.trust_index_threshold) {
    ev.trust_index_excepted = suppressed(GapTarget{GapTarget::Kind::TrustIndex, Pillar::Cybersecurity});
    ev.findings.push_back("trust index " + fmt_score(ev.trust_index.weighted_ti) + " below threshold " +
                          fmt_score(*ev.trust_index_threshold) + (ev.trust_index_excepted ? " [excepted]" : ""));
    if (!ev.trust_index_excepted) outcome = GateOutcome::Fail;
  }
  switch (ev.band_constraint) {
    case RiskLevel::High:
      ev.findings.push_back("trust index band Red: gate blocked");
      outcome = GateOutcome::Fail;
      break;
    case RiskLevel::Elevated:
      ev.executive_approval_required = true;
      if (outcome == GateOutcome::Pass) outcome = GateOutcome::ConditionalPass;
      ev.findings.push_back("trust index band Orange: executive approval required");
      break;
    default:
      break;
  }
  ev.recommended = outcome;
  return ev;
}

// ---- approvals and decisions -----------------------------------------------

std::string ApprovalClause::to_string() const {
  std::string out;
  for (auto r : any_of) {
    if (!out.empty()) out += '|';
    out += trustgate::to_string(r);
  }
  return out;
}

std::vector<ApprovalClause> required_approvals(int gate, RiskTier tier, bool executive_approval_required) {
  require_gate(gate, kRetirementPhase);
  using R = ApprovalRole;
  // Unacceptable systems never reach a decision; their rows mirror HighRisk.
  const RiskTier row = tier == RiskTier::Unacceptable ? RiskTier::HighRisk : tier;
  std::vector<ApprovalClause> req;
  switch (gate) {
    case 0:
      if (row == RiskTier::HighRisk) req = {ApprovalClause{{R::RiskCommittee, R::CSuite}}};
      else if (row == RiskTier::LimitedRisk) req = {one(R::BusinessUnitLead), one(R::AiCoE)};
      else req = {one(R::AiCoE)};
      break;
    case 1:
      if (row == RiskTier::HighRisk) req = {one(R::PrivacyOfficer), one(R::SecurityEngineering), one(R::Legal)};
      else if (row == RiskTier::LimitedRisk) req = {one(R::PrivacyOfficer), one(R::SecurityEngineering)};
      else req = {one(R::AiCoE)};
      break;
    case 2:
      if (row == RiskTier::HighRisk) req = {one(R::ModelRiskManager), one(R::EthicsBoard)};
      else if (row == RiskTier::LimitedRisk) req = {one(R::ModelRiskManager)};
      else req = {one(R::AiCoE), one(R::DataScienceLead)};
      break;
    case 3:
      if (row == RiskTier::HighRisk) {
        req = {one(R::RiskCommittee), one(R::PrivacyOfficer), one(R::SecurityEngineering),
               one(R::Legal),         one(R::EthicsBoard),    one(R::IndependentValidator)};
      } else if (row == RiskTier::LimitedRisk) {
        req = {one(R::BusinessUnitLead), one(R::AiCoE), one(R::ModelRiskManager), one(R::PrivacyOfficer),
               one(R::SecurityEngineering)};
      } else {
        req = {one(R::AiCoE), one(R::BusinessOwner)};
      }
      break;
    case 4:
      if (row == RiskTier::HighRisk) req = {one(R::ProductionApprovalBoard), one(R::ExecutiveSponsor)};
      else if (row == RiskTier::LimitedRisk) req = {one(R::ProductionApprovalBoard)};
      else req = {one(R::AiCoE), one(R::ITOperations)};
      break;
    case 5:
      if (row == RiskTier::HighRisk) req = {one(R::RiskCommittee)};
      else if (row == RiskTier::LimitedRisk) req = {one(R::BusinessUnitLead)};
      else req = {one(R::AiCoE)};
      break;
    case 6:
      if (row == RiskTier::HighRisk) req = {one(R::SystemOwner), one(R::PrivacyOfficer), one(R::Legal)};
      else if (row == RiskTier::LimitedRisk) req = {one(R::SystemOwner), one(R::AiCoE)};
      else req = {one(R::SystemOwner)};
      break;
  }
  if (executive_approval_required) {
    const bool present = std::any_of(req.begin(), req.end(), [](const ApprovalClause& c) {
      return c.any_of == std::vector<ApprovalRole>{ApprovalRole::ExecutiveSponsor};
    });
    if (!present) req.push_back(one(ApprovalRole::ExecutiveSponsor));
  }
  return req;
}

std::vector<ApprovalClause> missing_approvals(std::span<const ApprovalClause> required,
                                              std::span<const Approval> approvals) {
  std::vector<ApprovalClause> missing;
  for (const auto& clause : required) {
    const bool met = std::any_of(approvals.begin(), approvals.end(), [&](const Approval& a) {
      return std::find(clause.any_of.begin(), clause.any_of.end(), a.role) != clause.any_of.end();
    });
    if (!met) missing.push_back(clause);
  }
  return missing;
}

void check_authority(const GateEvaluation& evaluation, std::span<const Approval> approvals) {
  const auto required =
      required_approvals(evaluation.gate, evaluation.risk_tier, evaluation.executive_approval_required);
  const auto missing = missing_approvals(required, approvals);
  if (missing.empty()) return;
  Json names = Json::array();
  std::string list;
  for (const auto& c : missing) {
    names.push_back(c.to_string());
    if (!list.empty()) list += ", ";
    list += c.to_string();
  }
  throw Error(ErrorKind::AuthorityInsufficient,
              "gate " + std::to_string(evaluation.gate) + " decision for a " +
                  std::string(to_string(evaluation.risk_tier)) + " system lacks approvals: " + list,
              Json{{"missing_roles", names}});
}

GateDecision make_decision(const AiSystem& system, const GateEvaluation& evaluation,
                           const DecisionRequest& request, std::string decision_id, Timestamp now) {
  reject_unacceptable(system);
  if (evaluation.system_id != system.system_id) {
    throw Error(ErrorKind::InvalidArgument, "evaluation belongs to a different system");
  }
  if (system.retired) {
    throw Error(ErrorKind::WrongPhase, "system '" + system.system_id + "' is retired");
  }
  if (evaluation.gate != system.gate_under_review()) {
    throw Error(ErrorKind::WrongPhase,
                "system '" + system.system_id + "' is at gate " + std::to_string(system.gate_under_review()) +
                    ", not gate " + std::to_string(evaluation.gate),
                Json{{"gate_under_review", system.gate_under_review()}, {"gate", evaluation.gate}});
  }
  if (request.outcome > evaluation.recommended) {
    throw Error(ErrorKind::UpgradeForbidden,
                "decision " + std::string(to_string(request.outcome)) + " is more permissive than the recommended " +
                    std::string(to_string(evaluation.recommended)),
                Json{{"recommended", to_string(evaluation.recommended)}, {"outcome", to_string(request.outcome)}});
  }
  check_authority(evaluation, request.approvals);
  if (request.outcome == GateOutcome::ConditionalPass) {
    if (!request.remediation_plan_ref || request.remediation_plan_ref->empty()) {
      throw Error(ErrorKind::MissingRemediationPlan, "a conditional pass requires a remediation plan reference");
    }
    if (!request.re_review_due) {
      throw Error(ErrorKind::ReReviewOutOfWindow, "a conditional pass requires a re-review date");
    }
    const long days = now.date().days_until(*request.re_review_due);
    if (days < kMinReReviewDays || days > kMaxReReviewDays) {
      throw Error(ErrorKind::ReReviewOutOfWindow,
                  "re-review must fall 2-4 weeks after the decision; got " + std::to_string(days) + " days",
                  Json{{"days", days}});
    }
  }

  GateDecision d;
  d.decision_id = std::move(decision_id);
  d.system_id = system.system_id;
  d.gate = evaluation.gate;
  d.outcome = request.outcome;
  d.approvals = request.approvals;
  d.scorecard_snapshot = evaluation;
  d.remediation_plan_ref = request.remediation_plan_ref;
  d.re_review_due = request.outcome == GateOutcome::ConditionalPass ? request.re_review_due : std::nullopt;
  d.rationale = request.rationale;
  d.decided_at = now;
  d.phase_before = system.current_phase;
  d.phase_after = apply_decision(system, d).current_phase;
  return d;
}

AiSystem apply_decision(AiSystem system, const GateDecision& decision) {
  if (decision.outcome == GateOutcome::Fail) return system;
  const int next = decision.gate + 1;
  if (system.pending_gate) {
    if (next >= system.current_phase) system.pending_gate.reset();
    else system.pending_gate = next;
  } else if (decision.gate == kRetirementPhase) {
    system.retired = true;
  } else {
    system.current_phase = next;
  }
  return system;
}

AiSystem apply_trigger(AiSystem system, RevalidationTrigger trigger) {
  if (system.current_phase != kOperationalPhase || system.retired) {
    throw Error(ErrorKind::WrongPhase,
                std::string(to_string(trigger)) + " applies only to operational (phase 5) systems; '" +
                    system.system_id + "' is in phase " + std::to_string(system.current_phase),
                Json{{"system_id", system.system_id}, {"current_phase", system.current_phase}});
  }
  system.pending_gate = kRevalidationGate;
  return system;
}

}  // namespace trustgate
