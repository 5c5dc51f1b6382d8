#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/catalog.hpp"
#include "trustgate/scoring.hpp"
#include "trustgate/time.hpp"

namespace trustgate {

enum class RiskTier { Unacceptable, HighRisk, LimitedRisk, MinimalRisk };

inline constexpr std::array<RiskTier, 4> kAllRiskTiers{RiskTier::Unacceptable, RiskTier::HighRisk,
                                                       RiskTier::LimitedRisk, RiskTier::MinimalRisk};

std::string_view to_string(RiskTier t);
std::optional<RiskTier> parse_risk_tier(std::string_view name);

enum class Origin { Internal, Vendor };

std::string_view to_string(Origin o);
std::optional<Origin> parse_origin(std::string_view name);

enum class ApprovalRole {
  RiskCommittee,
  CSuite,
  BusinessUnitLead,
  AiCoE,
  PrivacyOfficer,
  SecurityEngineering,
  Legal,
  ModelRiskManager,
  EthicsBoard,
  DataScienceLead,
  IndependentValidator,
  ProductionApprovalBoard,
  ExecutiveSponsor,
  ITOperations,
  BusinessOwner,
  SystemOwner,
};

inline constexpr std::array<ApprovalRole, 16> kAllApprovalRoles{
    ApprovalRole::RiskCommittee,       ApprovalRole::CSuite,
    ApprovalRole::BusinessUnitLead,    ApprovalRole::AiCoE,
    ApprovalRole::PrivacyOfficer,      ApprovalRole::SecurityEngineering,
    ApprovalRole::Legal,               ApprovalRole::ModelRiskManager,
    ApprovalRole::EthicsBoard,         ApprovalRole::DataScienceLead,
    ApprovalRole::IndependentValidator, ApprovalRole::ProductionApprovalBoard,
    ApprovalRole::ExecutiveSponsor,    ApprovalRole::ITOperations,
    ApprovalRole::BusinessOwner,       ApprovalRole::SystemOwner,
};

std::string_view to_string(ApprovalRole r);
std::optional<ApprovalRole> parse_approval_role(std::string_view name);

// Ordered from least to most permissive.
enum class GateOutcome { Fail, ConditionalPass, Pass };

std::string_view to_string(GateOutcome o);
std::optional<GateOutcome> parse_gate_outcome(std::string_view name);

struct AiSystem {
  std::string system_id;
  std::string name;
  RiskTier risk_tier = RiskTier::MinimalRisk;
  int current_phase = 0;
  // Set while an operational system re-validates after a trigger.
  std::optional<int> pending_gate;
  bool retired = false;
  PillarMap<PillarPriority> pillar_priorities;
  PillarMap<double> pillar_min_overrides;
  std::optional<double> trust_index_threshold;
  std::string owner;
  Origin origin = Origin::Internal;
  std::string business_unit;
  std::optional<std::string> vendor_attestation;

  // The gate whose decision is due next.
  int gate_under_review() const { return pending_gate.value_or(current_phase); }

  bool operator==(const AiSystem&) const = default;
};

// Fills absent priorities with Standard and checks overrides against the
// priority ranges of `config`. Throws ValidationError.
AiSystem normalize_system(AiSystem system, const FrameworkConfig& config);

std::optional<double> default_trust_index_threshold(RiskTier tier);
std::optional<double> trust_index_threshold(const AiSystem& system);

// Midpoint of the priority's minimum-score range, rounded to an integer.
double default_pillar_minimum(const FrameworkConfig& config, PillarPriority priority);

PillarMap<double> effective_minimums(const AiSystem& system, const FrameworkConfig& config, int gate);

// What an exception suppresses: a pillar's deficit, the control-count
// shortfall, or the trust-index threshold.
struct GapTarget {
  enum class Kind { Pillar, Controls, TrustIndex };
  Kind kind = Kind::Pillar;
  Pillar pillar = Pillar::Cybersecurity;

  std::string to_string() const;  // pillar name, "controls" or "trust_index"
  static GapTarget parse(std::string_view text);

  bool operator==(const GapTarget&) const = default;
};

enum class ExceptionKind { RiskAcceptance, Temporary, Permanent };
enum class ResidualRisk { Low, Medium, High };
enum class ExceptionState { Active, Expired, Overdue };

std::string_view to_string(ExceptionKind k);
std::optional<ExceptionKind> parse_exception_kind(std::string_view name);
std::string_view to_string(ResidualRisk r);
std::optional<ResidualRisk> parse_residual_risk(std::string_view name);
std::string_view to_string(ExceptionState s);
std::optional<ExceptionState> parse_exception_state(std::string_view name);

inline constexpr int kMaxTemporaryExceptionDays = 90;

struct ExceptionRecord {
  std::string exception_id;
  std::string system_id;
  ExceptionKind kind = ExceptionKind::RiskAcceptance;
  GapTarget gap_target;
  std::string gap_description;
  std::vector<std::string> compensating_controls;
  ResidualRisk residual_risk = ResidualRisk::Low;
  ApprovalRole approver_role = ApprovalRole::AiCoE;
  Date granted;
  std::optional<Date> expiry;                   // Temporary only
  std::optional<std::string> remediation_plan_ref;  // Temporary only
  std::optional<Date> reassessment_due;         // Permanent only
  ExceptionState state = ExceptionState::Active;

  // Overdue permanent exceptions keep suppressing; expired temporary ones stop.
  bool suppresses(const GapTarget& gap, const Date& as_of) const;

  bool operator==(const ExceptionRecord&) const = default;
};

struct ExceptionRequest {
  ExceptionKind kind = ExceptionKind::RiskAcceptance;
  GapTarget gap_target;
  std::string gap_description;
  std::vector<std::string> compensating_controls;
  ResidualRisk residual_risk = ResidualRisk::Low;
  ApprovalRole approver_role = ApprovalRole::AiCoE;
  Date granted;
  std::optional<Date> expiry;
  std::optional<std::string> remediation_plan_ref;
  std::optional<Date> reassessment_due;
};

// Whether `role` may approve an exception of the given residual risk and kind.
bool approver_satisfies(ExceptionKind kind, ResidualRisk residual, ApprovalRole role);

// Validates a request and builds the record. Throws ApproverInsufficient,
// ExpiryTooLate, MissingPlan or InvalidArgument.
ExceptionRecord make_exception(const AiSystem& system, const ExceptionRequest& request,
                               std::string exception_id);

// Returns the records whose enforcement state changes at `now`, with the new state.
std::vector<ExceptionRecord> expire_exceptions(std::span<const ExceptionRecord> records, const Date& now);

struct PillarDeficit {
  Pillar pillar = Pillar::Cybersecurity;
  double required = 0.0;
  double actual = 0.0;
  double deficit = 0.0;
  bool excepted = false;

  bool operator==(const PillarDeficit&) const = default;
};

inline constexpr double kConditionalDeficitLimit = 5.0;
inline constexpr int kMaxConditionalPillars = 2;

struct GateEvaluation {
  std::string system_id;
  RiskTier risk_tier = RiskTier::MinimalRisk;
  int gate = 0;
  std::vector<PillarDeficit> per_pillar;
  TrustIndexResult trust_index;
  std::optional<double> trust_index_threshold;
  int controls_satisfied = 0;
  int controls_required = 0;
  bool controls_excepted = false;
  bool trust_index_excepted = false;
  GateOutcome recommended = GateOutcome::Fail;
  RiskLevel band_constraint = RiskLevel::High;
  bool executive_approval_required = false;
  std::vector<std::string> findings;

  bool operator==(const GateEvaluation&) const = default;
};

// Outcome from pillar deficits alone: Pass when all are zero, ConditionalPass
// when at most two are nonzero and none exceeds five points, Fail otherwise.
GateOutcome deficit_outcome(std::span<const double> deficits);

struct GateInputs {
  PillarMap<PillarAssessment> assessments;
  std::span<const ControlStatus> statuses;
  std::span<const ExceptionRecord> exceptions;
  Date as_of;
  // Replaces the trust index computed from `assessments`.
  std::optional<TrustIndexResult> trust_index_override;
};

GateEvaluation evaluate_gate(const AiSystem& system, const FrameworkConfig& config, int gate,
                             const GateInputs& inputs);

struct Approval {
  ApprovalRole role = ApprovalRole::AiCoE;
  std::string actor;
  Timestamp timestamp;

  bool operator==(const Approval&) const = default;
};

// One required sign-off; any listed role satisfies it.
struct ApprovalClause {
  std::vector<ApprovalRole> any_of;

  std::string to_string() const;  // "RiskCommittee|CSuite"
  bool operator==(const ApprovalClause&) const = default;
};

// Authority matrix row for (gate, tier). Gate 5 is the ongoing operational review.
std::vector<ApprovalClause> required_approvals(int gate, RiskTier tier, bool executive_approval_required = false);

std::vector<ApprovalClause> missing_approvals(std::span<const ApprovalClause> required,
                                              std::span<const Approval> approvals);

// Throws AuthorityInsufficient naming the unsatisfied clauses.
void check_authority(const GateEvaluation& evaluation, std::span<const Approval> approvals);

inline constexpr int kMinReReviewDays = 14;
inline constexpr int kMaxReReviewDays = 28;

struct DecisionRequest {
  GateOutcome outcome = GateOutcome::Fail;
  std::vector<Approval> approvals;
  std::optional<std::string> remediation_plan_ref;
  std::optional<Date> re_review_due;
  std::string rationale;
};

struct GateDecision {
  std::string decision_id;
  std::string system_id;
  int gate = 0;
  GateOutcome outcome = GateOutcome::Fail;
  std::vector<Approval> approvals;
  GateEvaluation scorecard_snapshot;
  std::optional<std::string> remediation_plan_ref;
  std::optional<Date> re_review_due;
  std::string rationale;
  Timestamp decided_at;
  int phase_before = 0;
  int phase_after = 0;

  bool operator==(const GateDecision&) const = default;
};

// Validates a human decision against the evaluation and authority matrix.
// Throws UnacceptableTier, WrongPhase, UpgradeForbidden, AuthorityInsufficient,
// MissingRemediationPlan or ReReviewOutOfWindow.
GateDecision make_decision(const AiSystem& system, const GateEvaluation& evaluation,
                           const DecisionRequest& request, std::string decision_id, Timestamp now);

// Lifecycle state after a recorded decision: Pass and ConditionalPass move one
// gate forward, Fail leaves the system where it is.
AiSystem apply_decision(AiSystem system, const GateDecision& decision);

enum class RevalidationTrigger {
  RetrainSignificantData,
  ArchitectureChange,
  NewUserPopulation,
  RegulatoryChange,
  MaterialPerformanceDegradation,
  SecurityIncidentRequiringChange,
};

inline constexpr int kRevalidationGate = 3;
inline constexpr int kOperationalPhase = 5;

std::string_view to_string(RevalidationTrigger t);
std::optional<RevalidationTrigger> parse_revalidation_trigger(std::string_view name);

// Sends an operational system back to the validation gate. Throws WrongPhase.
AiSystem apply_trigger(AiSystem system, RevalidationTrigger trigger);

}  // namespace trustgate
