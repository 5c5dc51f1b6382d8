#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/catalog.hpp"
#include "trustgate/pillar.hpp"

namespace trustgate {

enum class ImplementationKind { NotApplicable, NotStarted, Partial, Implemented };

struct Implementation {
  ImplementationKind kind = ImplementationKind::NotStarted;
  double fraction = 0.0;  // meaningful for Partial only, strictly inside (0,1)

  static Implementation not_applicable() { return {ImplementationKind::NotApplicable, 0.0}; }
  static Implementation not_started() { return {ImplementationKind::NotStarted, 0.0}; }
  static Implementation partial(double f);  // throws ValueOutOfRange
  static Implementation implemented() { return {ImplementationKind::Implemented, 1.0}; }

  // Contribution to the implementation score numerator.
  double credit() const;

  // CSV token: not_applicable | not_started | partial:<f> | implemented
  std::string to_token() const;
  static Implementation parse_token(std::string_view token);

  bool operator==(const Implementation&) const = default;
};

enum class Effectiveness { NotValidated, ValidatedEffective, ValidatedIneffective };

std::string_view to_token(Effectiveness e);  // not_validated | effective | ineffective
Effectiveness parse_effectiveness(std::string_view token);

struct ControlStatus {
  std::string control_id;
  Implementation implementation;
  Effectiveness effectiveness = Effectiveness::NotValidated;
  std::vector<std::string> evidence_refs;

  // Effective only when fully implemented; partial fraction in (0,1).
  void validate() const;

  bool operator==(const ControlStatus&) const = default;
};

// Header: control_id,implementation,effectiveness,evidence_refs
std::vector<ControlStatus> parse_status_csv(std::string_view text);
std::string format_status_csv(std::span<const ControlStatus> statuses);

struct PillarInputs {
  std::vector<ControlStatus> statuses;  // only controls mapped to this pillar
  double current_risk_level = 0.0;
  double risk_appetite = 1.0;
  int met_requirements = 0;
  int total_requirements = 0;
};

struct PillarAssessment {
  Pillar pillar = Pillar::Cybersecurity;
  double ci = 0.0;
  double ce = 0.0;
  double re_score = 0.0;
  double cs = 0.0;
  double composite = 0.0;

  bool operator==(const PillarAssessment&) const = default;
};

inline constexpr double kImplementationWeight = 0.40;
inline constexpr double kEffectivenessWeight = 0.30;
inline constexpr double kRiskExposureWeight = 0.20;
inline constexpr double kComplianceWeight = 0.10;

double control_implementation_score(std::span<const ControlStatus> statuses,
                                    std::span<const ControlDefinition> applicable);
double control_effectiveness_score(std::span<const ControlStatus> statuses);
double risk_exposure_score(double current_risk_level, double risk_appetite);
double compliance_score(int met, int total);

double composite_score(double ci, double ce, double re_score, double cs);
PillarAssessment pillar_score(Pillar pillar, const PillarInputs& inputs,
                              std::span<const ControlDefinition> applicable);

enum class RiskLevel { Low, Moderate, Elevated, High };

std::string_view to_string(RiskLevel level);
std::string_view color_of(RiskLevel level);  // Green / Yellow / Orange / Red
std::optional<RiskLevel> parse_risk_level(std::string_view name);

inline constexpr double kLowRiskFloor = 90.0;
inline constexpr double kModerateRiskFloor = 75.0;
inline constexpr double kElevatedRiskFloor = 60.0;

RiskLevel classify(double score);

double static_trust_index(const PillarMap<double>& weights, const PillarMap<double>& maturity,
                          const PillarMap<double>& exposure);
double weighted_trust_index(const PillarMap<double>& priorities, const PillarMap<double>& scores);

struct TrustIndexResult {
  double static_ti = 0.0;
  double weighted_ti = 0.0;
  PillarMap<PillarAssessment> per_pillar;
  RiskLevel band = RiskLevel::High;

  bool operator==(const TrustIndexResult&) const = default;
};

// Builds both indices from a complete set of pillar assessments. Control
// maturity is ci/100 and exposure 1 - re_score/100 unless `exposure` supplies
// an inherent per-pillar exposure.
TrustIndexResult trust_index(const PillarMap<PillarAssessment>& assessments,
                             const PillarMap<double>& default_weights,
                             const PillarMap<PillarPriority>& priorities,
                             const std::optional<PillarMap<double>>& exposure = std::nullopt);

}  // namespace trustgate
