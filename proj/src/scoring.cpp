#include "trustgate/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "trustgate/csv.hpp"
#include "trustgate/error.hpp"
#include "trustgate/json.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<RiskLevel, 4> kRiskLevelNames{{
    {RiskLevel::Low, "Low"},
    {RiskLevel::Moderate, "Moderate"},
    {RiskLevel::Elevated, "Elevated"},
    {RiskLevel::High, "High"},
}};

constexpr EnumNames<Effectiveness, 3> kEffectivenessTokens{{
    {Effectiveness::NotValidated, "not_validated"},
    {Effectiveness::ValidatedEffective, "effective"},
    {Effectiveness::ValidatedIneffective, "ineffective"},
}};

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

void require_pillar(const PillarMap<double>& m, Pillar p, std::string_view what) {
  if (!m.count(p)) {
    throw Error(ErrorKind::MissingPillar,
                std::string(what) + " lacks pillar '" + std::string(to_string(p)) + "'",
                Json{{"pillar", to_string(p)}});
  }
}

}  // namespace

Implementation Implementation::partial(double f) {
  if (!(f > 0.0 && f < 1.0)) {
    throw Error(ErrorKind::ValueOutOfRange,
                "partial implementation fraction must lie strictly inside (0,1), got " + shortest(f));
  }
  return {ImplementationKind::Partial, f};
}

double Implementation::credit() const {
  switch (kind) {
    case ImplementationKind::Implemented: return 1.0;
    case ImplementationKind::Partial: return fraction;
    default: return 0.0;
  }
}

std::string Implementation::to_token() const {
  switch (kind) {
    case ImplementationKind::NotApplicable: return "not_applicable";
    case ImplementationKind::NotStarted: return "not_started";
    case ImplementationKind::Partial: return "partial:" + shortest(fraction);
    case ImplementationKind::Implemented: return "implemented";
  }
  return "?";
}

Implementation Implementation::parse_token(std::string_view token) {
  if (token == "not_applicable") return not_applicable();
  if (token == "not_started") return not_started();
  if (token == "implemented") return implemented();
  constexpr std::string_view kPartial = "partial:";
  if (token.substr(0, kPartial.size()) == kPartial) {
    const auto num = token.substr(kPartial.size());
    double f = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), f);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw Error(ErrorKind::InvalidArgument, "malformed partial fraction '" + std::string(token) + "'");
    }
    return partial(f);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown implementation state '" + std::string(token) + "'");
}

std::string_view to_token(Effectiveness e) { return enum_name(kEffectivenessTokens, e); }

Effectiveness parse_effectiveness(std::string_view token) {
  auto e = enum_from_name(kEffectivenessTokens, token);
  if (!e) throw Error(ErrorKind::InvalidArgument, "unknown effectiveness '" + std::string(token) + "'");
  return *e;
}

void ControlStatus::validate() const {
  if (implementation.kind == ImplementationKind::Partial &&
      !(implementation.fraction > 0.0 && implementation.fraction < 1.0)) {
    throw Error(ErrorKind::ValueOutOfRange, "control '" + control_id + "' partial fraction outside (0,1)",
                Json{{"control", control_id}});
  }
  if (effectiveness == Effectiveness::ValidatedEffective &&
      implementation.kind != ImplementationKind::Implemented) {
    throw Error(ErrorKind::ValidationError,
                "control '" + control_id + "' cannot be validated effective before it is implemented",
                Json{{"control", control_id}});
  }
}

std::vector<ControlStatus> parse_status_csv(std::string_view text) {
  const auto table = parse_csv(text);
  if (table.header != std::vector<std::string>{"control_id", "implementation", "effectiveness", "evidence_refs"}) {
    throw Error(ErrorKind::ParseError,
                "status CSV header must be control_id,implementation,effectiveness,evidence_refs");
  }
  std::vector<ControlStatus> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    try {
      ControlStatus s;
      s.control_id = row[0];
      s.implementation = Implementation::parse_token(row[1]);
      s.effectiveness = parse_effectiveness(row[2]);
      std::string_view refs = row[3];
      while (!refs.empty()) {
        const auto semi = refs.find(';');
        auto ref = refs.substr(0, semi);
        if (!ref.empty()) s.evidence_refs.emplace_back(ref);
        if (semi == std::string_view::npos) break;
        refs.remove_prefix(semi + 1);
      }
      s.validate();
      out.push_back(std::move(s));
    } catch (const Error& e) {
      // Data line numbers are 1-based after the header.
      throw Error(e.kind(), "status CSV row " + std::to_string(i + 1) + ": " + e.what(),
                  Json{{"row", i + 1}});
    }
  }
  return out;
}

std::string format_status_csv(std::span<const ControlStatus> statuses) {
  CsvTable table;
  table.header = {"control_id", "implementation", "effectiveness", "evidence_refs"};
  for (const auto& s : statuses) {
    std::string refs;
    for (const auto& r : s.evidence_refs) {
      if (!refs.empty()) refs += ';';
      refs += r;
    }
    table.rows.push_back({s.control_id, s.implementation.to_token(), std::string(to_token(s.effectiveness)), refs});
  }
  return format_csv(table);
}

double control_implementation_score(std::span<const ControlStatus> statuses,
                                    std::span<const ControlDefinition> applicable) {
  std::unordered_map<std::string_view, const ControlStatus*> by_id;
  for (const auto& s : statuses) by_id[s.control_id] = &s;
  for (const auto& s : statuses) {
    const bool known = std::any_of(applicable.begin(), applicable.end(),
                                   [&](const ControlDefinition& c) { return c.id == s.control_id; });
    if (!known) {
      throw Error(ErrorKind::UnknownControl, "status references control '" + s.control_id +
                                                 "' which is not in the applicable set",
                  Json{{"control", s.control_id}});
    }
  }

  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& c : applicable) {
    const auto it = by_id.find(c.id);
    Implementation impl = Implementation::not_started();
    if (it != by_id.end()) impl = it->second->implementation;
    if (impl.kind == ImplementationKind::NotApplicable) continue;
    const double w = weight_of(c.priority);
    numerator += w * impl.credit();
    denominator += w;
  }
  if (denominator == 0.0) return 100.0;
  return 100.0 * numerator / denominator;
}

double control_effectiveness_score(std::span<const ControlStatus> statuses) {
  int implemented = 0;
  int effective = 0;
  for (const auto& s : statuses) {
    if (s.implementation.kind != ImplementationKind::Implemented) continue;
    ++implemented;
    if (s.effectiveness == Effectiveness::ValidatedEffective) ++effective;
  }
  if (implemented == 0) return 100.0;
  return 100.0 * effective / implemented;
}

double risk_exposure_score(double current_risk_level, double risk_appetite) {
  if (!(risk_appetite > 0.0)) {
    throw Error(ErrorKind::NonPositiveAppetite, "risk appetite must be positive, got " + shortest(risk_appetite));
  }
  if (current_risk_level < 0.0) {
    throw Error(ErrorKind::ValueOutOfRange, "current risk level must be non-negative");
  }
  return std::clamp(100.0 - 100.0 * current_risk_level / risk_appetite, 0.0, 100.0);
}

double compliance_score(int met, int total) {
  if (met < 0 || total < 0) {
    throw Error(ErrorKind::ValueOutOfRange, "requirement counts must be non-negative");
  }
  if (met > total) {
    throw Error(ErrorKind::MetExceedsTotal,
                "met requirements (" + std::to_string(met) + ") exceed total (" + std::to_string(total) + ")");
  }
  if (total == 0) return 100.0;
  return 100.0 * met / total;
}

double composite_score(double ci, double ce, double re_score, double cs) {
  // Clamp absorbs rounding at the 0/100 endpoints only.
  return std::clamp(kImplementationWeight * ci + kEffectivenessWeight * ce + kRiskExposureWeight * re_score +
                        kComplianceWeight * cs,
                    0.0, 100.0);
}

PillarAssessment pillar_score(Pillar pillar, const PillarInputs& inputs,
                              std::span<const ControlDefinition> applicable) {
  PillarAssessment a;
  a.pillar = pillar;
  a.ci = control_implementation_score(inputs.statuses, applicable);
  a.ce = control_effectiveness_score(inputs.statuses);
  a.re_score = risk_exposure_score(inputs.current_risk_level, inputs.risk_appetite);
  a.cs = compliance_score(inputs.met_requirements, inputs.total_requirements);
  a.composite = composite_score(a.ci, a.ce, a.re_score, a.cs);
  return a;
}

std::string_view to_string(RiskLevel level) { return enum_name(kRiskLevelNames, level); }

std::optional<RiskLevel> parse_risk_level(std::string_view name) {
  return enum_from_name(kRiskLevelNames, name);
}

std::string_view color_of(RiskLevel level) {
  switch (level) {
    case RiskLevel::Low: return "Green";
    case RiskLevel::Moderate: return "Yellow";
    case RiskLevel::Elevated: return "Orange";
    case RiskLevel::High: return "Red";
  }
  return "?";
}

RiskLevel classify(double score) {
  if (!(score >= 0.0 && score <= 100.0)) {
    throw Error(ErrorKind::ScoreOutOfRange, "score " + shortest(score) + " outside [0,100]");
  }
  if (score >= kLowRiskFloor) return RiskLevel::Low;
  if (score >= kModerateRiskFloor) return RiskLevel::Moderate;
  if (score >= kElevatedRiskFloor) return RiskLevel::Elevated;
  return RiskLevel::High;
}

double static_trust_index(const PillarMap<double>& weights, const PillarMap<double>& maturity,
                          const PillarMap<double>& exposure) {
  double weight_sum = 0.0;
  for (Pillar p : kAllPillars) {
    require_pillar(weights, p, "weights");
    require_pillar(maturity, p, "control maturity");
    require_pillar(exposure, p, "risk exposure");
    weight_sum += weights.at(p);
  }
  if (std::abs(weight_sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::WeightSumInvalid, "pillar weights sum to " + shortest(weight_sum) + ", expected 1.0",
                Json{{"weight_sum", weight_sum}});
  }
  double ti = 0.0;
  for (Pillar p : kAllPillars) {
    const double cm = maturity.at(p);
    const double re = exposure.at(p);
    if (cm < 0.0 || cm > 1.0 || re < 0.0 || re > 1.0) {
      throw Error(ErrorKind::ValueOutOfRange,
                  "maturity/exposure for pillar '" + std::string(to_string(p)) + "' outside [0,1]",
                  Json{{"pillar", to_string(p)}});
    }
    ti += weights.at(p) * cm * (1.0 - re);
  }
  return 100.0 * ti;
}

double weighted_trust_index(const PillarMap<double>& priorities, const PillarMap<double>& scores) {
  double num = 0.0;
  double den = 0.0;
  for (Pillar p : kAllPillars) {
    require_pillar(priorities, p, "priority weights");
    require_pillar(scores, p, "pillar scores");
    num += priorities.at(p) * scores.at(p);
    den += priorities.at(p);
  }
  if (!(den > 0.0)) throw Error(ErrorKind::WeightSumInvalid, "priority weights sum to zero");
  return std::clamp(num / den, 0.0, 100.0);
}

TrustIndexResult trust_index(const PillarMap<PillarAssessment>& assessments,
                             const PillarMap<double>& default_weights,
                             const PillarMap<PillarPriority>& priorities,
                             const std::optional<PillarMap<double>>& exposure) {
  PillarMap<double> maturity;
  PillarMap<double> derived_exposure;
  PillarMap<double> scores;
  PillarMap<double> weights;
  for (Pillar p : kAllPillars) {
    const auto it = assessments.find(p);
    if (it == assessments.end()) {
      throw Error(ErrorKind::MissingPillar, "assessment lacks pillar '" + std::string(to_string(p)) + "'",
                  Json{{"pillar", to_string(p)}});
    }
    const auto prio = priorities.find(p);
    if (prio == priorities.end()) {
      throw Error(ErrorKind::MissingPillar, "priorities lack pillar '" + std::string(to_string(p)) + "'",
                  Json{{"pillar", to_string(p)}});
    }
    maturity[p] = it->second.ci / 100.0;
    derived_exposure[p] = 1.0 - it->second.re_score / 100.0;
    scores[p] = it->second.composite;
    weights[p] = weight_of(prio->second);
  }
  TrustIndexResult r;
  r.static_ti = static_trust_index(default_weights, maturity, exposure ? *exposure : derived_exposure);
  r.weighted_ti = weighted_trust_index(weights, scores);
  r.per_pillar = assessments;
  r.band = classify(r.weighted_ti);
  return r;
}

}  // namespace trustgate
