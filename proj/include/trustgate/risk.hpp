#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "trustgate/pillar.hpp"
#include "trustgate/time.hpp"

namespace trustgate {

enum class RiskRating { Low, Medium, High };
enum class RiskItemLevel { Critical, High, Medium, Low };
enum class RiskStatus { Open, InProgress, Mitigated, Closed };

std::string_view to_string(RiskRating r);
std::optional<RiskRating> parse_risk_rating(std::string_view name);
std::string_view to_string(RiskItemLevel l);
std::optional<RiskItemLevel> parse_risk_item_level(std::string_view name);
std::string_view to_string(RiskStatus s);
std::optional<RiskStatus> parse_risk_status(std::string_view name);

// Low=2, Medium=3, High=5.
int numeric(RiskRating r);

struct RiskScore {
  int score = 0;
  RiskItemLevel level = RiskItemLevel::Low;

  bool operator==(const RiskScore&) const = default;
};

RiskScore risk_score(RiskRating likelihood, RiskRating impact);

struct RiskItem {
  std::string risk_id;
  std::string description;
  Pillar pillar = Pillar::Cybersecurity;
  std::string project;
  RiskRating likelihood = RiskRating::Low;
  RiskRating impact = RiskRating::Low;
  int score = 0;
  RiskItemLevel level = RiskItemLevel::Low;
  std::string mitigation;
  std::string owner;
  std::optional<Date> due_date;
  RiskStatus status = RiskStatus::Open;

  bool is_open() const { return status == RiskStatus::Open || status == RiskStatus::InProgress; }
  bool operator==(const RiskItem&) const = default;
};

// Recomputes score and level from likelihood and impact.
RiskItem score_risk(RiskItem item);

enum class KpiDirection { HigherBetter, LowerBetter };
enum class KpiCategory { Lagging, Leading };
enum class KpiStatus { Green, Yellow, Red };
enum class KpiTrend { Up, Down, Flat };

std::string_view to_string(KpiDirection d);
std::optional<KpiDirection> parse_kpi_direction(std::string_view name);
std::string_view to_string(KpiCategory c);
std::optional<KpiCategory> parse_kpi_category(std::string_view name);
std::string_view to_string(KpiStatus s);
std::optional<KpiStatus> parse_kpi_status(std::string_view name);
std::string_view to_string(KpiTrend t);
std::optional<KpiTrend> parse_kpi_trend(std::string_view name);

inline constexpr double kKpiYellowDeviation = 0.75;

struct KpiMetric {
  std::string name;
  double current = 0.0;
  double target = 0.0;
  KpiDirection direction = KpiDirection::HigherBetter;
  KpiCategory category = KpiCategory::Leading;
  KpiStatus status = KpiStatus::Green;
  std::optional<KpiTrend> trend;
  std::optional<double> yoy_change;

  bool operator==(const KpiMetric&) const = default;
};

// How far the metric misses its target, relative to the target; 0 when met.
// A lower-is-better target of zero measures the miss against one unit.
double kpi_deviation(const KpiMetric& metric);

// Throws ValueOutOfRange for a negative target.
KpiMetric kpi_status(KpiMetric metric, double yellow_limit = kKpiYellowDeviation);

}  // namespace trustgate
