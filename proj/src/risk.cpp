#include "trustgate/risk.hpp"

#include "trustgate/error.hpp"
#include "trustgate/json.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<RiskRating, 3> kRatingNames{{
    {RiskRating::Low, "Low"},
    {RiskRating::Medium, "Medium"},
    {RiskRating::High, "High"},
}};

constexpr EnumNames<RiskItemLevel, 4> kLevelNames{{
    {RiskItemLevel::Critical, "Critical"},
    {RiskItemLevel::High, "High"},
    {RiskItemLevel::Medium, "Medium"},
    {RiskItemLevel::Low, "Low"},
}};

constexpr EnumNames<RiskStatus, 4> kStatusNames{{
    {RiskStatus::Open, "Open"},
    {RiskStatus::InProgress, "InProgress"},
    {RiskStatus::Mitigated, "Mitigated"},
    {RiskStatus::Closed, "Closed"},
}};

constexpr EnumNames<KpiDirection, 2> kDirectionNames{{
    {KpiDirection::HigherBetter, "HigherBetter"},
    {KpiDirection::LowerBetter, "LowerBetter"},
}};

constexpr EnumNames<KpiCategory, 2> kCategoryNames{{
    {KpiCategory::Lagging, "Lagging"},
    {KpiCategory::Leading, "Leading"},
}};

constexpr EnumNames<KpiStatus, 3> kKpiStatusNames{{
    {KpiStatus::Green, "Green"},
    {KpiStatus::Yellow, "Yellow"},
    {KpiStatus::Red, "Red"},
}};

constexpr EnumNames<KpiTrend, 3> kTrendNames{{
    {KpiTrend::Up, "Up"},
    {KpiTrend::Down, "Down"},
    {KpiTrend::Flat, "Flat"},
}};

}  // namespace

std::string_view to_string(RiskRating r) { return enum_name(kRatingNames, r); }
std::optional<RiskRating> parse_risk_rating(std::string_view name) { return enum_from_name(kRatingNames, name); }
std::string_view to_string(RiskItemLevel l) { return enum_name(kLevelNames, l); }
std::optional<RiskItemLevel> parse_risk_item_level(std::string_view name) { return enum_from_name(kLevelNames, name); }
std::string_view to_string(RiskStatus s) { return enum_name(kStatusNames, s); }
std::optional<RiskStatus> parse_risk_status(std::string_view name) { return enum_from_name(kStatusNames, name); }
std::string_view to_string(KpiDirection d) { return enum_name(kDirectionNames, d); }
std::optional<KpiDirection> parse_kpi_direction(std::string_view name) { return enum_from_name(kDirectionNames, name); }
std::string_view to_string(KpiCategory c) { return enum_name(kCategoryNames, c); }
std::optional<KpiCategory> parse_kpi_category(std::string_view name) { return enum_from_name(kCategoryNames, name); }
std::string_view to_string(KpiStatus s) { return enum_name(kKpiStatusNames, s); }
std::optional<KpiStatus> parse_kpi_status(std::string_view name) { return enum_from_name(kKpiStatusNames, name); }
std::string_view to_string(KpiTrend t) { return enum_name(kTrendNames, t); }
std::optional<KpiTrend> parse_kpi_trend(std::string_view name) { return enum_from_name(kTrendNames, name); }

int numeric(RiskRating r) {
  switch (r) {
    case RiskRating::Low: return 2;
    case RiskRating::Medium: return 3;
    case RiskRating::High: return 5;
  }
  return 0;
}

RiskScore risk_score(RiskRating likelihood, RiskRating impact) {
  RiskScore out;
  out.score = numeric(likelihood) * numeric(impact);
  if (out.score >= 20) out.level = RiskItemLevel::Critical;
  else if (out.score >= 12) out.level = RiskItemLevel::High;
  else if (out.score >= 6) out.level = RiskItemLevel::Medium;
  else out.level = RiskItemLevel::Low;
  return out;
}

RiskItem score_risk(RiskItem item) {
  const auto s = risk_score(item.likelihood, item.impact);
  item.score = s.score;
  item.level = s.level;
  return item;
}

double kpi_deviation(const KpiMetric& m) {
  if (m.direction == KpiDirection::HigherBetter) {
    if (m.current >= m.target) return 0.0;
    return (m.target - m.current) / m.target;
  }
  if (m.current <= m.target) return 0.0;
  if (m.target == 0.0) return m.current;
  return (m.current - m.target) / m.target;
}

KpiMetric kpi_status(KpiMetric metric, double yellow_limit) {
  if (metric.target < 0.0) {
    throw Error(ErrorKind::ValueOutOfRange, "KPI '" + metric.name + "' has a negative target",
                Json{{"target", metric.target}});
  }
  const double dev = kpi_deviation(metric);
  if (dev == 0.0) metric.status = KpiStatus::Green;
  else if (dev <= yellow_limit) metric.status = KpiStatus::Yellow;
  else metric.status = KpiStatus::Red;
  return metric;
}

}  // namespace trustgate
