#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "trustgate/error.hpp"
#include "trustgate/risk.hpp"

using namespace trustgate;
using namespace testsupport;

TEST_CASE("risk register rows") {
  using R = RiskRating;
  CHECK(risk_score(R::High, R::High) == RiskScore{25, RiskItemLevel::Critical});
  CHECK(risk_score(R::High, R::Medium) == RiskScore{15, RiskItemLevel::High});
  CHECK(risk_score(R::Medium, R::High) == RiskScore{15, RiskItemLevel::High});
  CHECK(risk_score(R::Low, R::High) == RiskScore{10, RiskItemLevel::Medium});
  CHECK(risk_score(R::Medium, R::Medium) == RiskScore{9, RiskItemLevel::Medium});
  CHECK(risk_score(R::Low, R::Low) == RiskScore{4, RiskItemLevel::Low});
  CHECK(risk_score(R::Low, R::Medium) == RiskScore{6, RiskItemLevel::Medium});
}

TEST_CASE("risk score is symmetric and covers the whole grid") {
  const RiskRating all[] = {RiskRating::Low, RiskRating::Medium, RiskRating::High};
  for (auto l : all) {
    for (auto i : all) {
      const auto s = risk_score(l, i);
      CHECK(s == risk_score(i, l));
      CHECK(s.score == numeric(l) * numeric(i));
      const auto expected = s.score >= 20   ? RiskItemLevel::Critical
                            : s.score >= 12 ? RiskItemLevel::High
                            : s.score >= 6  ? RiskItemLevel::Medium
                                            : RiskItemLevel::Low;
      CHECK(s.level == expected);
    }
  }
}

TEST_CASE("score_risk recomputes stale scores") {
  RiskItem r;
  r.likelihood = RiskRating::High;
  r.impact = RiskRating::Medium;
  r.score = 1;
  r = score_risk(r);
  CHECK(r.score == 15);
  CHECK(r.level == RiskItemLevel::High);
}

TEST_CASE("risk JSON decoding scores the item") {
  const Json j{{"risk_id", "RISK-004"}, {"description", "EU AI Act compliance gaps"}, {"pillar", "Regulations"},
               {"project", "Enterprise"}, {"likelihood", "Low"},   {"impact", "High"},
               {"mitigation", "Gap analysis"}, {"owner", "L. Brown"}, {"due_date", "2026-02-28"},
               {"status", "Open"}};
  const auto r = decode_risk(j);
  CHECK(r.score == 10);
  CHECK(r.level == RiskItemLevel::Medium);
  CHECK(decode_risk(encode(r)) == r);
}

namespace {

KpiStatus status_of(double current, double target, KpiDirection dir) {
  KpiMetric m;
  m.current = current;
  m.target = target;
  m.direction = dir;
  return kpi_status(m).status;
}

}  // namespace

TEST_CASE("KPI rows") {
  const auto H = KpiDirection::HigherBetter;
  const auto L = KpiDirection::LowerBetter;
  CHECK(status_of(82, 85, H) == KpiStatus::Yellow);
  CHECK(status_of(0, 0, L) == KpiStatus::Green);
  CHECK(status_of(8, 5, L) == KpiStatus::Yellow);
  CHECK(status_of(2, 5, L) == KpiStatus::Green);
  CHECK(status_of(3, 10, L) == KpiStatus::Green);
  CHECK(status_of(84, 100, H) == KpiStatus::Yellow);
  CHECK(status_of(96, 95, H) == KpiStatus::Green);
  CHECK(status_of(87.5, 100, H) == KpiStatus::Yellow);
}

TEST_CASE("KPI deviation edges") {
  const auto L = KpiDirection::LowerBetter;
  const auto H = KpiDirection::HigherBetter;
  CHECK(status_of(8.75, 5, L) == KpiStatus::Yellow);
  CHECK(status_of(8.76, 5, L) == KpiStatus::Red);
  CHECK(status_of(1, 0, L) == KpiStatus::Red);
  CHECK(status_of(25, 100, H) == KpiStatus::Yellow);
  CHECK(status_of(24, 100, H) == KpiStatus::Red);
  KpiMetric zero_target;
  zero_target.current = 0.5;
  zero_target.target = 0;
  zero_target.direction = L;
  CHECK(kpi_deviation(zero_target) == 0.5);
  CHECK(kpi_status(zero_target).status == KpiStatus::Yellow);
  KpiMetric negative;
  negative.target = -1;
  try {
    kpi_status(negative);
    FAIL("expected ValueOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValueOutOfRange);
  }
}

TEST_CASE("KPI decoding keeps trend as provided") {
  const Json j{{"name", "Controls Validated"}, {"current", 72}, {"target", 95}, {"direction", "HigherBetter"},
               {"category", "Leading"}, {"trend", "Up"}, {"yoy_change", 12}};
  const auto k = decode_kpi(j);
  CHECK(k.status == KpiStatus::Yellow);
  CHECK(k.trend == KpiTrend::Up);
  CHECK(k.yoy_change == 12.0);
}
