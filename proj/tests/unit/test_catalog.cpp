#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "trustgate/error.hpp"

using namespace trustgate;
using namespace testsupport;

namespace {

Json minimal_catalog() {
  Json pillars = Json::array();
  const double weights[] = {0.15, 0.15, 0.15, 0.10, 0.10, 0.15, 0.10, 0.10};
  for (std::size_t i = 0; i < kAllPillars.size(); ++i) {
    pillars.push_back(Json{{"id", to_string(kAllPillars[i])}, {"weight", weights[i]}});
  }
  Json phases = Json::array();
  for (int p = 0; p <= 6; ++p) {
    Json ph{{"phase", p}};
    if (p <= 5) {
      Json mins = Json::object();
      for (Pillar pl : kAllPillars) mins[std::string(to_string(pl))] = 40 + 10 * std::min(p, 4);
      ph["per_pillar_min"] = mins;
    }
    ph["min_cumulative_controls"] = 1;
    phases.push_back(ph);
  }
  return Json{{"pillars", pillars},
              {"families", Json::array({Json{{"code", "AAA"}, {"name", "Toy"}, {"declared_count", 3}}})},
              {"controls", Json::array({
                               Json{{"id", "AAA-01"}, {"family", "AAA"}, {"title", "A"}, {"priority", "High"},
                                    {"pillars", {"Audit"}}, {"required_from_gate", 0}},
                               Json{{"id", "AAA-02"}, {"family", "AAA"}, {"title", "B"}, {"priority", "Medium"},
                                    {"pillars", {"Audit", "Privacy"}}, {"required_from_gate", 2}},
                               Json{{"id", "AAA-03"}, {"family", "AAA"}, {"title", "C"}, {"priority", "Low"},
                                    {"pillars", {"Privacy"}}, {"required_from_gate", 2}},
                           })},
              {"phases", phases},
              {"priority_min_ranges",
               Json{{"Critical", {85, 95}}, {"High", {75, 85}}, {"Standard", {60, 75}}, {"Low", {50, 65}}}}};
}

ErrorKind parse_kind(const Json& j) {
  try {
    parse_catalog(j.dump());
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("catalog unexpectedly accepted");
  return ErrorKind::ParseError;
}

}  // namespace

TEST_CASE("default catalog loads with eight pillars whose weights sum to one") {
  const auto& cfg = *default_config();
  REQUIRE(cfg.pillars.size() == 8);
  double sum = 0;
  for (const auto& p : cfg.pillars) sum += p.weight;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  const double expected[] = {0.15, 0.15, 0.15, 0.10, 0.10, 0.15, 0.10, 0.10};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(cfg.pillars[i].id == kAllPillars[i]);
    CHECK(cfg.pillars[i].weight == expected[i]);
  }
}

TEST_CASE("default catalog carries thirteen families totalling 148 controls") {
  const auto& cfg = *default_config();
  CHECK(cfg.families.size() == 13);
  CHECK(cfg.controls.size() == 148);
  CHECK(validate_family_counts(cfg).empty());
  const auto* dsp = cfg.find_family("DSP");
  REQUIRE(dsp != nullptr);
  CHECK(dsp->declared_count == 24);
}

TEST_CASE("default catalog minimum cumulative controls per gate") {
  const auto& cfg = *default_config();
  const int expected[] = {30, 45, 50, 60, 70, 80};
  for (int g = 0; g <= 5; ++g) CHECK(cfg.phase(g).min_cumulative_controls == expected[g]);
  CHECK_FALSE(cfg.phase(6).per_pillar_min.has_value());
}

TEST_CASE("check bindings are present on the default catalog") {
  const auto& cfg = *default_config();
  CHECK(cfg.find_control("GRC-11")->check_binding == CheckKind::DemographicParity);
  CHECK(cfg.find_control("MDS-02")->check_binding == CheckKind::RobustnessThreshold);
  CHECK(cfg.find_control("DSP-11")->check_binding == CheckKind::PiiScan);
}

TEST_CASE("toy catalog applicable controls by gate") {
  const auto cfg = parse_catalog(minimal_catalog().dump());
  auto ids = [&](int gate) {
    std::vector<std::string> out;
    for (const auto& c : applicable_controls(cfg, gate)) out.push_back(c.id);
    return out;
  };
  CHECK(ids(0) == std::vector<std::string>{"AAA-01"});
  CHECK(ids(1) == std::vector<std::string>{"AAA-01"});
  CHECK(ids(2) == std::vector<std::string>{"AAA-01", "AAA-02", "AAA-03"});
  std::vector<std::string> privacy;
  for (const auto& c : applicable_controls(cfg, 2, Pillar::Privacy)) privacy.push_back(c.id);
  CHECK(privacy == std::vector<std::string>{"AAA-02", "AAA-03"});
  CHECK_THROWS_AS(applicable_controls(cfg, 6), Error);
  CHECK_THROWS_AS(applicable_controls(cfg, -1), Error);
}

TEST_CASE("applicable controls form a superset chain on the default catalog") {
  const auto& cfg = *default_config();
  for (int g = 1; g <= 5; ++g) {
    const auto prev = applicable_controls(cfg, g - 1);
    const auto cur = applicable_controls(cfg, g);
    CHECK(cur.size() >= prev.size());
    for (const auto& c : prev) {
      CHECK(std::any_of(cur.begin(), cur.end(), [&](const ControlDefinition& d) { return d.id == c.id; }));
    }
  }
  CHECK(applicable_controls(cfg, 5).size() == cfg.controls.size());
}

TEST_CASE("gate out of range is GateOutOfRange") {
  try {
    applicable_controls(*default_config(), 7);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GateOutOfRange);
  }
}

TEST_CASE("weights summing to 1.6 are rejected") {
  auto j = minimal_catalog();
  for (auto& p : j["pillars"]) p["weight"] = 0.2;
  CHECK(parse_kind(j) == ErrorKind::ValidationError);
}

TEST_CASE("duplicate control id is rejected and named") {
  auto j = minimal_catalog();
  j["controls"].push_back(j["controls"][0]);
  try {
    parse_catalog(j.dump());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("AAA-01") != std::string::npos);
  }
}

TEST_CASE("dangling family, unknown field, missing phase and malformed text are rejected") {
  auto dangling = minimal_catalog();
  dangling["controls"][0]["family"] = "ZZZ";
  CHECK(parse_kind(dangling) == ErrorKind::ValidationError);

  auto unknown = minimal_catalog();
  unknown["extra"] = 1;
  CHECK(parse_kind(unknown) == ErrorKind::ParseError);

  auto missing = minimal_catalog();
  missing["phases"].erase(3);
  CHECK(parse_kind(missing) == ErrorKind::ValidationError);

  CHECK_THROWS_AS(parse_catalog("{\"pillars\": [", "broken.json"), Error);
  try {
    parse_catalog("{\"pillars\": [", "broken.json");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
}

TEST_CASE("family count discrepancies are reported without failing the load") {
  auto j = minimal_catalog();
  j["families"][0]["declared_count"] = 4;
  const auto cfg = parse_catalog(j.dump());
  const auto d = validate_family_counts(cfg);
  REQUIRE(d.size() == 1);
  CHECK(d[0].family == "AAA");
  CHECK(d[0].declared == 4);
  CHECK(d[0].actual == 3);

  j["families"][0].erase("declared_count");
  CHECK(validate_family_counts(parse_catalog(j.dump())).empty());
}

TEST_CASE("loading is deterministic") {
  const auto a = load_catalog(TRUSTGATE_DEFAULT_CATALOG);
  const auto b = load_catalog(TRUSTGATE_DEFAULT_CATALOG);
  REQUIRE(a.controls.size() == b.controls.size());
  for (std::size_t i = 0; i < a.controls.size(); ++i) {
    CHECK(a.controls[i].id == b.controls[i].id);
    CHECK(a.controls[i].pillars == b.controls[i].pillars);
    CHECK(a.controls[i].required_from_gate == b.controls[i].required_from_gate);
  }
}

TEST_CASE("control priority weights") {
  CHECK(weight_of(ControlPriority::Critical) == 3.0);
  CHECK(weight_of(ControlPriority::High) == 2.0);
  CHECK(weight_of(ControlPriority::Medium) == 1.0);
  CHECK(weight_of(ControlPriority::Low) == 0.5);
}
