#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <chrono>
#include <thread>

#include "support.hpp"
#include "trustgate/error.hpp"
#include "trustgate/http.hpp"

using namespace trustgate;
using namespace testsupport;

namespace {

const char* const kAuth = R"({"tokens": {
  "owner-token": {"actor": "olivia", "roles": ["AiCoE"]},
  "mrm-token": {"actor": "morgan", "roles": ["ModelRiskManager"]},
  "board-token": {"actor": "board", "roles": ["RiskCommittee", "PrivacyOfficer", "SecurityEngineering", "Legal",
                                             "EthicsBoard", "IndependentValidator"]}
}})";

struct Server {
  TempDir dir;
  Engine engine{default_config(), Store::open(dir.path()), [] { return ts("2026-05-04T10:00:00Z"); }};
  ApiServer api{engine, parse_auth_config(kAuth)};
  int port = api.bind("127.0.0.1", 0);
  std::thread thread{[this] { api.listen(); }};

  Server() {
    httplib::Client probe("127.0.0.1", port);
    for (int i = 0; i < 200; ++i) {
      if (probe.Get("/api/v1/session")) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    FAIL("server did not start");
  }
  ~Server() {
    api.stop();
    thread.join();
  }

  httplib::Client client(const std::string& token = "owner-token") {
    httplib::Client c("127.0.0.1", port);
    if (!token.empty()) c.set_bearer_token_auth(token);
    return c;
  }
};

Json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return Json::parse(r->body);
}

Json ready_high_risk(const std::string& id) {
  Json s = encode(make_system(id, RiskTier::HighRisk, 3));
  return s;
}

void prepare_ready(Server& srv, const std::string& id) {
  auto c = srv.client();
  REQUIRE(c.Post("/api/v1/systems", ready_high_risk(id).dump(), "application/json")->status == 201);
  Json statuses = Json::array();
  for (const auto& s : all_implemented(srv.engine.config(), 5)) statuses.push_back(encode(s));
  REQUIRE(c.Put("/api/v1/systems/" + id + "/statuses", Json{{"statuses", statuses}}.dump(), "application/json")->status ==
          200);
  REQUIRE(c.Post("/api/v1/systems/" + id + "/assess", flat_assessment_input(uniform_scores(95)).dump(),
                 "application/json")
              ->status == 201);
}

}  // namespace

TEST_CASE("requests without a valid token are unauthorized") {
  Server srv;
  auto anon = srv.client("");
  auto r = anon.Get("/api/v1/systems");
  REQUIRE(r);
  CHECK(r->status == 401);
  CHECK(body_of(r)["code"] == "Unauthorized");
  auto wrong = srv.client("nope");
  CHECK(wrong.Get("/api/v1/systems")->status == 401);
  CHECK(srv.engine.store().sequence() == 0);
}

TEST_CASE("http status mapping") {
  CHECK(http_status(ErrorKind::Unauthorized) == 401);
  CHECK(http_status(ErrorKind::AuthorityInsufficient) == 403);
  CHECK(http_status(ErrorKind::UnknownSystem) == 404);
  CHECK(http_status(ErrorKind::UpgradeForbidden) == 409);
  CHECK(http_status(ErrorKind::ValidationError) == 400);
  CHECK(http_status(ErrorKind::StoreCorrupt) == 500);
}

TEST_CASE("an empty token file is refused") {
  TempDir dir;
  Engine engine{default_config(), Store::open(dir.path())};
  CHECK_THROWS_AS(ApiServer(engine, parse_auth_config(R"({"tokens":{}})")), Error);
  CHECK_THROWS_AS(load_auth_config(dir / "absent.json"), Error);
}

TEST_CASE("session reflects the token") {
  Server srv;
  auto j = body_of(srv.client("mrm-token").Get("/api/v1/session"));
  CHECK(j["actor"] == "morgan");
  CHECK(j["roles"] == Json::array({"ModelRiskManager"}));
}

TEST_CASE("register, fetch and score a system") {
  Server srv;
  auto c = srv.client();
  auto created = c.Post("/api/v1/systems", fixture("humana-system.json").dump(), "application/json");
  REQUIRE(created);
  CHECK_MESSAGE(created->status == 201, created->body);
  CHECK(c.Post("/api/v1/systems", fixture("humana-system.json").dump(), "application/json")->status == 409);
  CHECK(c.Post("/api/v1/systems", "{not json", "application/json")->status == 400);

  auto list = body_of(c.Get("/api/v1/systems"));
  CHECK(list["systems"].size() == 1);

  auto fetched = c.Get("/api/v1/systems/humana-claims");
  CHECK(fetched->status == 200);
  CHECK(c.Get("/api/v1/systems/ghost")->status == 404);
  CHECK(body_of(c.Get("/api/v1/systems/ghost"))["code"] == "UnknownSystem");

  CHECK(c.Post("/api/v1/systems/humana-claims/assess", fixture("humana-assessment.json").dump(), "application/json")
            ->status == 201);
  auto card = c.Get("/api/v1/systems/humana-claims/scorecard");
  REQUIRE(card);
  CHECK(card->status == 200);
  const auto j = Json::parse(card->body);
  CHECK(j["level"] == "Project");
  CHECK(j["body"]["recommendation"] == "Fail");
  auto text = c.Get("/api/v1/systems/humana-claims/scorecard?format=text");
  CHECK(text->body.find("Project scorecard") != std::string::npos);
  CHECK(c.Get("/api/v1/systems/humana-claims/scorecard?level=enterprise")->status == 400);

  auto ev = body_of(c.Get("/api/v1/systems/humana-claims/gates/3/evaluation"));
  CHECK(ev["recommended"] == "Fail");
}

TEST_CASE("upgrading a failed recommendation is a conflict") {
  Server srv;
  auto c = srv.client("board-token");
  c.Post("/api/v1/systems", fixture("humana-system.json").dump(), "application/json");
  c.Post("/api/v1/systems/humana-claims/assess", fixture("humana-assessment.json").dump(), "application/json");
  const auto seq = srv.engine.store().sequence();
  auto r = c.Post("/api/v1/systems/humana-claims/gates/3/decision", Json{{"outcome", "Pass"}}.dump(),
                  "application/json");
  REQUIRE(r);
  CHECK(r->status == 409);
  CHECK(body_of(r)["code"] == "UpgradeForbidden");
  CHECK(srv.engine.store().sequence() == seq);
}

TEST_CASE("gate decisions need the full authority row") {
  Server srv;
  prepare_ready(srv, "hr");
  const auto seq = srv.engine.store().sequence();
  auto r = srv.client("mrm-token")
               .Post("/api/v1/systems/hr/gates/3/decision", Json{{"outcome", "Pass"}}.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 403);
  const auto err = body_of(r);
  CHECK(err["code"] == "AuthorityInsufficient");
  const auto missing = err["details"]["missing_roles"];
  CHECK(missing.size() == 6);
  CHECK(std::find(missing.begin(), missing.end(), Json("EthicsBoard")) != missing.end());
  CHECK(std::find(missing.begin(), missing.end(), Json("RiskCommittee")) != missing.end());
  CHECK(srv.engine.store().sequence() == seq);

  CHECK(srv.client("board-token")
            .Post("/api/v1/systems/hr/gates/2/decision", Json{{"outcome", "Pass"}}.dump(), "application/json")
            ->status == 409);

  auto ok = srv.client("board-token")
                .Post("/api/v1/systems/hr/gates/3/decision", Json{{"outcome", "Pass"}, {"rationale", "ready"}}.dump(),
                      "application/json");
  REQUIRE(ok);
  CHECK(ok->status == 201);
  CHECK(body_of(ok)["phase_after"] == 4);
}

TEST_CASE("status import accepts CSV") {
  Server srv;
  auto c = srv.client();
  c.Post("/api/v1/systems", encode(make_system("csv", RiskTier::MinimalRisk, 0)).dump(), "application/json");
  const auto statuses = all_implemented(srv.engine.config(), 0);
  auto r = c.Put("/api/v1/systems/csv/statuses", format_status_csv(statuses), "text/csv");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(body_of(r)["statuses"].size() == statuses.size());
  CHECK(srv.engine.system("csv").statuses.size() == statuses.size());
  auto bad = c.Put("/api/v1/systems/csv/statuses", "control_id,implementation\nZZZ-1,Implemented\n", "text/csv");
  CHECK(bad->status == 400);
}

TEST_CASE("exceptions, triggers and risks over the API") {
  Server srv;
  prepare_ready(srv, "ops");
  auto c = srv.client();
  Json exc{{"kind", "Temporary"},         {"gap_target", "Audit"},           {"gap_description", "backlog"},
           {"residual_risk", "Low"},      {"approver_role", "AiCoE"},        {"expiry", "2026-08-02"},
           {"remediation_plan_ref", "P-1"}};
  auto granted = c.Post("/api/v1/systems/ops/exceptions", exc.dump(), "application/json");
  CHECK_MESSAGE(granted->status == 201, granted->body);
  exc["expiry"] = "2026-08-03";
  CHECK(body_of(c.Post("/api/v1/systems/ops/exceptions", exc.dump(), "application/json"))["code"] == "ExpiryTooLate");
  exc["expiry"] = "2026-06-01";
  exc["residual_risk"] = "High";
  auto denied = c.Post("/api/v1/systems/ops/exceptions", exc.dump(), "application/json");
  CHECK(denied->status == 403);
  CHECK(body_of(c.Get("/api/v1/systems/ops/exceptions"))["exceptions"].size() == 1);

  auto trig = c.Post("/api/v1/systems/ops/triggers", Json{{"trigger", "ArchitectureChange"}}.dump(), "application/json");
  CHECK(trig->status == 409);
  CHECK(c.Post("/api/v1/systems/ops/triggers", Json{{"trigger", "Nope"}}.dump(), "application/json")->status == 400);

  Json risk{{"risk_id", "R-9"}, {"pillar", "Privacy"}, {"description", "drift"}, {"likelihood", "High"}, {"impact", "High"}};
  auto created = c.Post("/api/v1/risks", risk.dump(), "application/json");
  CHECK_MESSAGE(created->status == 201, created->body);
  CHECK(body_of(created)["level"] == "Critical");
  CHECK(body_of(c.Get("/api/v1/risks"))["risks"].size() == 1);
}

TEST_CASE("portfolio scorecard and audit feed") {
  Server srv;
  prepare_ready(srv, "p1");
  auto c = srv.client();
  auto ent = body_of(c.Get("/api/v1/portfolio/scorecard"));
  CHECK(ent["level"] == "Enterprise");
  CHECK(ent["body"]["systems"] == 1);
  CHECK(c.Get("/api/v1/portfolio/scorecard?level=project&scope=ghost")->status == 404);
  CHECK(c.Get("/api/v1/portfolio/scorecard?level=galaxy")->status == 400);

  auto all = body_of(c.Get("/api/v1/audit"));
  CHECK(all["audit_sequence"] == 3);
  CHECK(all["events"].size() == 3);
  CHECK(all["events"][0]["actor"] == "olivia");
  auto tail = body_of(c.Get("/api/v1/audit?since=2"));
  REQUIRE(tail["events"].size() == 1);
  CHECK(tail["events"][0]["sequence"] == 3);
  CHECK(c.Get("/api/v1/audit?since=x")->status == 400);
}

TEST_CASE("checks run over the API") {
  Server srv;
  prepare_ready(srv, "chk");
  auto c = srv.client();
  Json body{{"bound_control", "GRC-11"}, {"dataset_csv", "race,prediction\nA,1\nA,1\nB,0\nB,0\n"}};
  auto r = c.Post("/api/v1/systems/chk/checks/demographic-parity", body.dump(), "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  CHECK(body_of(r)["result"]["passed"] == false);
  Json rob{{"bound_control", "MDS-02"}, {"accuracies", {{"FGSM", 0.9}, {"PGD", 0.85}}}};
  auto r2 = c.Post("/api/v1/systems/chk/checks/robustness", rob.dump(), "application/json");
  CHECK(body_of(r2)["result"]["passed"] == true);
  CHECK(c.Post("/api/v1/systems/chk/checks/astrology", "{}", "application/json")->status == 400);
}
