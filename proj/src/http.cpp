#include "trustgate/http.hpp"

#include <httplib.h>

#include <fstream>
#include <sstream>

#include "trustgate/codec.hpp"
#include "trustgate/csv.hpp"
#include "trustgate/report.hpp"

namespace trustgate {
namespace {

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("request body is not valid JSON: ") + e.what());
  }
}

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) { send_json(res, e.to_json(), http_status(e.kind())); }

int parse_gate(const std::string& text) {
  try {
    return std::stoi(text);
  } catch (const std::exception&) {
    throw Error(ErrorKind::GateOutOfRange, "gate '" + text + "' is not a number");
  }
}

std::optional<CheckKind> parse_check_path(std::string_view name) {
  if (auto k = parse_check_kind(name)) return k;
  if (name == "demographic-parity") return CheckKind::DemographicParity;
  if (name == "robustness-threshold" || name == "robustness") return CheckKind::RobustnessThreshold;
  if (name == "pii-scan" || name == "pii") return CheckKind::PiiScan;
  return std::nullopt;
}

Json system_summary(const SystemState& s) {
  Json j = encode(s.system);
  j["weighted_ti"] = s.assessment ? Json(s.assessment->trust_index.weighted_ti) : Json(nullptr);
  j["band"] = s.assessment ? Json(to_string(s.assessment->trust_index.band)) : Json(nullptr);
  return j;
}

}  // namespace

AuthConfig parse_auth_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::AuthConfigMissing, std::string("auth config is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("tokens") || !j["tokens"].is_object()) {
    throw Error(ErrorKind::AuthConfigMissing, "auth config needs a \"tokens\" object");
  }
  AuthConfig cfg;
  for (const auto& [token, entry] : j["tokens"].items()) {
    if (token.empty() || !entry.is_object() || !entry.contains("actor") || !entry["actor"].is_string()) {
      throw Error(ErrorKind::AuthConfigMissing, "auth token entries need an \"actor\" string");
    }
    Principal p;
    p.actor = entry["actor"].get<std::string>();
    if (entry.contains("roles")) {
      for (const auto& r : entry["roles"]) {
        auto role = r.is_string() ? parse_approval_role(r.get<std::string>()) : std::nullopt;
        if (!role) throw Error(ErrorKind::AuthConfigMissing, "unknown role " + r.dump() + " in auth config");
        p.roles.push_back(*role);
      }
    }
    cfg.tokens.emplace(token, std::move(p));
  }
  if (cfg.tokens.empty()) throw Error(ErrorKind::AuthConfigMissing, "auth config defines no tokens");
  return cfg;
}

AuthConfig load_auth_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::AuthConfigMissing, "cannot read auth config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_auth_config(ss.str());
}

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Unauthorized: return 401;
    case ErrorKind::AuthorityInsufficient:
    case ErrorKind::ApproverInsufficient: return 403;
    case ErrorKind::UnknownSystem:
    case ErrorKind::UnknownScope: return 404;
    case ErrorKind::UpgradeForbidden:
    case ErrorKind::WrongPhase:
    case ErrorKind::DuplicateId:
    case ErrorKind::UnacceptableTier: return 409;
    case ErrorKind::StoreCorrupt:
    case ErrorKind::WriteFailed:
    case ErrorKind::BindFailed:
    case ErrorKind::AuthConfigMissing: return 500;
    default: return 400;
  }
}

struct ApiServer::Impl {
  Engine& engine;
  AuthConfig auth;
  httplib::Server server;

  Impl(Engine& e, AuthConfig a) : engine(e), auth(std::move(a)) {}

  const Principal& authenticate(const httplib::Request& req) const {
    const auto header = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (header.compare(0, prefix.size(), prefix) == 0) {
      auto it = auth.tokens.find(header.substr(prefix.size()));
      if (it != auth.tokens.end()) return it->second;
    }
    throw Error(ErrorKind::Unauthorized, "missing or unknown bearer token");
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&, const Principal&)>;

  httplib::Server::Handler wrap(Handler h) {
    return [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res, authenticate(req));
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        send_error(res, Error(ErrorKind::InvalidArgument, e.what()));
      }
    };
  }

  void routes() {
    const std::string sys = R"(/api/v1/systems/([^/]+))";

    server.Get("/api/v1/session", wrap([](const auto&, auto& res, const Principal& p) {
      Json roles = Json::array();
      for (auto r : p.roles) roles.push_back(to_string(r));
      send_json(res, Json{{"actor", p.actor}, {"roles", roles}});
    }));

    server.Get("/api/v1/systems", wrap([this](const auto&, auto& res, const Principal&) {
      const auto state = engine.store().state();
      Json list = Json::array();
      for (const auto& [id, s] : state.systems) list.push_back(system_summary(s));
      send_json(res, Json{{"audit_sequence", state.sequence}, {"systems", list}});
    }));

    server.Post("/api/v1/systems", wrap([this](const auto& req, auto& res, const Principal& p) {
      const auto system = engine.register_system(decode_system(parse_body(req)), p.actor);
      send_json(res, encode(system), 201);
    }));

    server.Get(sys, wrap([this](const auto& req, auto& res, const Principal&) {
      const auto state = engine.store().state();
      send_json(res, encode(state.system(req.matches[1].str()), state));
    }));

    server.Get(sys + "/scorecard", wrap([this](const auto& req, auto& res, const Principal&) {
      auto level = ReportLevel::Project;
      if (req.has_param("level")) {
        auto l = parse_report_level(req.get_param_value("level"));
        if (!l || (*l != ReportLevel::Project && *l != ReportLevel::ControlTracker)) {
          throw Error(ErrorKind::InvalidArgument, "system scorecards are project or control-tracker level");
        }
        level = *l;
      }
      const auto state = engine.store().state();
      const auto report = render_scorecard(level, req.matches[1].str(), state, engine.config());
      if (req.get_param_value("format") == "text") {
        res.set_content(render_text(report), "text/plain");
      } else {
        send_json(res, encode(report));
      }
    }));

    server.Put(sys + "/statuses", wrap([this](const auto& req, auto& res, const Principal& p) {
      std::vector<ControlStatus> statuses;
      if (req.get_header_value("Content-Type").rfind("text/csv", 0) == 0) {
        statuses = parse_status_csv(req.body);
      } else {
        const Json body = parse_body(req);
        const Json& list = body.is_array() ? body : body.value("statuses", Json::array());
        for (const auto& s : list) statuses.push_back(decode_status(s));
      }
      const auto stored = engine.import_statuses(req.matches[1].str(), statuses, p.actor);
      Json out = Json::array();
      for (const auto& s : stored) out.push_back(encode(s));
      send_json(res, Json{{"audit_sequence", engine.store().sequence()}, {"statuses", out}});
    }));

    server.Post(sys + "/assess", wrap([this](const auto& req, auto& res, const Principal& p) {
      const auto rec = engine.assess(req.matches[1].str(), decode_assessment_input(parse_body(req)), p.actor);
      send_json(res, encode_assessment_record(rec), 201);
    }));

    server.Post(sys + R"(/checks/([^/]+))", wrap([this](const auto& req, auto& res, const Principal& p) {
      const auto kind = parse_check_path(req.matches[2].str());
      if (!kind) throw Error(ErrorKind::InvalidArgument, "unknown check kind '" + req.matches[2].str() + "'");
      Json body = parse_body(req);
      Json spec_json{{"kind", to_string(*kind)},
                     {"bound_control", body.value("bound_control", std::string())},
                     {"params", body.value("params", Json::object())}};
      const auto spec = decode_check_spec(spec_json);
      CheckData data;
      if (body.contains("dataset_csv")) {
        std::optional<std::string> schema;
        if (body.contains("dataset_schema")) schema = body["dataset_schema"].dump();
        data.dataset = load_dataset_csv(body["dataset_csv"].template get<std::string>(),
                                        schema ? std::optional<std::string_view>(*schema) : std::nullopt);
      }
      if (body.contains("accuracies")) {
        for (const auto& [k, v] : body["accuracies"].items()) data.accuracies[k] = v.template get<double>();
      }
      const auto rec = engine.run_check(req.matches[1].str(), spec, data, p.actor);
      send_json(res, encode_check_record(rec), 201);
    }));

    server.Get(sys + R"(/gates/(\d+)/evaluation)", wrap([this](const auto& req, auto& res, const Principal&) {
      const auto ev = engine.evaluate(req.matches[1].str(), parse_gate(req.matches[2].str()));
      Json out = encode(ev);
      out["audit_sequence"] = engine.store().sequence();
      send_json(res, out);
    }));

    server.Post(sys + R"(/gates/(\d+)/decision)", wrap([this](const auto& req, auto& res, const Principal& p) {
      const Timestamp now = engine.now();
      const Json body = parse_body(req);
      auto request = decode_decision_request(body, now);
      if (!body.contains("approvals")) {
        for (auto role : p.roles) request.approvals.push_back(Approval{role, p.actor, now});
      }
      const auto decision = engine.decide(req.matches[1].str(), parse_gate(req.matches[2].str()), request, p.actor);
      send_json(res, encode(decision), 201);
    }));

    server.Post(sys + "/exceptions", wrap([this](const auto& req, auto& res, const Principal& p) {
      const auto rec = engine.grant_exception(req.matches[1].str(),
                                              decode_exception_request(parse_body(req), engine.now().date()), p.actor);
      send_json(res, encode(rec), 201);
    }));

    server.Get(sys + "/exceptions", wrap([this](const auto& req, auto& res, const Principal&) {
      Json list = Json::array();
      for (const auto& e : engine.system(req.matches[1].str()).exceptions) list.push_back(encode(e));
      send_json(res, Json{{"exceptions", list}});
    }));

    server.Post(sys + "/triggers", wrap([this](const auto& req, auto& res, const Principal& p) {
      const Json body = parse_body(req);
      const auto name = body.value("trigger", std::string());
      auto trigger = parse_revalidation_trigger(name);
      if (!trigger) throw Error(ErrorKind::InvalidArgument, "unknown trigger '" + name + "'");
      send_json(res, encode(engine.fire_trigger(req.matches[1].str(), *trigger, p.actor)), 201);
    }));

    server.Get("/api/v1/portfolio/scorecard", wrap([this](const auto& req, auto& res, const Principal&) {
      auto level = ReportLevel::Enterprise;
      if (req.has_param("level")) {
        auto l = parse_report_level(req.get_param_value("level"));
        if (!l) throw Error(ErrorKind::InvalidArgument, "unknown report level");
        level = *l;
      }
      const std::string scope = req.has_param("scope") ? req.get_param_value("scope") : std::string(kPortfolioScope);
      const auto report = render_scorecard(level, scope, engine.store().state(), engine.config());
      if (req.get_param_value("format") == "text") {
        res.set_content(render_text(report), "text/plain");
      } else {
        send_json(res, encode(report));
      }
    }));

    server.Get("/api/v1/risks", wrap([this](const auto&, auto& res, const Principal&) {
      Json list = Json::array();
      for (const auto& r : engine.risks()) list.push_back(encode(r));
      send_json(res, Json{{"risks", list}});
    }));

    server.Post("/api/v1/risks", wrap([this](const auto& req, auto& res, const Principal& p) {
      send_json(res, encode(engine.upsert_risk(decode_risk(parse_body(req)), p.actor)), 201);
    }));

    server.Get("/api/v1/audit", wrap([this](const auto& req, auto& res, const Principal&) {
      std::uint64_t since = 0;
      if (req.has_param("since")) {
        try {
          since = std::stoull(req.get_param_value("since"));
        } catch (const std::exception&) {
          throw Error(ErrorKind::InvalidArgument, "since must be a non-negative integer");
        }
      }
      Json events = Json::array();
      for (const auto& e : engine.store().events(since)) events.push_back(encode(e));
      send_json(res, Json{{"audit_sequence", engine.store().sequence()}, {"events", events}});
    }));
  }
};

ApiServer::ApiServer(Engine& engine, AuthConfig auth) : impl_(std::make_unique<Impl>(engine, std::move(auth))) {
  if (impl_->auth.tokens.empty()) throw Error(ErrorKind::AuthConfigMissing, "no bearer tokens configured");
  impl_->routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  int bound = port;
  bool ok = false;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    ok = bound > 0;
  } else {
    ok = impl_->server.bind_to_port(host, port);
  }
  if (!ok) {
    throw Error(ErrorKind::BindFailed, "cannot bind " + host + ":" + std::to_string(port),
                Json{{"host", host}, {"port", port}});
  }
  return bound;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace trustgate
