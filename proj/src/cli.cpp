#include "trustgate/cli.hpp"

#include <CLI11.hpp>
#include <signal.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "trustgate/codec.hpp"
#include "trustgate/engine.hpp"
#include "trustgate/error.hpp"
#include "trustgate/http.hpp"
#include "trustgate/report.hpp"

#ifndef TRUSTGATE_DEFAULT_CATALOG
#define TRUSTGATE_DEFAULT_CATALOG "catalog/default-catalog.json"
#endif

namespace trustgate {
namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path, Json{{"path", path}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path) {
  const auto text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what(), Json{{"path", path}});
  }
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

template <typename T, typename Parse>
T parse_enum(const std::string& text, Parse parse, const char* what) {
  auto v = parse(text);
  if (!v) throw Error(ErrorKind::InvalidArgument, std::string("unknown ") + what + " '" + text + "'");
  return *v;
}

struct Options {
  std::string store;
  std::string catalog = TRUSTGATE_DEFAULT_CATALOG;
  std::string actor;
  std::string now;
  bool json = false;

  std::string system;
  std::string file;
  int gate = -1;

  std::string catalog_arg;
  std::string check_kind;
  std::string dataset;
  std::string schema;
  std::string params;
  std::string control;
  std::vector<std::string> accuracies;

  std::string outcome;
  std::vector<std::string> approvals;
  std::string plan;
  std::string re_review;
  std::string rationale;

  std::string kind;
  std::string gap;
  std::string residual;
  std::string approver;
  std::string granted;
  std::string expiry;
  std::string reassess;
  std::string description;
  std::vector<std::string> compensating;

  std::string trigger;

  std::string risk_id;
  std::string pillar;
  std::string project;
  std::string likelihood;
  std::string impact;
  std::string mitigation;
  std::string owner;
  std::string due;
  std::string risk_status = "Open";

  std::string level;
  std::string scope;
  std::string format = "text";
  std::int64_t at = -1;

  std::string bind = "127.0.0.1:8080";
  std::string auth;
};

class Session {
 public:
  Session(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  Timestamp now() const { return opt_.now.empty() ? Timestamp::now() : Timestamp::parse(opt_.now); }

  std::string actor() const {
    if (!opt_.actor.empty()) return opt_.actor;
    if (const char* user = std::getenv("USER")) return user;
    return "cli";
  }

  std::shared_ptr<const FrameworkConfig> config() const {
    return std::make_shared<const FrameworkConfig>(load_catalog(opt_.catalog));
  }

  Engine engine(Store::Mode mode) const {
    if (opt_.store.empty()) {
      throw Error(ErrorKind::InvalidArgument, "no store given; set TRUST_GATE_STORE or pass --store");
    }
    const Timestamp fixed = now();
    Engine::Clock clock = opt_.now.empty() ? Engine::Clock(Timestamp::now) : Engine::Clock([fixed] { return fixed; });
    return Engine(config(), Store::open(opt_.store, mode), clock);
  }

  void print(const Json& j) const { out_ << j.dump(2) << "\n"; }

  const Options& opt() const { return opt_; }
  std::ostream& out() const { return out_; }

 private:
  const Options& opt_;
  std::ostream& out_;
};

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s += std::string(w - s.size(), ' ');
  return s;
}

void print_evaluation(std::ostream& os, const GateEvaluation& ev) {
  os << "system " << ev.system_id << " gate " << ev.gate << ": " << to_string(ev.recommended) << "\n";
  os << "trust index " << format_number(ev.trust_index.weighted_ti) << " (" << to_string(ev.trust_index.band) << "/"
     << color_of(ev.trust_index.band) << ")";
  if (ev.trust_index_threshold) os << ", threshold " << format_number(*ev.trust_index_threshold);
  os << "\n";
  os << "controls " << ev.controls_satisfied << " of " << ev.controls_required << " required\n";
  if (!ev.per_pillar.empty()) {
    os << "\n"
       << pad("pillar", 16) << pad("required", 10) << pad("actual", 10) << pad("deficit", 10) << "excepted\n";
    for (const auto& d : ev.per_pillar) {
      os << pad(std::string(to_string(d.pillar)), 16) << pad(format_number(d.required), 10)
         << pad(format_number(d.actual), 10) << pad(d.deficit > 0 ? "-" + format_number(d.deficit) : "0", 10)
         << (d.excepted ? "yes" : "no") << "\n";
    }
  }
  if (!ev.findings.empty()) {
    os << "\nfindings\n";
    for (const auto& f : ev.findings) os << "  - " << f << "\n";
  }
  os << "\nrequired approvals\n";
  for (const auto& c : required_approvals(ev.gate, ev.risk_tier, ev.executive_approval_required)) {
    os << "  - " << c.to_string() << "\n";
  }
}

void print_assessment(std::ostream& os, const AssessmentRecord& a) {
  os << "assessment for " << a.system_id << " at gate " << a.gate << " (event " << a.sequence << ")\n\n";
  os << pad("pillar", 16) << pad("ci", 10) << pad("ce", 10) << pad("re_score", 10) << pad("cs", 10) << "composite\n";
  for (const auto& [p, s] : a.assessments) {
    os << pad(std::string(to_string(p)), 16) << pad(format_number(s.ci), 10) << pad(format_number(s.ce), 10)
       << pad(format_number(s.re_score), 10) << pad(format_number(s.cs), 10) << format_number(s.composite) << "\n";
  }
  os << "\nweighted trust index " << format_number(a.trust_index.weighted_ti) << " ("
     << to_string(a.trust_index.band) << "/" << color_of(a.trust_index.band) << ")\n";
  os << "static trust index   " << format_number(a.trust_index.static_ti) << "\n";
}

int catalog_validate(const Session& s) {
  std::string path = s.opt().catalog_arg.empty() ? s.opt().catalog : s.opt().catalog_arg;
  if (path == "default-catalog" || path == "default") path = TRUSTGATE_DEFAULT_CATALOG;
  const auto cfg = load_catalog(path);
  const auto discrepancies = validate_family_counts(cfg);
  if (s.opt().json) {
    Json d = Json::array();
    for (const auto& x : discrepancies) d.push_back(Json{{"family", x.family}, {"declared", x.declared}, {"actual", x.actual}});
    s.print(Json{{"valid", true},
                 {"pillars", cfg.pillars.size()},
                 {"families", cfg.families.size()},
                 {"controls", cfg.controls.size()},
                 {"phases", cfg.phases.size()},
                 {"family_count_discrepancies", d}});
    return kExitOk;
  }
  s.out() << "catalog " << path << " is valid\n"
          << "pillars:  " << cfg.pillars.size() << "\n"
          << "families: " << cfg.families.size() << "\n"
          << "controls: " << cfg.controls.size() << "\n"
          << "phases:   " << cfg.phases.size() << "\n";
  for (const auto& x : discrepancies) {
    s.out() << "note: family " << x.family << " declares " << x.declared << " controls, catalog lists " << x.actual
            << "\n";
  }
  return kExitOk;
}

std::vector<ControlStatus> read_statuses(const std::string& path) {
  const auto text = read_text(path);
  if (ends_with(path, ".json")) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    const Json& list = j.is_array() ? j : j.value("statuses", Json::array());
    std::vector<ControlStatus> out;
    for (const auto& s : list) out.push_back(decode_status(s));
    return out;
  }
  return parse_status_csv(text);
}

std::map<std::string, double> parse_accuracies(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "accuracy must be ATTACK=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "accuracy value in '" + item + "' is not a number");
    }
  }
  return out;
}

int check_run(const Session& s) {
  const auto& o = s.opt();
  auto kind = parse_check_kind(o.check_kind);
  if (!kind) {
    if (o.check_kind == "demographic-parity") kind = CheckKind::DemographicParity;
    else if (o.check_kind == "robustness" || o.check_kind == "robustness-threshold") kind = CheckKind::RobustnessThreshold;
    else if (o.check_kind == "pii-scan" || o.check_kind == "pii") kind = CheckKind::PiiScan;
    else throw Error(ErrorKind::InvalidArgument, "unknown check kind '" + o.check_kind + "'");
  }
  Json spec_json{{"kind", to_string(*kind)}, {"bound_control", o.control}};
  if (!o.params.empty()) spec_json["params"] = read_json(o.params);
  const auto spec = decode_check_spec(spec_json);

  CheckData data;
  if (!o.dataset.empty()) {
    std::optional<std::string> schema;
    if (!o.schema.empty()) schema = read_text(o.schema);
    data.dataset = load_dataset_csv(read_text(o.dataset),
                                    schema ? std::optional<std::string_view>(*schema) : std::nullopt);
  }
  data.accuracies = parse_accuracies(o.accuracies);

  auto engine = s.engine(Store::Mode::ReadWrite);
  const auto rec = engine.run_check(o.system, spec, data, s.actor());
  if (o.json) {
    s.print(encode_check_record(rec));
  } else {
    s.out() << rec.result.message << "\n" << "recorded as " << rec.result_id << "\n";
    for (const auto& c : rec.not_implemented) {
      s.out() << "note: " << c << " is not fully implemented; effectiveness left unchanged\n";
    }
  }
  return kExitOk;
}

int gate_evaluate(const Session& s) {
  auto engine = s.engine(Store::Mode::ReadOnly);
  const auto ev = engine.evaluate(s.opt().system, s.opt().gate < 0 ? std::nullopt : std::optional<int>(s.opt().gate));
  if (s.opt().json) {
    Json j = encode(ev);
    j["audit_sequence"] = engine.store().sequence();
    s.print(j);
  } else {
    print_evaluation(s.out(), ev);
  }
  return ev.recommended == GateOutcome::Pass ? kExitOk : kExitGateNotPassed;
}

int gate_decide(const Session& s) {
  const auto& o = s.opt();
  auto engine = s.engine(Store::Mode::ReadWrite);
  const Timestamp now = engine.now();
  DecisionRequest req;
  req.outcome = parse_enum<GateOutcome>(o.outcome, parse_gate_outcome, "outcome");
  for (const auto& a : o.approvals) {
    const auto eq = a.find('=');
    Approval ap;
    ap.role = parse_enum<ApprovalRole>(a.substr(0, eq), parse_approval_role, "role");
    ap.actor = eq == std::string::npos ? s.actor() : a.substr(eq + 1);
    ap.timestamp = now;
    req.approvals.push_back(std::move(ap));
  }
  if (!o.plan.empty()) req.remediation_plan_ref = o.plan;
  if (!o.re_review.empty()) req.re_review_due = Date::parse(o.re_review);
  req.rationale = o.rationale;
  const int gate = o.gate < 0 ? engine.system(o.system).system.gate_under_review() : o.gate;
  const auto d = engine.decide(o.system, gate, req, s.actor());
  if (o.json) {
    s.print(encode(d));
  } else {
    s.out() << d.decision_id << ": " << d.system_id << " gate " << d.gate << " " << to_string(d.outcome)
            << ", phase " << d.phase_before << " -> " << d.phase_after << "\n";
  }
  return kExitOk;
}

int exception_grant(const Session& s) {
  const auto& o = s.opt();
  auto engine = s.engine(Store::Mode::ReadWrite);
  ExceptionRequest req;
  if (!o.file.empty()) {
    req = decode_exception_request(read_json(o.file), engine.now().date());
  } else {
    req.kind = parse_enum<ExceptionKind>(o.kind, parse_exception_kind, "exception kind");
    req.gap_target = GapTarget::parse(o.gap);
    req.gap_description = o.description;
    req.compensating_controls = o.compensating;
    req.residual_risk = parse_enum<ResidualRisk>(o.residual, parse_residual_risk, "residual risk");
    req.approver_role = parse_enum<ApprovalRole>(o.approver, parse_approval_role, "role");
    req.granted = o.granted.empty() ? engine.now().date() : Date::parse(o.granted);
    if (!o.expiry.empty()) req.expiry = Date::parse(o.expiry);
    if (!o.plan.empty()) req.remediation_plan_ref = o.plan;
    if (!o.reassess.empty()) req.reassessment_due = Date::parse(o.reassess);
  }
  s.print(encode(engine.grant_exception(o.system, req, s.actor())));
  return kExitOk;
}

int risk_add(const Session& s) {
  const auto& o = s.opt();
  auto engine = s.engine(Store::Mode::ReadWrite);
  RiskItem r;
  if (!o.file.empty()) {
    r = decode_risk(read_json(o.file));
  } else {
    r.risk_id = o.risk_id;
    r.description = o.description;
    r.pillar = parse_enum<Pillar>(o.pillar, parse_pillar, "pillar");
    r.project = o.project;
    r.likelihood = parse_enum<RiskRating>(o.likelihood, parse_risk_rating, "likelihood");
    r.impact = parse_enum<RiskRating>(o.impact, parse_risk_rating, "impact");
    r.mitigation = o.mitigation;
    r.owner = o.owner;
    if (!o.due.empty()) r.due_date = Date::parse(o.due);
    r.status = parse_enum<RiskStatus>(o.risk_status, parse_risk_status, "risk status");
  }
  s.print(encode(engine.upsert_risk(r, s.actor())));
  return kExitOk;
}

int report(const Session& s) {
  const auto& o = s.opt();
  const auto level = parse_enum<ReportLevel>(o.level, parse_report_level, "report level");
  auto engine = s.engine(Store::Mode::ReadOnly);
  const auto state = o.at >= 0 ? engine.store().state_at(static_cast<std::uint64_t>(o.at)) : engine.store().state();
  std::string scope = o.scope;
  if (scope.empty()) {
    if (level == ReportLevel::Enterprise || level == ReportLevel::Vendor) scope = kPortfolioScope;
    else if (!o.system.empty()) scope = o.system;
    else throw Error(ErrorKind::InvalidArgument, "report " + o.level + " needs --scope");
  }
  const auto r = render_scorecard(level, scope, state, engine.config());
  if (o.json || o.format == "json") s.print(encode(r));
  else s.out() << render_text(r);
  return kExitOk;
}

int serve(const Session& s) {
  const auto& o = s.opt();
  const auto colon = o.bind.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--bind must be host:port");
  const std::string host = o.bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(o.bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "--bind port is not a number");
  }
  const char* env_token = std::getenv("TRUST_GATE_TOKEN");
  const bool has_env_token = env_token && *env_token;
  if (o.auth.empty() && !has_env_token) {
    throw Error(ErrorKind::AuthConfigMissing, "serve needs --auth <token config> or TRUST_GATE_TOKEN");
  }
  AuthConfig auth = o.auth.empty() ? AuthConfig{} : load_auth_config(o.auth);
  // The environment token carries no approval roles.
  if (has_env_token) auth.tokens.try_emplace(env_token, Principal{s.actor(), {}});
  auto engine = s.engine(Store::Mode::ReadWrite);
  ApiServer server(engine, std::move(auth));
  const int bound = server.bind(host, port);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread worker([&] { server.listen(); });
  s.out() << "listening on " << host << ":" << bound << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.stop();
  worker.join();
  return kExitOk;
}

int log_verify(const Session& s) {
  if (s.opt().store.empty()) throw Error(ErrorKind::InvalidArgument, "no store given; set TRUST_GATE_STORE or pass --store");
  const auto rep = verify_store(s.opt().store);
  if (s.opt().json) {
    s.print(Json{{"ok", rep.ok},
                 {"events", rep.events},
                 {"first_broken", rep.first_broken ? Json(*rep.first_broken) : Json(nullptr)},
                 {"message", rep.message}});
  } else if (rep.ok) {
    s.out() << "OK: " << rep.message << "\n";
  } else {
    s.out() << "BROKEN: first broken event " << (rep.first_broken ? std::to_string(*rep.first_broken) : "?") << " ("
            << rep.message << ")\n";
  }
  return rep.ok ? kExitOk : kExitError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Governance scoring and gated lifecycle engine for AI systems", "trust-gate"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--store", o.store, "Store directory")->envname("TRUST_GATE_STORE");
  app.add_option("--catalog", o.catalog, "Catalog JSON")->envname("TRUST_GATE_CATALOG");
  app.add_option("--actor", o.actor, "Actor recorded in the audit log");
  app.add_option("--now", o.now, "Fixed current time, YYYY-MM-DDTHH:MM:SSZ");
  app.add_flag("--json", o.json, "Machine-readable output");

  std::function<int()> action;
  auto on = [&](CLI::App* cmd, std::function<int()> fn) { cmd->callback([&action, fn] { action = fn; }); };
  Session session(o, out);

  auto* catalog = app.add_subcommand("catalog", "Catalog operations")->require_subcommand(1);
  auto* cat_validate = catalog->add_subcommand("validate", "Validate a catalog file");
  cat_validate->add_option("catalog", o.catalog_arg, "Catalog path or 'default-catalog'");
  on(cat_validate, [&] { return catalog_validate(session); });

  auto* system = app.add_subcommand("system", "AI system inventory")->require_subcommand(1);
  auto* sys_register = system->add_subcommand("register", "Register a system from JSON");
  sys_register->add_option("--file", o.file, "System JSON")->required();
  on(sys_register, [&] {
    auto engine = session.engine(Store::Mode::ReadWrite);
    session.print(encode(engine.register_system(decode_system(read_json(o.file)), session.actor())));
    return kExitOk;
  });
  auto* sys_show = system->add_subcommand("show", "Show a system snapshot");
  sys_show->add_option("--system", o.system)->required();
  on(sys_show, [&] {
    auto engine = session.engine(Store::Mode::ReadOnly);
    const auto state = engine.store().state();
    session.print(encode(state.system(o.system), state));
    return kExitOk;
  });
  auto* sys_list = system->add_subcommand("list", "List registered systems");
  on(sys_list, [&] {
    auto engine = session.engine(Store::Mode::ReadOnly);
    Json list = Json::array();
    for (const auto& s : engine.systems()) list.push_back(encode(s));
    session.print(list);
    return kExitOk;
  });

  auto* status = app.add_subcommand("status", "Control status")->require_subcommand(1);
  auto* st_import = status->add_subcommand("import", "Import control statuses (CSV or JSON)");
  st_import->add_option("--system", o.system)->required();
  st_import->add_option("--file", o.file)->required();
  on(st_import, [&] {
    auto engine = session.engine(Store::Mode::ReadWrite);
    const auto stored = engine.import_statuses(o.system, read_statuses(o.file), session.actor());
    out << "imported " << stored.size() << " control statuses for " << o.system << "\n";
    return kExitOk;
  });

  auto* assess = app.add_subcommand("assess", "Compute and record pillar scores and the trust index");
  assess->add_option("--system", o.system)->required();
  assess->add_option("--file", o.file, "Assessment input JSON")->required();
  on(assess, [&] {
    auto engine = session.engine(Store::Mode::ReadWrite);
    const auto rec = engine.assess(o.system, decode_assessment_input(read_json(o.file)), session.actor());
    if (o.json) session.print(encode_assessment_record(rec));
    else print_assessment(out, rec);
    return kExitOk;
  });

  auto* check = app.add_subcommand("check", "Automated checks")->require_subcommand(1);
  auto* check_run_cmd = check->add_subcommand("run", "Run a check and record its result");
  check_run_cmd->add_option("--system", o.system)->required();
  check_run_cmd->add_option("--kind", o.check_kind, "demographic-parity | robustness | pii-scan")->required();
  check_run_cmd->add_option("--dataset", o.dataset, "CSV dataset");
  check_run_cmd->add_option("--schema", o.schema, "Dataset column schema JSON");
  check_run_cmd->add_option("--params", o.params, "Check parameters JSON");
  check_run_cmd->add_option("--control", o.control, "Bound control id");
  check_run_cmd->add_option("--accuracy", o.accuracies, "ATTACK=accuracy, repeatable");
  on(check_run_cmd, [&] { return check_run(session); });

  auto* gate = app.add_subcommand("gate", "Gate reviews")->require_subcommand(1);
  auto* g_eval = gate->add_subcommand("evaluate", "Evaluate a gate; exit 2 unless Pass");
  g_eval->add_option("--system", o.system)->required();
  g_eval->add_option("--gate", o.gate);
  on(g_eval, [&] { return gate_evaluate(session); });
  auto* g_decide = gate->add_subcommand("decide", "Record a gate decision");
  g_decide->add_option("--system", o.system)->required();
  g_decide->add_option("--gate", o.gate);
  g_decide->add_option("--outcome", o.outcome, "Pass | ConditionalPass | Fail")->required();
  g_decide->add_option("--approve", o.approvals, "Role or Role=actor, repeatable");
  g_decide->add_option("--plan", o.plan, "Remediation plan reference");
  g_decide->add_option("--re-review", o.re_review, "Re-review date YYYY-MM-DD");
  g_decide->add_option("--rationale", o.rationale);
  on(g_decide, [&] { return gate_decide(session); });

  auto* exc = app.add_subcommand("exception", "Gap exceptions")->require_subcommand(1);
  auto* e_grant = exc->add_subcommand("grant", "Grant an exception");
  e_grant->add_option("--system", o.system)->required();
  e_grant->add_option("--file", o.file, "Exception request JSON");
  e_grant->add_option("--kind", o.kind, "RiskAcceptance | Temporary | Permanent");
  e_grant->add_option("--gap", o.gap, "Pillar name, 'controls' or 'trust_index'");
  e_grant->add_option("--description", o.description);
  e_grant->add_option("--compensating", o.compensating);
  e_grant->add_option("--residual", o.residual, "Low | Medium | High");
  e_grant->add_option("--approver", o.approver);
  e_grant->add_option("--granted", o.granted);
  e_grant->add_option("--expiry", o.expiry);
  e_grant->add_option("--plan", o.plan);
  e_grant->add_option("--reassess", o.reassess);
  on(e_grant, [&] { return exception_grant(session); });
  auto* e_list = exc->add_subcommand("list", "List a system's exceptions");
  e_list->add_option("--system", o.system)->required();
  on(e_list, [&] {
    auto engine = session.engine(Store::Mode::ReadOnly);
    Json list = Json::array();
    for (const auto& e : engine.system(o.system).exceptions) list.push_back(encode(e));
    session.print(list);
    return kExitOk;
  });
  auto* e_expire = exc->add_subcommand("expire", "Record expiries due now");
  on(e_expire, [&] {
    auto engine = session.engine(Store::Mode::ReadWrite);
    Json list = Json::array();
    for (const auto& e : engine.expire_exceptions(session.actor())) list.push_back(encode(e));
    session.print(list);
    return kExitOk;
  });

  auto* trig = app.add_subcommand("trigger", "Re-validation triggers")->require_subcommand(1);
  auto* t_fire = trig->add_subcommand("fire", "Send an operational system back to gate 3");
  t_fire->add_option("--system", o.system)->required();
  t_fire->add_option("--trigger", o.trigger)->required();
  on(t_fire, [&] {
    auto engine = session.engine(Store::Mode::ReadWrite);
    const auto t = parse_enum<RevalidationTrigger>(o.trigger, parse_revalidation_trigger, "trigger");
    session.print(encode(engine.fire_trigger(o.system, t, session.actor())));
    return kExitOk;
  });

  auto* risk = app.add_subcommand("risk", "Risk register")->require_subcommand(1);
  auto* r_add = risk->add_subcommand("add", "Add or update a risk");
  r_add->add_option("--file", o.file, "Risk JSON");
  r_add->add_option("--id", o.risk_id);
  r_add->add_option("--description", o.description);
  r_add->add_option("--pillar", o.pillar);
  r_add->add_option("--project", o.project);
  r_add->add_option("--likelihood", o.likelihood);
  r_add->add_option("--impact", o.impact);
  r_add->add_option("--mitigation", o.mitigation);
  r_add->add_option("--owner", o.owner);
  r_add->add_option("--due", o.due);
  r_add->add_option("--status", o.risk_status);
  on(r_add, [&] { return risk_add(session); });
  auto* r_list = risk->add_subcommand("list", "List the risk register");
  on(r_list, [&] {
    auto engine = session.engine(Store::Mode::ReadOnly);
    Json list = Json::array();
    for (const auto& r : engine.risks()) list.push_back(encode(r));
    session.print(list);
    return kExitOk;
  });

  auto* rep = app.add_subcommand("report", "Render a scorecard");
  rep->add_option("level", o.level, "enterprise | business-unit | project | control-tracker | vendor")->required();
  rep->add_option("--scope", o.scope, "portfolio, business unit or system id");
  rep->add_option("--system", o.system);
  rep->add_option("--format", o.format, "text | json");
  rep->add_option("--at", o.at, "Render at this audit sequence");
  on(rep, [&] { return report(session); });

  auto* srv = app.add_subcommand("serve", "Serve the HTTP API");
  srv->add_option("--bind", o.bind, "host:port");
  srv->add_option("--auth", o.auth, "Bearer token config JSON; optional when TRUST_GATE_TOKEN is set");
  on(srv, [&] { return serve(session); });

  auto* log = app.add_subcommand("log", "Audit log")->require_subcommand(1);
  auto* l_verify = log->add_subcommand("verify", "Verify the hash chain");
  on(l_verify, [&] { return log_verify(session); });
  auto* l_export = log->add_subcommand("export", "Export the log, optionally for one system");
  l_export->add_option("--system", o.system);
  on(l_export, [&] {
    auto engine = session.engine(Store::Mode::ReadOnly);
    out << engine.store().export_log(o.system.empty() ? std::nullopt : std::optional<std::string>(o.system));
    return kExitOk;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    return action ? action() : kExitError;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    if (!e.details().empty()) err << "details: " << e.details().dump() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace trustgate
