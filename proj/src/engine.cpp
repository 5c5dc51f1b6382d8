#include "trustgate/engine.hpp"

#include <algorithm>
#include <set>

#include "trustgate/codec.hpp"
#include "trustgate/error.hpp"

namespace trustgate {
namespace {

std::optional<double> component(const Json& entry, const char* key) {
  auto it = entry.find(key);
  if (it == entry.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorKind::InvalidArgument, std::string("'") + key + "' must be a number");
  const double v = it->get<double>();
  if (v < 0.0 || v > 100.0) {
    throw Error(ErrorKind::ScoreOutOfRange, std::string("'") + key + "' outside [0,100]", Json{{key, v}});
  }
  return v;
}

template <typename T>
T field_or(const Json& entry, const char* key, T fallback) {
  auto it = entry.find(key);
  if (it == entry.end() || it->is_null()) return fallback;
  if (!it->is_number()) throw Error(ErrorKind::InvalidArgument, std::string("'") + key + "' must be a number");
  return it->get<T>();
}

std::string seq_id(const char* prefix, std::uint64_t seq) { return std::string(prefix) + "-" + std::to_string(seq); }

}  // namespace

AssessmentInput decode_assessment_input(const Json& j) {
  if (!j.is_object() || !j.contains("pillars") || !j["pillars"].is_object()) {
    throw Error(ErrorKind::InvalidArgument, "assessment input needs a \"pillars\" object");
  }
  AssessmentInput in;
  for (const auto& [name, entry] : j["pillars"].items()) {
    auto pillar = parse_pillar(name);
    if (!pillar) throw Error(ErrorKind::InvalidArgument, "unknown pillar '" + name + "'", Json{{"pillar", name}});
    if (!entry.is_object()) throw Error(ErrorKind::InvalidArgument, "pillar '" + name + "' must be an object");
    PillarAssessmentInput p;
    p.ci = component(entry, "ci");
    p.ce = component(entry, "ce");
    p.re_score = component(entry, "re_score");
    p.cs = component(entry, "cs");
    const int given = p.ci.has_value() + p.ce.has_value() + p.re_score.has_value() + p.cs.has_value();
    if (given != 0 && given != 4) {
      throw Error(ErrorKind::InvalidArgument, "pillar '" + name + "' must give all of ci, ce, re_score, cs or none");
    }
    p.current_risk_level = field_or(entry, "current_risk_level", 0.0);
    p.risk_appetite = field_or(entry, "risk_appetite", 1.0);
    p.met_requirements = field_or(entry, "met", 0);
    p.total_requirements = field_or(entry, "total", 0);
    in.pillars[*pillar] = p;
  }
  for (Pillar p : kAllPillars) {
    if (!in.pillars.count(p)) {
      throw Error(ErrorKind::MissingPillar, "assessment input lacks pillar '" + std::string(to_string(p)) + "'",
                  Json{{"pillar", to_string(p)}});
    }
  }
  if (j.contains("exposure") && !j["exposure"].is_null()) {
    PillarMap<double> exposure;
    for (const auto& [name, v] : j["exposure"].items()) {
      auto pillar = parse_pillar(name);
      if (!pillar || !v.is_number()) throw Error(ErrorKind::InvalidArgument, "bad exposure entry '" + name + "'");
      exposure[*pillar] = v.get<double>();
    }
    in.exposure = std::move(exposure);
  }
  return in;
}

GateEvaluation evaluate_system(const SystemState& state, const FrameworkConfig& config, int gate, const Date& as_of) {
  if (!state.assessment) {
    throw Error(ErrorKind::IncompleteAssessment,
                "system '" + state.system.system_id + "' has no recorded assessment",
                Json{{"system_id", state.system.system_id}});
  }
  const auto statuses = state.status_list();
  GateInputs in;
  in.assessments = state.assessment->assessments;
  in.statuses = statuses;
  in.exceptions = state.exceptions;
  in.as_of = as_of;
  in.trust_index_override = state.assessment->trust_index;
  return evaluate_gate(state.system, config, gate, in);
}

Engine::Engine(std::shared_ptr<const FrameworkConfig> config, std::unique_ptr<Store> store, Clock clock)
    : config_(std::move(config)), store_(std::move(store)), clock_(std::move(clock)) {}

AiSystem Engine::register_system(AiSystem system, const std::string& actor) {
  system = normalize_system(std::move(system), *config_);
  store_->append_with(EventKind::SystemRegistered, actor, now(), [&](std::uint64_t, const RegistryState& st) {
    if (st.systems.count(system.system_id)) {
      throw Error(ErrorKind::DuplicateId, "system '" + system.system_id + "' is already registered",
                  Json{{"system_id", system.system_id}});
    }
    return encode(system);
  });
  return system;
}

SystemState Engine::system(const std::string& id) const { return store_->snapshot(id); }

std::vector<AiSystem> Engine::systems() const {
  std::vector<AiSystem> out;
  for (const auto& [id, s] : store_->state().systems) out.push_back(s.system);
  return out;
}

std::vector<ControlStatus> Engine::import_statuses(const std::string& id, std::vector<ControlStatus> statuses,
                                                   const std::string& actor) {
  std::set<std::string> seen;
  for (const auto& s : statuses) {
    if (!config_->find_control(s.control_id)) {
      throw Error(ErrorKind::UnknownControl, "unknown control '" + s.control_id + "'", Json{{"control", s.control_id}});
    }
    if (!seen.insert(s.control_id).second) {
      throw Error(ErrorKind::DuplicateId, "control '" + s.control_id + "' listed twice", Json{{"control", s.control_id}});
    }
    s.validate();
  }
  store_->append_with(EventKind::StatusUpdated, actor, now(), [&](std::uint64_t, const RegistryState& st) {
    st.system(id);
    Json list = Json::array();
    for (const auto& s : statuses) list.push_back(encode(s));
    return Json{{"system_id", id}, {"statuses", list}};
  });
  return statuses;
}

AssessmentRecord Engine::assess(const std::string& id, const AssessmentInput& input, const std::string& actor) {
  const auto ev = store_->append_with(EventKind::AssessmentRecorded, actor, now(),
                                      [&](std::uint64_t, const RegistryState& st) {
    const auto& sys = st.system(id);
    const int gate = std::min(sys.system.gate_under_review(), kLastGatedPhase);
    const auto statuses = sys.status_list();
    PillarMap<PillarAssessment> assessments;
    for (Pillar p : kAllPillars) {
      const auto& in = input.pillars.at(p);
      if (in.ci) {
        PillarAssessment a;
        a.pillar = p;
        a.ci = *in.ci;
        a.ce = *in.ce;
        a.re_score = *in.re_score;
        a.cs = *in.cs;
        a.composite = composite_score(a.ci, a.ce, a.re_score, a.cs);
        assessments[p] = a;
        continue;
      }
      const auto applicable = applicable_controls(*config_, gate, p);
      PillarInputs pi;
      for (const auto& s : statuses) {
        if (std::any_of(applicable.begin(), applicable.end(),
                        [&](const ControlDefinition& c) { return c.id == s.control_id; })) {
          pi.statuses.push_back(s);
        }
      }
      pi.current_risk_level = in.current_risk_level;
      pi.risk_appetite = in.risk_appetite;
      pi.met_requirements = in.met_requirements;
      pi.total_requirements = in.total_requirements;
      assessments[p] = pillar_score(p, pi, applicable);
    }
    const auto ti = trust_index(assessments, config_->default_weights(), sys.system.pillar_priorities, input.exposure);
    Json per = Json::object();
    for (const auto& [p, a] : assessments) per[std::string(to_string(p))] = encode(a);
    return Json{{"system_id", id}, {"gate", gate}, {"assessments", per}, {"trust_index", encode(ti)}};
  });
  return *store_->state_at(ev.sequence).system(id).assessment;
}

CheckRecord Engine::run_check(const std::string& id, CheckSpec spec, const CheckData& data, const std::string& actor) {
  if (spec.bound_control.empty()) {
    for (const auto& c : config_->controls) {
      if (c.check_binding == spec.kind) {
        spec.bound_control = c.id;
        break;
      }
    }
    if (spec.bound_control.empty()) {
      throw Error(ErrorKind::UnknownControl,
                  "no catalog control is bound to check " + std::string(to_string(spec.kind)));
    }
  }
  spec.validate(*config_);
  store_->snapshot(id);

  const Timestamp at = now();
  CheckResult result;
  auto need_dataset = [&]() -> const TabularDataset& {
    if (!data.dataset) throw Error(ErrorKind::InvalidArgument, std::string(to_string(spec.kind)) + " needs a dataset");
    return *data.dataset;
  };
  switch (spec.kind) {
    case CheckKind::DemographicParity:
      result = demographic_parity(need_dataset(), spec.parity, spec.bound_control, at);
      break;
    case CheckKind::RobustnessThreshold:
      result = robustness_threshold(data.accuracies, spec.robustness.min_accuracy, spec.bound_control, at);
      break;
    case CheckKind::PiiScan:
      result = pii_scan(need_dataset(), spec.pii, spec.bound_control, at);
      break;
  }
  result.spec = spec;

  CheckRecord record;
  store_->append_with(EventKind::CheckExecuted, actor, at, [&](std::uint64_t seq, const RegistryState& st) {
    const auto& sys = st.system(id);
    ControlStatus current;
    current.control_id = spec.bound_control;
    if (auto it = sys.statuses.find(spec.bound_control); it != sys.statuses.end()) current = it->second;
    const std::vector<CheckResult> results{result};
    const std::vector<std::string> ids{seq_id("check", seq)};
    const auto applied = apply_results(results, ids, {current});
    record = CheckRecord{ids.front(), id, result, applied.not_implemented};
    Json statuses = Json::array();
    if (applied.not_implemented.empty()) {
      for (const auto& s : applied.statuses) statuses.push_back(encode(s));
    }
    auto payload = encode_check_record(record);
    payload["statuses"] = statuses;
    return payload;
  });
  return record;
}

GateEvaluation Engine::evaluate(const std::string& id, std::optional<int> gate) const {
  const auto state = store_->snapshot(id);
  return evaluate_system(state, *config_, gate.value_or(state.system.gate_under_review()), now().date());
}

GateDecision Engine::decide(const std::string& id, int gate, const DecisionRequest& request, const std::string& actor) {
  const Timestamp at = now();
  const auto ev = store_->append_with(EventKind::GateDecided, actor, at, [&](std::uint64_t seq, const RegistryState& st) {
    const auto& sys = st.system(id);
    GateEvaluation evaluation;
    if (gate == sys.system.gate_under_review() && !sys.system.retired) {
      evaluation = evaluate_system(sys, *config_, gate, at.date());
    } else {
      // Lets make_decision report the phase mismatch without an assessment.
      evaluation.system_id = id;
      evaluation.gate = gate;
    }
    return encode(make_decision(sys.system, evaluation, request, seq_id("decision", seq), at));
  });
  return decode_decision(ev.payload);
}

ExceptionRecord Engine::grant_exception(const std::string& id, const ExceptionRequest& request,
                                        const std::string& actor) {
  const auto ev = store_->append_with(EventKind::ExceptionGranted, actor, now(),
                                      [&](std::uint64_t seq, const RegistryState& st) {
    return encode(make_exception(st.system(id).system, request, seq_id("exception", seq)));
  });
  return decode_exception(ev.payload);
}

std::vector<ExceptionRecord> Engine::expire_exceptions(const std::string& actor) {
  const Timestamp at = now();
  std::vector<ExceptionRecord> changed;
  for (const auto& [id, sys] : store_->state().systems) {
    for (auto& rec : trustgate::expire_exceptions(sys.exceptions, at.date())) changed.push_back(std::move(rec));
  }
  for (const auto& rec : changed) {
    store_->append(EventKind::ExceptionExpired,
                   Json{{"exception_id", rec.exception_id}, {"system_id", rec.system_id}, {"state", to_string(rec.state)}},
                   actor, at);
  }
  return changed;
}

AiSystem Engine::fire_trigger(const std::string& id, RevalidationTrigger trigger, const std::string& actor) {
  AiSystem next;
  store_->append_with(EventKind::TriggerFired, actor, now(), [&](std::uint64_t, const RegistryState& st) {
    next = apply_trigger(st.system(id).system, trigger);
    return Json{{"system_id", id}, {"trigger", to_string(trigger)}, {"pending_gate", *next.pending_gate}};
  });
  return next;
}

RiskItem Engine::upsert_risk(RiskItem risk, const std::string& actor) {
  if (risk.risk_id.empty()) throw Error(ErrorKind::InvalidArgument, "risk_id must not be empty");
  risk = score_risk(std::move(risk));
  store_->append(EventKind::RiskUpserted, encode(risk), actor, now());
  return risk;
}

std::vector<RiskItem> Engine::risks() const {
  std::vector<RiskItem> out;
  for (const auto& [id, r] : store_->state().risks) out.push_back(r);
  return out;
}

}  // namespace trustgate
