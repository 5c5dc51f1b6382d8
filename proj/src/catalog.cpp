#include "trustgate/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "trustgate/error.hpp"
#include "trustgate/json.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<CheckKind, 3> kCheckKindNames{{
    {CheckKind::DemographicParity, "DemographicParity"},
    {CheckKind::RobustnessThreshold, "RobustnessThreshold"},
    {CheckKind::PiiScan, "PiiScan"},
}};

constexpr double kWeightSumTolerance = 1e-9;

[[noreturn]] void validation_error(const std::string& message, Json details = Json::object()) {
  throw Error(ErrorKind::ValidationError, message, std::move(details));
}

[[noreturn]] void field_error(const std::string& source, const std::string& pointer,
                              const std::string& message) {
  Json details;
  details["source"] = source;
  details["field"] = pointer;
  throw Error(ErrorKind::ParseError, source + ": " + pointer + ": " + message, std::move(details));
}

// Walks a JSON document while tracking the JSON pointer of the current node so
// that schema errors name their location.
class Reader {
 public:
  Reader(const Json& node, std::string source, std::string pointer)
      : node_(node), source_(std::move(source)), pointer_(std::move(pointer)) {}

  const Json& node() const { return node_; }
  const std::string& pointer() const { return pointer_; }

  Reader at(const std::string& key) const {
    return Reader(node_.at(key), source_, pointer_ + "/" + key);
  }
  Reader at(std::size_t i) const {
    return Reader(node_.at(i), source_, pointer_ + "/" + std::to_string(i));
  }
  bool has(const std::string& key) const { return node_.contains(key); }

  void require_object(std::initializer_list<std::string_view> required,
                      std::initializer_list<std::string_view> optional) const {
    if (!node_.is_object()) fail("expected an object");
    for (auto key : required) {
      if (!node_.contains(std::string(key))) fail("missing required field '" + std::string(key) + "'");
    }
    for (const auto& [key, _] : node_.items()) {
      const bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                         std::find(optional.begin(), optional.end(), key) != optional.end();
      if (!known) fail("unknown field '" + key + "'");
    }
  }

  const Json& array() const {
    if (!node_.is_array()) fail("expected an array");
    return node_;
  }
  std::string string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }
  double number() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }
  int integer() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    return node_.get<int>();
  }
  Pillar pillar() const {
    auto p = parse_pillar(string());
    if (!p) fail("unknown pillar '" + string() + "'");
    return *p;
  }

  [[noreturn]] void fail(const std::string& message) const {
    field_error(source_, pointer_.empty() ? "/" : pointer_, message);
  }

 private:
  const Json& node_;
  std::string source_;
  std::string pointer_;
};

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

PillarMap<double> read_pillar_scores(const Reader& r) {
  if (!r.node().is_object()) r.fail("expected an object keyed by pillar");
  PillarMap<double> out;
  for (const auto& [key, _] : r.node().items()) {
    auto p = parse_pillar(key);
    Reader v = r.at(key);
    if (!p) v.fail("unknown pillar '" + key + "'");
    const double score = v.number();
    if (score < 0.0 || score > 100.0) v.fail("score must lie in [0,100]");
    out[*p] = score;
  }
  return out;
}

FrameworkConfig read_config(const Json& doc, const std::string& source) {
  Reader root(doc, source, "");
  root.require_object({"pillars", "families", "controls", "phases", "priority_min_ranges"}, {});

  FrameworkConfig cfg;

  const Reader pillars = root.at("pillars");
  for (std::size_t i = 0; i < pillars.array().size(); ++i) {
    Reader p = pillars.at(i);
    p.require_object({"id", "weight"}, {});
    cfg.pillars.push_back({p.at("id").pillar(), p.at("weight").number()});
  }

  const Reader families = root.at("families");
  for (std::size_t i = 0; i < families.array().size(); ++i) {
    Reader f = families.at(i);
    f.require_object({"code", "name"}, {"declared_count"});
    ControlFamily fam{f.at("code").string(), f.at("name").string(), std::nullopt};
    if (f.has("declared_count")) fam.declared_count = f.at("declared_count").integer();
    cfg.families.push_back(std::move(fam));
  }

  const Reader controls = root.at("controls");
  for (std::size_t i = 0; i < controls.array().size(); ++i) {
    Reader c = controls.at(i);
    c.require_object({"id", "family", "title", "priority", "pillars"},
                     {"required_from_gate", "check_binding"});
    ControlDefinition def;
    def.id = c.at("id").string();
    def.family = c.at("family").string();
    def.title = c.at("title").string();
    const std::string prio = c.at("priority").string();
    auto parsed = parse_control_priority(prio);
    if (!parsed) c.at("priority").fail("unknown priority '" + prio + "'");
    def.priority = *parsed;
    const Reader ps = c.at("pillars");
    for (std::size_t k = 0; k < ps.array().size(); ++k) def.pillars.push_back(ps.at(k).pillar());
    if (c.has("required_from_gate")) def.required_from_gate = c.at("required_from_gate").integer();
    if (c.has("check_binding")) {
      const std::string kind = c.at("check_binding").string();
      auto k = parse_check_kind(kind);
      if (!k) c.at("check_binding").fail("unknown check kind '" + kind + "'");
      def.check_binding = *k;
    }
    cfg.controls.push_back(std::move(def));
  }

  std::array<bool, 7> seen{};
  const Reader phases = root.at("phases");
  for (std::size_t i = 0; i < phases.array().size(); ++i) {
    Reader ph = phases.at(i);
    ph.require_object({"phase"}, {"per_pillar_min", "min_cumulative_controls"});
    PhaseRequirements req;
    req.phase = ph.at("phase").integer();
    if (req.phase < 0 || req.phase > kRetirementPhase) ph.at("phase").fail("phase must lie in 0..6");
    if (seen[req.phase]) {
      validation_error("phase " + std::to_string(req.phase) + " listed more than once",
                       Json{{"phase", req.phase}});
    }
    seen[req.phase] = true;
    if (ph.has("per_pillar_min")) req.per_pillar_min = read_pillar_scores(ph.at("per_pillar_min"));
    if (ph.has("min_cumulative_controls")) {
      req.min_cumulative_controls = ph.at("min_cumulative_controls").integer();
    }
    cfg.phases[req.phase] = std::move(req);
  }
  for (int p = 0; p <= kRetirementPhase; ++p) {
    if (!seen[p]) validation_error("phase " + std::to_string(p) + " missing", Json{{"phase", p}});
  }

  const Reader ranges = root.at("priority_min_ranges");
  if (!ranges.node().is_object()) ranges.fail("expected an object keyed by priority");
  for (const auto& [key, _] : ranges.node().items()) {
    Reader r = ranges.at(key);
    auto prio = parse_pillar_priority(key);
    if (!prio) r.fail("unknown pillar priority '" + key + "'");
    if (r.array().size() != 2) r.fail("expected [low, high]");
    cfg.priority_min_ranges[*prio] = ScoreRange{r.at(std::size_t{0}).number(), r.at(std::size_t{1}).number()};
  }
  return cfg;
}

void validate(const FrameworkConfig& cfg) {
  // Pillars: exactly the eight, each once, weights summing to one.
  std::set<Pillar> seen_pillars;
  double weight_sum = 0.0;
  for (const auto& p : cfg.pillars) {
    if (!seen_pillars.insert(p.id).second) {
      validation_error("pillar '" + std::string(to_string(p.id)) + "' listed more than once",
                       Json{{"pillar", to_string(p.id)}});
    }
    if (p.weight < 0.0 || p.weight > 1.0) {
      validation_error("pillar '" + std::string(to_string(p.id)) + "' weight outside [0,1]",
                       Json{{"pillar", to_string(p.id)}, {"weight", p.weight}});
    }
    weight_sum += p.weight;
  }
  if (seen_pillars.size() != kPillarCount) {
    for (Pillar p : kAllPillars) {
      if (!seen_pillars.count(p)) {
        validation_error("pillar '" + std::string(to_string(p)) + "' missing",
                         Json{{"pillar", to_string(p)}});
      }
    }
  }
  if (std::abs(weight_sum - 1.0) > kWeightSumTolerance) {
    std::ostringstream msg;
    msg << "pillar weights sum to " << weight_sum << ", expected 1.0";
    validation_error(msg.str(), Json{{"weight_sum", weight_sum}});
  }

  std::set<std::string> family_codes;
  for (const auto& f : cfg.families) {
    if (!family_codes.insert(f.code).second) {
      validation_error("family '" + f.code + "' listed more than once", Json{{"family", f.code}});
    }
  }

  static const std::regex kControlId(R"(^([A-Z][A-Z&]*)-(\d{2,})$)");
  std::set<std::string> control_ids;
  for (const auto& c : cfg.controls) {
    std::smatch m;
    if (!std::regex_match(c.id, m, kControlId)) {
      validation_error("control id '" + c.id + "' is not of the form FAMILY-NN", Json{{"control", c.id}});
    }
    if (!control_ids.insert(c.id).second) {
      validation_error("control '" + c.id + "' listed more than once", Json{{"control", c.id}});
    }
    if (m[1].str() != c.family) {
      validation_error("control '" + c.id + "' prefix does not match family '" + c.family + "'",
                       Json{{"control", c.id}, {"family", c.family}});
    }
    if (!family_codes.count(c.family)) {
      validation_error("control '" + c.id + "' references unknown family '" + c.family + "'",
                       Json{{"control", c.id}, {"family", c.family}});
    }
    if (c.pillars.empty()) {
      validation_error("control '" + c.id + "' maps to no pillar", Json{{"control", c.id}});
    }
    std::set<Pillar> uniq(c.pillars.begin(), c.pillars.end());
    if (uniq.size() != c.pillars.size()) {
      validation_error("control '" + c.id + "' lists a pillar twice", Json{{"control", c.id}});
    }
    if (c.required_from_gate && (*c.required_from_gate < 0 || *c.required_from_gate > kLastGatedPhase)) {
      validation_error("control '" + c.id + "' required_from_gate outside 0..5", Json{{"control", c.id}});
    }
  }

  std::optional<int> previous_min;
  for (int p = 0; p <= kLastGatedPhase; ++p) {
    const auto& req = cfg.phases[p];
    if (!req.per_pillar_min) {
      validation_error("phase " + std::to_string(p) + " lacks per_pillar_min", Json{{"phase", p}});
    }
    for (Pillar pillar : kAllPillars) {
      if (!req.per_pillar_min->count(pillar)) {
        validation_error("phase " + std::to_string(p) + " lacks a minimum for pillar '" +
                             std::string(to_string(pillar)) + "'",
                         Json{{"phase", p}, {"pillar", to_string(pillar)}});
      }
    }
    if (req.min_cumulative_controls) {
      if (*req.min_cumulative_controls < 0) {
        validation_error("phase " + std::to_string(p) + " min_cumulative_controls negative", Json{{"phase", p}});
      }
      if (previous_min && *req.min_cumulative_controls < *previous_min) {
        validation_error("min_cumulative_controls decreases at gate " + std::to_string(p), Json{{"phase", p}});
      }
      previous_min = req.min_cumulative_controls;
    }
  }
  if (cfg.phases[kRetirementPhase].per_pillar_min) {
    validation_error("retirement phase must not carry pillar minimums", Json{{"phase", kRetirementPhase}});
  }

  for (PillarPriority prio : kAllPillarPriorities) {
    auto it = cfg.priority_min_ranges.find(prio);
    if (it == cfg.priority_min_ranges.end()) {
      validation_error("priority_min_ranges lacks '" + std::string(to_string(prio)) + "'",
                       Json{{"priority", to_string(prio)}});
    }
    if (it->second.low > it->second.high || it->second.low < 0.0 || it->second.high > 100.0) {
      validation_error("priority_min_ranges '" + std::string(to_string(prio)) + "' is not a sub-range of [0,100]",
                       Json{{"priority", to_string(prio)}});
    }
  }
}

}  // namespace

std::string_view to_string(CheckKind k) { return enum_name(kCheckKindNames, k); }
std::optional<CheckKind> parse_check_kind(std::string_view name) {
  return enum_from_name(kCheckKindNames, name);
}

bool ControlDefinition::maps_to(Pillar p) const {
  return std::find(pillars.begin(), pillars.end(), p) != pillars.end();
}

const ControlDefinition* FrameworkConfig::find_control(std::string_view id) const {
  for (const auto& c : controls) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const ControlFamily* FrameworkConfig::find_family(std::string_view code) const {
  for (const auto& f : families) {
    if (f.code == code) return &f;
  }
  return nullptr;
}

const PhaseRequirements& FrameworkConfig::phase(int p) const {
  if (p < 0 || p > kRetirementPhase) {
    throw Error(ErrorKind::GateOutOfRange, "phase " + std::to_string(p) + " outside 0..6");
  }
  return phases[p];
}

PillarMap<double> FrameworkConfig::default_weights() const {
  PillarMap<double> out;
  for (const auto& p : pillars) out[p.id] = p.weight;
  return out;
}

FrameworkConfig parse_catalog(std::string_view text, std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    Json details;
    details["source"] = std::string(source);
    details["line"] = line;
    details["column"] = col;
    throw Error(ErrorKind::ParseError,
                std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                    ": malformed catalog text",
                std::move(details));
  }
  FrameworkConfig cfg;
  try {
    cfg = read_config(doc, std::string(source));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(source) + ": " + e.what());
  }
  validate(cfg);
  return cfg;
}

FrameworkConfig load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::ParseError, "cannot open catalog '" + path.string() + "'",
                Json{{"source", path.string()}});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_catalog(buf.str(), path.string());
}

std::vector<ControlDefinition> applicable_controls(const FrameworkConfig& config, int gate) {
  if (gate < 0 || gate > kLastGatedPhase) {
    throw Error(ErrorKind::GateOutOfRange, "gate " + std::to_string(gate) + " outside 0..5",
                Json{{"gate", gate}});
  }
  std::vector<ControlDefinition> out;
  for (const auto& c : config.controls) {
    if (c.required_from_gate && *c.required_from_gate <= gate) out.push_back(c);
  }
  return out;
}

std::vector<ControlDefinition> applicable_controls(const FrameworkConfig& config, int gate,
                                                   Pillar pillar) {
  auto all = applicable_controls(config, gate);
  std::erase_if(all, [pillar](const ControlDefinition& c) { return !c.maps_to(pillar); });
  return all;
}

std::vector<FamilyCountDiscrepancy> validate_family_counts(const FrameworkConfig& config) {
  std::vector<FamilyCountDiscrepancy> out;
  for (const auto& fam : config.families) {
    if (!fam.declared_count) continue;
    const auto actual = std::count_if(config.controls.begin(), config.controls.end(),
                                      [&](const ControlDefinition& c) { return c.family == fam.code; });
    if (actual != *fam.declared_count) {
      out.push_back({fam.code, *fam.declared_count, static_cast<int>(actual)});
    }
  }
  return out;
}

}  // namespace trustgate
