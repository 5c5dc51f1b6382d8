#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trustgate/catalog.hpp"
#include "trustgate/checks.hpp"
#include "trustgate/lifecycle.hpp"
#include "trustgate/registry.hpp"
#include "trustgate/risk.hpp"
#include "trustgate/scoring.hpp"

namespace trustgate {

// Per-pillar assessment input: either the four component scores directly, or
// the raw risk and compliance figures, with the implementation and
// effectiveness scores taken from the recorded control statuses.
struct PillarAssessmentInput {
  std::optional<double> ci;
  std::optional<double> ce;
  std::optional<double> re_score;
  std::optional<double> cs;
  double current_risk_level = 0.0;
  double risk_appetite = 1.0;
  int met_requirements = 0;
  int total_requirements = 0;
};

struct AssessmentInput {
  PillarMap<PillarAssessmentInput> pillars;
  std::optional<PillarMap<double>> exposure;
};

// {"pillars": {"<Pillar>": {...}}, "exposure": {"<Pillar>": 0..1}}
AssessmentInput decode_assessment_input(const Json& j);

struct CheckData {
  std::optional<TabularDataset> dataset;
  std::map<std::string, double> accuracies;
};

// Gate evaluation over a recorded system state. Throws IncompleteAssessment
// when no assessment has been recorded.
GateEvaluation evaluate_system(const SystemState& state, const FrameworkConfig& config, int gate, const Date& as_of);

class Engine {
 public:
  using Clock = std::function<Timestamp()>;

  Engine(std::shared_ptr<const FrameworkConfig> config, std::unique_ptr<Store> store, Clock clock = Timestamp::now);

  const FrameworkConfig& config() const { return *config_; }
  Store& store() { return *store_; }
  const Store& store() const { return *store_; }
  Timestamp now() const { return clock_(); }

  AiSystem register_system(AiSystem system, const std::string& actor);
  SystemState system(const std::string& id) const;
  std::vector<AiSystem> systems() const;

  std::vector<ControlStatus> import_statuses(const std::string& id, std::vector<ControlStatus> statuses,
                                             const std::string& actor);
  AssessmentRecord assess(const std::string& id, const AssessmentInput& input, const std::string& actor);
  CheckRecord run_check(const std::string& id, CheckSpec spec, const CheckData& data, const std::string& actor);

  // Defaults to the gate under review.
  GateEvaluation evaluate(const std::string& id, std::optional<int> gate = std::nullopt) const;
  GateDecision decide(const std::string& id, int gate, const DecisionRequest& request, const std::string& actor);

  ExceptionRecord grant_exception(const std::string& id, const ExceptionRequest& request, const std::string& actor);
  // Records every state change due at the current date.
  std::vector<ExceptionRecord> expire_exceptions(const std::string& actor);
  AiSystem fire_trigger(const std::string& id, RevalidationTrigger trigger, const std::string& actor);

  RiskItem upsert_risk(RiskItem risk, const std::string& actor);
  std::vector<RiskItem> risks() const;

 private:
  std::shared_ptr<const FrameworkConfig> config_;
  std::unique_ptr<Store> store_;
  Clock clock_;
};

}  // namespace trustgate
