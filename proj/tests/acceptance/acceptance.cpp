// One line per acceptance criterion; exits nonzero when any criterion fails.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "support.hpp"
#include "trustgate/checks.hpp"
#include "trustgate/cli.hpp"
#include "trustgate/error.hpp"
#include "trustgate/registry.hpp"
#include "trustgate/risk.hpp"

using namespace trustgate;
using namespace testsupport;

namespace {

using R = ApprovalRole;
using P = Pillar;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

template <typename F>
std::optional<ErrorKind> error_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

const std::string kCli = TRUSTGATE_CLI_PATH;

int run_binary(const std::vector<std::string>& args) {
  std::string cmd = "'" + kCli + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string fixture_path(const std::string& name) { return (fs::path(kFixtureDir) / name).string(); }

// ---- independent reference tables -----------------------------------------

// Minimum pillar scores by phase, columns in kAllPillars order:
// Cybersecurity, Privacy, EthicsBias, Transparency, Explainability, Regulations, Audit, Accountability.
const double kTable51[6][8] = {
    {40, 50, 40, 30, 30, 50, 30, 50}, {60, 70, 50, 50, 40, 60, 50, 60}, {70, 75, 70, 60, 60, 70, 65, 70},
    {80, 85, 85, 75, 80, 80, 80, 80}, {90, 90, 90, 90, 90, 90, 90, 90}, {90, 90, 90, 90, 90, 90, 90, 90},
};

double table51(int phase, Pillar p) {
  const auto idx = std::find(kAllPillars.begin(), kAllPillars.end(), p) - kAllPillars.begin();
  return kTable51[phase][idx];
}

// Default pillar minimum when no override is set: rounded midpoint of the priority range.
double priority_default(PillarPriority p) {
  switch (p) {
    case PillarPriority::Critical: return 90;
    case PillarPriority::High: return 80;
    case PillarPriority::Standard: return 68;
    case PillarPriority::Low: return 58;
  }
  return 0;
}

std::pair<double, double> priority_range(PillarPriority p) {
  switch (p) {
    case PillarPriority::Critical: return {85, 95};
    case PillarPriority::High: return {75, 85};
    case PillarPriority::Standard: return {60, 75};
    case PillarPriority::Low: return {50, 65};
  }
  return {0, 0};
}

using Row = std::vector<std::vector<R>>;  // every clause required; any role within a clause

Row authority(int gate, RiskTier tier) {
  const bool high = tier == RiskTier::HighRisk || tier == RiskTier::Unacceptable;
  const bool limited = tier == RiskTier::LimitedRisk;
  switch (gate) {
    case 0:
      if (high) return {{R::RiskCommittee, R::CSuite}};
      if (limited) return {{R::BusinessUnitLead}, {R::AiCoE}};
      return {{R::AiCoE}};
    case 1:
      if (high) return {{R::PrivacyOfficer}, {R::SecurityEngineering}, {R::Legal}};
      if (limited) return {{R::PrivacyOfficer}, {R::SecurityEngineering}};
      return {{R::AiCoE}};
    case 2:
      if (high) return {{R::ModelRiskManager}, {R::EthicsBoard}};
      if (limited) return {{R::ModelRiskManager}};
      return {{R::AiCoE}, {R::DataScienceLead}};
    case 3:
      if (high) {
        return {{R::RiskCommittee}, {R::PrivacyOfficer}, {R::SecurityEngineering},
                {R::Legal},         {R::EthicsBoard},    {R::IndependentValidator}};
      }
      if (limited) {
        return {{R::BusinessUnitLead}, {R::AiCoE}, {R::ModelRiskManager}, {R::PrivacyOfficer}, {R::SecurityEngineering}};
      }
      return {{R::AiCoE}, {R::BusinessOwner}};
    case 4:
      if (high) return {{R::ProductionApprovalBoard}, {R::ExecutiveSponsor}};
      if (limited) return {{R::ProductionApprovalBoard}};
      return {{R::AiCoE}, {R::ITOperations}};
    case 5:
      if (high) return {{R::RiskCommittee}};
      if (limited) return {{R::BusinessUnitLead}};
      return {{R::AiCoE}};
    case 6:
      if (high) return {{R::SystemOwner}, {R::PrivacyOfficer}, {R::Legal}};
      if (limited) return {{R::SystemOwner}, {R::AiCoE}};
      return {{R::SystemOwner}};
  }
  return {};
}

bool exception_allowed(ExceptionKind kind, ResidualRisk residual, R role) {
  const std::set<R> board{R::RiskCommittee, R::CSuite};
  const std::set<R> medium{R::ModelRiskManager, R::RiskCommittee, R::CSuite};
  const std::set<R> low{R::AiCoE, R::ModelRiskManager, R::RiskCommittee, R::CSuite};
  if (kind == ExceptionKind::Permanent || residual == ResidualRisk::High) return board.count(role) > 0;
  if (residual == ResidualRisk::Medium) return medium.count(role) > 0;
  return low.count(role) > 0;
}

GateOutcome trichotomy(const std::vector<double>& deficits) {
  int nonzero = 0;
  for (double d : deficits) {
    if (d > 5.0) return GateOutcome::Fail;
    if (d > 0.0) ++nonzero;
  }
  if (nonzero == 0) return GateOutcome::Pass;
  return nonzero <= 2 ? GateOutcome::ConditionalPass : GateOutcome::Fail;
}

TrustIndexResult green_ti() {
  TrustIndexResult t;
  t.static_ti = 95;
  t.weighted_ti = 95;
  t.band = RiskLevel::Low;
  return t;
}

const std::vector<ControlStatus>& all_statuses() {
  static const auto s = all_implemented(*default_config(), kLastGatedPhase);
  return s;
}

PillarMap<double> deficit_map(const GateEvaluation& ev) {
  PillarMap<double> m;
  for (const auto& d : ev.per_pillar) m[d.pillar] = d.deficit;
  return m;
}

// ---- criteria ---------------------------------------------------------------

Outcome c1_implementation_score() {
  std::vector<ControlDefinition> applicable;
  std::vector<ControlStatus> statuses;
  for (int i = 0; i < 40; ++i) {
    ControlDefinition c;
    c.id = "EQP-" + std::to_string(i + 1);
    c.family = "EQP";
    c.priority = ControlPriority::High;
    c.pillars = {P::Cybersecurity};
    applicable.push_back(c);
    ControlStatus s;
    s.control_id = c.id;
    s.implementation = i < 38 ? Implementation::implemented() : Implementation::not_started();
    statuses.push_back(s);
  }
  const double ci = control_implementation_score(statuses, applicable);
  expect(ci == 95.0, "CI = " + num(ci));
  return {true, "CI = " + num(ci)};
}

Outcome c2_bands() {
  const std::vector<std::pair<double, RiskLevel>> cases{
      {90, RiskLevel::Low},         {89.999, RiskLevel::Moderate}, {75, RiskLevel::Moderate},
      {74.999, RiskLevel::Elevated}, {60, RiskLevel::Elevated},     {59.999, RiskLevel::High},
      {91.15, RiskLevel::Low},       {41.1, RiskLevel::High}};
  for (const auto& [score, band] : cases) {
    expect(classify(score) == band, num(score) + " -> " + std::string(to_string(classify(score))));
  }
  return {true, "8 fixtures"};
}

Outcome c3_humana() {
  const auto cfg = default_config();
  const auto sys = normalize_system(decode_system(fixture("humana-system.json")), *cfg);
  const auto input = decode_assessment_input(fixture("humana-assessment.json"));
  PillarMap<PillarAssessment> assessments;
  for (const auto& [p, in] : input.pillars) assessments[p] = flat_assessment(p, *in.ci);

  TrustIndexResult paper_ti;
  paper_ti.weighted_ti = 41.1;
  paper_ti.static_ti = 41.1;
  paper_ti.band = classify(41.1);
  GateInputs gi{assessments, {}, {}, Date::from_ymd(2026, 1, 15), paper_ti};
  const auto ev = evaluate_gate(sys, *cfg, 3, gi);
  expect(ev.recommended == GateOutcome::Fail, "recommended " + std::string(to_string(ev.recommended)));
  const auto d = deficit_map(ev);
  const PillarMap<double> want{{P::EthicsBias, 60}, {P::Explainability, 45}, {P::Accountability, 50}, {P::Audit, 55}};
  for (Pillar p : kAllPillars) {
    const double w = want.count(p) ? want.at(p) : 0.0;
    expect(d.at(p) == w, std::string(to_string(p)) + " deficit " + num(d.at(p)));
  }

  TempDir dir;
  const std::string store = (dir / "store").string();
  const std::vector<std::string> base{"--store", store, "--now", "2026-01-15T09:00:00Z"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  expect(run_binary(with({"system", "register", "--file", fixture_path("humana-system.json")})) == 0, "register");
  expect(run_binary(with({"assess", "--system", "humana-claims", "--file", fixture_path("humana-assessment.json")})) ==
             0,
         "assess");
  const auto start = std::chrono::steady_clock::now();
  const int code = run_binary(with({"gate", "evaluate", "--system", "humana-claims", "--gate", "3"}));
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  expect(code == 2, "CLI exit " + std::to_string(code));
  expect(ms < 1000, "CLI took " + num(ms) + " ms");
  return {true, "deficits 60/45/50/55, CLI exit 2 in " + num(std::round(ms)) + " ms"};
}

Outcome c4_wells_fargo() {
  const auto cfg = default_config();
  TempDir dir;
  Engine engine(cfg, Store::open(dir.path()), [] { return ts("2026-01-15T09:00:00Z"); });
  engine.register_system(decode_system(fixture("wellsfargo-system.json")), "t");
  engine.assess("wf-credit", decode_assessment_input(fixture("wellsfargo-assessment.json")), "t");
  const auto ev = engine.evaluate("wf-credit", 2);
  expect(ev.recommended == GateOutcome::Fail, "recommended " + std::string(to_string(ev.recommended)));
  const PillarMap<double> mins{{P::EthicsBias, 90}, {P::Accountability, 85}, {P::Transparency, 85}, {P::Audit, 80}};
  const PillarMap<double> want{{P::EthicsBias, 55}, {P::Accountability, 55}, {P::Transparency, 45}, {P::Audit, 55}};
  for (const auto& row : ev.per_pillar) {
    if (mins.count(row.pillar)) {
      expect(row.required == mins.at(row.pillar), std::string(to_string(row.pillar)) + " min " + num(row.required));
      expect(row.deficit == want.at(row.pillar), std::string(to_string(row.pillar)) + " deficit " + num(row.deficit));
    } else {
      expect(row.deficit == 0, std::string(to_string(row.pillar)) + " unexpected deficit");
    }
  }
  return {true, "deficits 55/55/45/55"};
}

Outcome c5_table(std::mt19937_64& rng) {
  const auto cfg = default_config();
  int checked = 0;
  for (int phase = 0; phase <= 5; ++phase) {
    const auto& mins = cfg->phase(phase).per_pillar_min;
    expect(mins.has_value(), "phase " + std::to_string(phase) + " has no minimums");
    for (Pillar p : kAllPillars) {
      expect(mins->at(p) == table51(phase, p), "phase " + std::to_string(phase) + " " + std::string(to_string(p)));
      ++checked;
    }
  }
  expect(checked == 48, "checked " + std::to_string(checked));

  std::uniform_int_distribution<int> pick4(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    AiSystem s;
    s.system_id = "rand-" + std::to_string(i);
    s.risk_tier = kAllRiskTiers[pick4(rng)];
    for (Pillar p : kAllPillars) {
      const auto prio = kAllPillarPriorities[pick4(rng)];
      s.pillar_priorities[p] = prio;
      if (unit(rng) < 0.5) {
        const auto [lo, hi] = priority_range(prio);
        s.pillar_min_overrides[p] = lo + (hi - lo) * unit(rng);
      }
    }
    s = normalize_system(s, *cfg);
    for (int gate = 0; gate <= 5; ++gate) {
      const auto eff = effective_minimums(s, *cfg, gate);
      for (Pillar p : kAllPillars) {
        const double expect_min = std::max(
            table51(gate, p),
            s.pillar_min_overrides.count(p) ? s.pillar_min_overrides.at(p) : priority_default(s.pillar_priorities.at(p)));
        expect(eff.at(p) == expect_min, s.system_id + " gate " + std::to_string(gate));
        if (gate >= 4) expect(eff.at(p) >= 90, s.system_id + " below 90 at gate " + std::to_string(gate));
      }
    }
  }
  return {true, "48 table cells, 1000 random systems"};
}

Outcome c6_trichotomy(std::mt19937_64& rng) {
  const auto cfg = default_config();
  std::uniform_int_distribution<int> pick4(0, 3);
  std::uniform_int_distribution<int> pick3(1, 3);
  std::uniform_int_distribution<int> gate_dist(0, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<GateOutcome, int> seen;
  for (int i = 0; i < 10000; ++i) {
    AiSystem s;
    s.system_id = "tri";
    s.risk_tier = kAllRiskTiers[pick3(rng)];
    for (Pillar p : kAllPillars) s.pillar_priorities[p] = kAllPillarPriorities[pick4(rng)];
    s = normalize_system(s, *cfg);
    const int gate = gate_dist(rng);
    s.current_phase = gate;

    PillarMap<double> scores;
    std::vector<double> oracle_deficits;
    const double shape = unit(rng);
    std::set<std::size_t> short_pillars;
    if (shape >= 0.3 && shape < 0.7) {
      const int count = 1 + static_cast<int>(unit(rng) * 3);
      while (static_cast<int>(short_pillars.size()) < count) {
        short_pillars.insert(std::uniform_int_distribution<std::size_t>(0, kPillarCount - 1)(rng));
      }
    }
    for (std::size_t idx = 0; idx < kPillarCount; ++idx) {
      const Pillar p = kAllPillars[idx];
      const double min = std::max(table51(gate, p), priority_default(s.pillar_priorities.at(p)));
      double actual;
      if (shape < 0.3 || (shape < 0.7 && !short_pillars.count(idx))) {
        actual = std::min(100.0, min + 10 * unit(rng));
      } else {
        const double r = unit(rng);
        if (r < 0.55) actual = min - 5.0 * (1.0 - unit(rng));
        else if (r < 0.65) actual = min - 5.0;
        else if (r < 0.75) actual = min - 5.000001;
        else if (r < 0.85) actual = min;
        else actual = min - 5.0 - (min - 5.0) * unit(rng);
      }
      actual = std::clamp(actual, 0.0, 100.0);
      scores[p] = actual;
      oracle_deficits.push_back(std::max(0.0, min - actual));
    }
    GateInputs gi{flat_assessments(scores), all_statuses(), {}, Date::from_ymd(2026, 1, 15), green_ti()};
    const auto ev = evaluate_gate(s, *cfg, gate, gi);
    const auto want = trichotomy(oracle_deficits);
    expect(ev.recommended == want, "vector " + std::to_string(i) + ": got " + std::string(to_string(ev.recommended)) +
                                       ", oracle " + std::string(to_string(want)));
    std::vector<double> got;
    for (const auto& d : ev.per_pillar) got.push_back(d.deficit);
    expect(deficit_outcome(got) == want, "deficit_outcome disagrees at vector " + std::to_string(i));
    for (std::size_t k = 0; k < got.size(); ++k) {
      expect(std::abs(got[k] - oracle_deficits[k]) <= 1e-9, "deficit mismatch at vector " + std::to_string(i));
    }
    ++seen[want];
  }
  expect(seen.size() == 3, "not every outcome was exercised");
  return {true, "Pass " + std::to_string(seen[GateOutcome::Pass]) + ", Conditional " +
                    std::to_string(seen[GateOutcome::ConditionalPass]) + ", Fail " +
                    std::to_string(seen[GateOutcome::Fail])};
}

Outcome c7_risk_register() {
  struct Case {
    RiskRating l, i;
    int score;
    RiskItemLevel level;
  };
  const std::vector<Case> rows{{RiskRating::High, RiskRating::High, 25, RiskItemLevel::Critical},
                               {RiskRating::High, RiskRating::Medium, 15, RiskItemLevel::High},
                               {RiskRating::Medium, RiskRating::High, 15, RiskItemLevel::High},
                               {RiskRating::Low, RiskRating::High, 10, RiskItemLevel::Medium},
                               {RiskRating::Medium, RiskRating::Medium, 9, RiskItemLevel::Medium}};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto got = risk_score(rows[k].l, rows[k].i);
    expect(got.score == rows[k].score && got.level == rows[k].level,
           "RISK-00" + std::to_string(k + 1) + " -> " + std::to_string(got.score) + " " +
               std::string(to_string(got.level)));
  }
  return {true, "5 rows"};
}

Outcome c8_kpis() {
  struct Case {
    const char* name;
    double current, target;
    KpiDirection dir;
    KpiStatus status;
  };
  const auto H = KpiDirection::HigherBetter;
  const auto L = KpiDirection::LowerBetter;
  const auto G = KpiStatus::Green;
  const auto Y = KpiStatus::Yellow;
  const std::vector<Case> rows{{"Overall Trust Score", 82, 85, H, Y},        {"Regulatory Violations", 0, 0, L, G},
                               {"External Audit Findings", 8, 5, L, Y},      {"Security Incidents", 2, 5, L, G},
                               {"Privacy Breaches", 0, 0, L, G},             {"Bias Complaints", 3, 10, L, G},
                               {"Controls Implemented", 84, 100, H, Y},      {"Controls Validated", 72, 95, H, Y},
                               {"Training Completion", 96, 95, H, G},        {"Gate Pass Rate", 82, 80, H, G},
                               {"Documentation Completeness", 91, 90, H, G}, {"Vendor Assessments Current", 87.5, 100, H, Y}};
  for (const auto& r : rows) {
    KpiMetric m;
    m.name = r.name;
    m.current = r.current;
    m.target = r.target;
    m.direction = r.dir;
    const auto got = kpi_status(m).status;
    expect(got == r.status, std::string(r.name) + " -> " + std::string(to_string(got)));
  }
  return {true, "12 rows"};
}

Outcome c9_parity(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> groups_dist(2, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int boundary_cases = 0;
  for (int t = 0; t < 500; ++t) {
    const int k = groups_dist(rng);
    std::uniform_int_distribution<int> rows_dist(k, 1000);
    const int n = rows_dist(rng);
    std::vector<double> p_rate(k);
    for (auto& r : p_rate) r = unit(rng);
    std::vector<int> group(n);
    std::vector<int> pred(n);
    std::uniform_int_distribution<int> gpick(0, k - 1);
    for (int i = 0; i < n; ++i) {
      group[i] = i < k ? i : gpick(rng);
      pred[i] = unit(rng) < p_rate[group[i]] ? 1 : 0;
    }
    std::shuffle(group.begin(), group.end(), rng);
    std::string csv = "id,race,prediction\n";
    for (int i = 0; i < n; ++i) {
      csv += std::to_string(i) + ",g" + std::to_string(group[i]) + "," + std::to_string(pred[i]) + "\n";
    }

    std::map<int, std::pair<long, long>> counts;
    for (int i = 0; i < n; ++i) {
      counts[group[i]].first += pred[i];
      counts[group[i]].second += 1;
    }
    double lo = 2, hi = -1;
    for (const auto& [g, c] : counts) {
      const double rate = static_cast<double>(c.first) / static_cast<double>(c.second);
      lo = std::min(lo, rate);
      hi = std::max(hi, rate);
    }
    const double oracle = hi - lo;

    const auto data = load_dataset_csv(csv);
    DemographicParityParams params;
    const auto res = demographic_parity(data, params);
    const double got = res.measured["disparity"].get<double>();
    expect(std::abs(got - oracle) <= 1e-12, "dataset " + std::to_string(t) + ": " + num(got) + " vs " + num(oracle));
    expect(res.passed == (oracle < 0.05), "dataset " + std::to_string(t) + " verdict");
    if (oracle > 0 && oracle < 1) {
      params.threshold = oracle;
      expect(!demographic_parity(data, params).passed, "disparity equal to threshold passed, dataset " + std::to_string(t));
      ++boundary_cases;
    }
  }
  std::string csv = "race,prediction\n";
  for (int i = 0; i < 20; ++i) csv += std::string("A,") + (i == 0 ? "1" : "0") + "\n";
  for (int i = 0; i < 10; ++i) csv += "B,0\n";
  const auto edge = demographic_parity(load_dataset_csv(csv), DemographicParityParams{});
  expect(edge.measured["disparity"].get<double>() == 0.05, "edge disparity");
  expect(!edge.passed, "0.05 disparity passed at threshold 0.05");
  return {true, "500 datasets, " + std::to_string(boundary_cases) + " boundary reruns"};
}

Outcome c10_robustness() {
  const std::map<std::string, double> thr{{"FGSM", 0.85}, {"PGD", 0.80}};
  expect(robustness_threshold({{"FGSM", 0.851}, {"PGD", 0.801}}, thr).passed, "0.851/0.801 failed");
  expect(!robustness_threshold({{"FGSM", 0.85}, {"PGD", 0.80}}, thr).passed, "0.85/0.80 passed");
  expect(!robustness_threshold({{"FGSM", 0.851}, {"PGD", 0.80}}, thr).passed, "PGD at threshold passed");
  return {true, "strict comparison"};
}

Outcome c11_weighted_ti(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> score(0.0, 100.0);
  std::uniform_real_distribution<double> weight(0.1, 5.0);
  std::uniform_real_distribution<double> factor(0.01, 1000.0);
  for (int t = 0; t < 2000; ++t) {
    PillarMap<double> s, equal, w, scaled;
    const double c = weight(rng);
    const double k = factor(rng);
    double mean = 0;
    for (Pillar p : kAllPillars) {
      s[p] = score(rng);
      mean += s[p] / kPillarCount;
      equal[p] = c;
      w[p] = weight(rng);
      scaled[p] = w[p] * k;
    }
    expect(std::abs(weighted_trust_index(equal, s) - mean) <= 1e-9, "uniform weights differ from mean");
    expect(std::abs(weighted_trust_index(w, s) - weighted_trust_index(scaled, s)) <= 1e-9, "scaling changed TI");
  }
  const PillarMap<double> prio{{P::EthicsBias, 3},   {P::Explainability, 3}, {P::Accountability, 3}, {P::Audit, 2},
                               {P::Privacy, 2},      {P::Regulations, 2},    {P::Cybersecurity, 1},  {P::Transparency, 1}};
  const PillarMap<double> fx{{P::EthicsBias, 30}, {P::Explainability, 40}, {P::Accountability, 35}, {P::Audit, 25},
                             {P::Privacy, 60},    {P::Regulations, 60},    {P::Cybersecurity, 60},  {P::Transparency, 60}};
  const double want = 725.0 / 17.0;
  const double got = weighted_trust_index(prio, fx);
  expect(std::abs(got - want) <= 1e-9, "fixture " + num(got));

  const auto sys = normalize_system(decode_system(fixture("humana-system.json")), *default_config());
  const auto full = trust_index(flat_assessments(fx), default_config()->default_weights(), sys.pillar_priorities);
  expect(std::abs(full.weighted_ti - want) <= 1e-9, "priority-derived fixture " + num(full.weighted_ti));
  return {true, "fixture " + num(got)};
}

Json snapshot(const RegistryState& st) {
  Json j{{"sequence", st.sequence}};
  Json systems = Json::object();
  for (const auto& [id, s] : st.systems) systems[id] = encode(s, st);
  Json risks = Json::array();
  for (const auto& [id, r] : st.risks) risks.push_back(encode(r));
  j["systems"] = systems;
  j["risks"] = risks;
  return j;
}

Outcome c12_event_log(std::mt19937_64& rng) {
  const auto cfg = default_config();
  TempDir dir;
  Timestamp clock = ts("2026-02-02T08:00:00Z");
  auto engine = std::make_unique<Engine>(cfg, Store::open(dir.path()), [&clock] { return clock; });
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> op_dist(0, 8);
  std::vector<std::string> ids;
  std::map<std::uint64_t, std::string> snapshots;
  snapshots[0] = snapshot(engine->store().state()).dump();
  int succeeded = 0;
  auto any_id = [&] { return ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)]; };

  for (int op = 0; op < 200; ++op) {
    const int kind = ids.empty() ? 0 : op_dist(rng);
    try {
      switch (kind) {
        case 0: {
          AiSystem s;
          s.system_id = "sys-" + std::to_string(ids.size());
          s.risk_tier = kAllRiskTiers[std::uniform_int_distribution<int>(0, 3)(rng)];
          s.current_phase = std::uniform_int_distribution<int>(0, 5)(rng);
          s.business_unit = unit(rng) < 0.5 ? "Retail" : "Lending";
          for (Pillar p : kAllPillars) s.pillar_priorities[p] = kAllPillarPriorities[std::uniform_int_distribution<int>(0, 3)(rng)];
          engine->register_system(s, "owner");
          ids.push_back(s.system_id);
          break;
        }
        case 1: {
          std::vector<ControlStatus> list;
          for (const auto& c : cfg->controls) {
            if (unit(rng) < 0.7) continue;
            ControlStatus st;
            st.control_id = c.id;
            const double r = unit(rng);
            if (r < 0.5) {
              st.implementation = Implementation::implemented();
              st.effectiveness = unit(rng) < 0.7 ? Effectiveness::ValidatedEffective : Effectiveness::NotValidated;
            } else if (r < 0.8) {
              st.implementation = Implementation::partial(0.1 + 0.8 * unit(rng));
            } else {
              st.implementation = Implementation::not_started();
            }
            list.push_back(st);
          }
          engine->import_statuses(any_id(), list, "owner");
          break;
        }
        case 2: {
          PillarMap<double> scores;
          for (Pillar p : kAllPillars) scores[p] = std::round(40 + 60 * unit(rng));
          engine->assess(any_id(), decode_assessment_input(flat_assessment_input(scores)), "assessor");
          break;
        }
        case 3: {
          const auto id = any_id();
          const auto ev = engine->evaluate(id);
          DecisionRequest req;
          req.outcome = ev.recommended;
          for (const auto& clause : required_approvals(ev.gate, ev.risk_tier, ev.executive_approval_required)) {
            req.approvals.push_back(Approval{clause.any_of.front(), "approver", clock});
          }
          if (req.outcome == GateOutcome::ConditionalPass) {
            req.remediation_plan_ref = "PLAN-" + std::to_string(op);
            req.re_review_due = clock.date().plus_days(21);
          }
          engine->decide(id, ev.gate, req, "board");
          break;
        }
        case 4: {
          ExceptionRequest req;
          req.kind = static_cast<ExceptionKind>(std::uniform_int_distribution<int>(0, 2)(rng));
          req.gap_target = GapTarget::parse(std::string(to_string(kAllPillars[std::uniform_int_distribution<int>(0, 7)(rng)])));
          req.gap_description = "gap";
          req.residual_risk = static_cast<ResidualRisk>(std::uniform_int_distribution<int>(0, 2)(rng));
          req.approver_role = kAllApprovalRoles[std::uniform_int_distribution<int>(0, 15)(rng)];
          req.granted = clock.date();
          if (req.kind == ExceptionKind::Temporary) {
            req.expiry = clock.date().plus_days(std::uniform_int_distribution<int>(5, 95)(rng));
            req.remediation_plan_ref = "PLAN";
          }
          if (req.kind == ExceptionKind::Permanent) req.reassessment_due = clock.date().plus_days(200);
          engine->grant_exception(any_id(), req, "risk");
          break;
        }
        case 5:
          engine->fire_trigger(any_id(), RevalidationTrigger::MaterialPerformanceDegradation, "ops");
          break;
        case 6: {
          RiskItem r;
          r.risk_id = "R-" + std::to_string(std::uniform_int_distribution<int>(1, 6)(rng));
          r.description = "risk";
          r.project = any_id();
          r.likelihood = static_cast<RiskRating>(std::uniform_int_distribution<int>(0, 2)(rng));
          r.impact = static_cast<RiskRating>(std::uniform_int_distribution<int>(0, 2)(rng));
          engine->upsert_risk(r, "risk");
          break;
        }
        case 7:
          clock = Timestamp(clock.value() + std::chrono::days(std::uniform_int_distribution<int>(1, 20)(rng)));
          engine->expire_exceptions("sweeper");
          break;
        case 8: {
          CheckSpec spec;
          spec.kind = CheckKind::RobustnessThreshold;
          spec.bound_control = "MDS-02";
          CheckData data;
          data.accuracies = {{"FGSM", 0.8 + 0.1 * unit(rng)}, {"PGD", 0.75 + 0.1 * unit(rng)}};
          engine->run_check(any_id(), spec, data, "ci");
          break;
        }
      }
      ++succeeded;
    } catch (const Error&) {
    }
    snapshots[engine->store().sequence()] = snapshot(engine->store().state()).dump();
  }
  const auto final_seq = engine->store().sequence();
  engine.reset();

  auto replay = Store::open(dir.path(), Store::Mode::ReadOnly);
  for (const auto& [seq, snap] : snapshots) {
    expect(snapshot(replay->state_at(seq)).dump() == snap, "replay differs at sequence " + std::to_string(seq));
  }
  const auto events = replay->events();
  expect(snapshot(fold(events)).dump() == snapshots.at(final_seq), "fold differs from the final state");
  replay.reset();

  const fs::path log = dir / "events.log";
  const std::string original = read_file(log);
  auto write = [&](const std::string& bytes) { std::ofstream(log, std::ios::binary | std::ios::trunc) << bytes; };
  std::vector<std::size_t> positions{0, original.size() - 1, original.size() / 2};
  std::uniform_int_distribution<std::size_t> pos_dist(0, original.size() - 1);
  for (int i = 0; i < 200; ++i) positions.push_back(pos_dist(rng));
  std::uniform_int_distribution<int> flip(1, 255);
  int via_cli = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    std::string bytes = original;
    bytes[positions[i]] = static_cast<char>(bytes[positions[i]] ^ flip(rng));
    write(bytes);
    expect(!verify_store(dir.path()).ok, "tamper at byte " + std::to_string(positions[i]) + " undetected");
    if (i % 10 == 0) {
      expect(run_binary({"--store", dir.path().string(), "log", "verify"}) == 1,
             "log verify accepted a tamper at byte " + std::to_string(positions[i]));
      ++via_cli;
    }
  }
  write(original);
  expect(verify_store(dir.path()).ok, "restored log fails verification");
  expect(run_binary({"--store", dir.path().string(), "log", "verify"}) == 0, "log verify rejects the restored log");
  return {true, std::to_string(succeeded) + " of 200 operations applied, " + std::to_string(final_seq) + " events, " +
                    std::to_string(positions.size()) + " tampers (" + std::to_string(via_cli) + " via CLI)"};
}

Outcome c13_authority() {
  const auto cfg = default_config();
  int successes = 0;
  int refusals = 0;
  const Timestamp now = ts("2026-03-03T10:00:00Z");
  for (int gate = 0; gate <= 6; ++gate) {
    for (RiskTier tier : {RiskTier::HighRisk, RiskTier::LimitedRisk, RiskTier::MinimalRisk}) {
      const auto cell = "gate " + std::to_string(gate) + " " + std::string(to_string(tier));
      const Row row = authority(gate, tier);

      const auto impl = required_approvals(gate, tier);
      std::set<std::set<R>> impl_set, oracle_set;
      for (const auto& c : impl) impl_set.insert(std::set<R>(c.any_of.begin(), c.any_of.end()));
      for (const auto& c : row) oracle_set.insert(std::set<R>(c.begin(), c.end()));
      expect(impl_set == oracle_set, cell + ": matrix row differs");

      const auto sys = make_system("auth", tier, gate);
      GateInputs gi{flat_assessments(uniform_scores(96)), all_statuses(), {}, now.date(), green_ti()};
      const auto ev = evaluate_gate(sys, *cfg, gate, gi);
      expect(ev.recommended == GateOutcome::Pass, cell + ": scenario does not pass");
      expect(!ev.executive_approval_required, cell + ": unexpected executive requirement");

      std::vector<std::vector<R>> choices{{}};
      for (const auto& clause : row) {
        std::vector<std::vector<R>> next;
        for (const auto& prefix : choices) {
          for (R r : clause) {
            auto c = prefix;
            c.push_back(r);
            next.push_back(c);
          }
        }
        choices = next;
      }
      for (const auto& roles : choices) {
        const std::size_t n = roles.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          DecisionRequest req;
          req.outcome = GateOutcome::Pass;
          for (std::size_t b = 0; b < n; ++b) {
            if (mask & (std::size_t{1} << b)) req.approvals.push_back(Approval{roles[b], "a", now});
          }
          const bool full = mask == (std::size_t{1} << n) - 1;
          const auto err = error_of([&] { make_decision(sys, ev, req, "d", now); });
          if (full) {
            expect(!err.has_value(), cell + ": exact role set rejected");
            ++successes;
          } else {
            expect(err == ErrorKind::AuthorityInsufficient, cell + ": subset " + std::to_string(mask) + " accepted");
            ++refusals;
          }
        }
      }
    }
  }
  return {true, std::to_string(successes) + " exact sets accepted, " + std::to_string(refusals) + " subsets refused"};
}

Outcome c14_exceptions() {
  const auto sys = make_system("exc", RiskTier::HighRisk, 3);
  for (const Date granted : {Date::from_ymd(2026, 1, 10), Date::from_ymd(2027, 12, 15), Date::from_ymd(2028, 2, 1)}) {
    ExceptionRequest req;
    req.kind = ExceptionKind::Temporary;
    req.gap_target = GapTarget::parse("Audit");
    req.residual_risk = ResidualRisk::Low;
    req.approver_role = R::AiCoE;
    req.granted = granted;
    req.remediation_plan_ref = "PLAN";
    req.expiry = granted.plus_days(90);
    expect(!error_of([&] { make_exception(sys, req, "e"); }), "90-day expiry rejected from " + granted.to_string());
    req.expiry = granted.plus_days(91);
    expect(error_of([&] { make_exception(sys, req, "e"); }) == ErrorKind::ExpiryTooLate,
           "91-day expiry accepted from " + granted.to_string());
  }

  int cells = 0;
  const Date granted = Date::from_ymd(2026, 5, 1);
  for (auto kind : {ExceptionKind::RiskAcceptance, ExceptionKind::Temporary, ExceptionKind::Permanent}) {
    for (auto residual : {ResidualRisk::Low, ResidualRisk::Medium, ResidualRisk::High}) {
      for (R role : kAllApprovalRoles) {
        ExceptionRequest req;
        req.kind = kind;
        req.gap_target = GapTarget::parse("EthicsBias");
        req.gap_description = "gap";
        req.residual_risk = residual;
        req.approver_role = role;
        req.granted = granted;
        if (kind == ExceptionKind::Temporary) {
          req.expiry = granted.plus_days(45);
          req.remediation_plan_ref = "PLAN";
        }
        if (kind == ExceptionKind::Permanent) req.reassessment_due = granted.plus_days(300);
        const bool allowed = exception_allowed(kind, residual, role);
        const auto err = error_of([&] { make_exception(sys, req, "e"); });
        const auto cell = std::string(to_string(kind)) + "/" + std::string(to_string(residual)) + "/" +
                          std::string(to_string(role));
        if (allowed) expect(!err.has_value(), cell + " rejected");
        else expect(err == ErrorKind::ApproverInsufficient, cell + " accepted");
        expect(approver_satisfies(kind, residual, role) == allowed, cell + " predicate");
        ++cells;
      }
    }
  }
  return {true, "90/91 days at 3 grant dates, " + std::to_string(cells) + " approver cells"};
}

}  // namespace

int main() {
  const std::uint64_t seed = 20260601;
  std::mt19937_64 rng(seed);
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_ms;
  };
  const std::vector<Criterion> criteria{
      {1, "control implementation 38/40 = 95.0", c1_implementation_score, 1000},
      {2, "risk band boundaries", c2_bands, 1000},
      {3, "Humana gate 3 golden case", c3_humana, 5000},
      {4, "Wells Fargo gate 2 golden case", c4_wells_fargo, 1000},
      {5, "phase minimum table and gates 4-5 floor", [&] { return c5_table(rng); }, 10000},
      {6, "gate decision trichotomy", [&] { return c6_trichotomy(rng); }, 10000},
      {7, "risk register rows", c7_risk_register, 1000},
      {8, "KPI status rows", c8_kpis, 1000},
      {9, "demographic parity oracle", [&] { return c9_parity(rng); }, 30000},
      {10, "robustness thresholds", c10_robustness, 1000},
      {11, "weighted trust index properties", [&] { return c11_weighted_ti(rng); }, 1000},
      {12, "event log replay and tamper detection", [&] { return c12_event_log(rng); }, 10000},
      {13, "gate authority matrix", c13_authority, 5000},
      {14, "exception rules", c14_exceptions, 1000},
  };
  std::cout << "acceptance seed " << seed << "\n";
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const Failure& f) {
      out = {false, f.what()};
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (out.ok && ms > c.budget_ms) out = {false, "took " + num(std::round(ms)) + " ms, budget " + num(c.budget_ms)};
    if (!out.ok) ++failed;
    std::cout << (out.ok ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << ": " << out.detail << " ("
              << num(std::round(ms)) << " ms)\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
