#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "trustgate/catalog.hpp"
#include "trustgate/codec.hpp"
#include "trustgate/engine.hpp"
#include "trustgate/lifecycle.hpp"
#include "trustgate/scoring.hpp"

namespace testsupport {

namespace fs = std::filesystem;
using namespace trustgate;

inline const std::string kFixtureDir = TRUSTGATE_FIXTURE_DIR;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json fixture(const std::string& name) { return Json::parse(read_file(fs::path(kFixtureDir) / name)); }

inline std::shared_ptr<const FrameworkConfig> default_config() {
  static auto cfg = std::make_shared<const FrameworkConfig>(load_catalog(TRUSTGATE_DEFAULT_CATALOG));
  return cfg;
}

// Removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("trustgate-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline PillarAssessment flat_assessment(Pillar p, double score) {
  return PillarAssessment{p, score, score, score, score, score};
}

inline PillarMap<PillarAssessment> flat_assessments(const PillarMap<double>& scores) {
  PillarMap<PillarAssessment> out;
  for (const auto& [p, s] : scores) out[p] = flat_assessment(p, s);
  return out;
}

inline Json flat_assessment_input(const PillarMap<double>& scores) {
  Json pillars = Json::object();
  for (const auto& [p, s] : scores) {
    pillars[std::string(to_string(p))] = Json{{"ci", s}, {"ce", s}, {"re_score", s}, {"cs", s}};
  }
  return Json{{"pillars", pillars}};
}

inline PillarMap<double> uniform_scores(double s) {
  PillarMap<double> m;
  for (Pillar p : kAllPillars) m[p] = s;
  return m;
}

inline std::vector<ControlStatus> all_implemented(const FrameworkConfig& cfg, int gate) {
  std::vector<ControlStatus> out;
  for (const auto& c : applicable_controls(cfg, std::min(gate, kLastGatedPhase))) {
    ControlStatus s;
    s.control_id = c.id;
    s.implementation = Implementation::implemented();
    s.effectiveness = Effectiveness::ValidatedEffective;
    out.push_back(s);
  }
  return out;
}

inline AiSystem make_system(const std::string& id, RiskTier tier, int phase) {
  AiSystem s;
  s.system_id = id;
  s.name = id;
  s.risk_tier = tier;
  s.current_phase = phase;
  return normalize_system(s, *default_config());
}

inline Timestamp ts(const std::string& text) { return Timestamp::parse(text); }

}  // namespace testsupport
