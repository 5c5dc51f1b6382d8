#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trustgate/pillar.hpp"

namespace trustgate {

inline constexpr int kLastGatedPhase = 5;  // gates 0..5 carry pillar minimums
inline constexpr int kRetirementPhase = 6;

enum class CheckKind { DemographicParity, RobustnessThreshold, PiiScan };

std::string_view to_string(CheckKind k);
std::optional<CheckKind> parse_check_kind(std::string_view name);

struct PillarSpec {
  Pillar id;
  double weight;
};

struct ControlFamily {
  std::string code;
  std::string name;
  std::optional<int> declared_count;
};

struct ControlDefinition {
  std::string id;  // FAMILY-NN
  std::string family;
  std::string title;
  ControlPriority priority = ControlPriority::Medium;
  std::vector<Pillar> pillars;  // first entry is the primary pillar
  std::optional<int> required_from_gate;
  std::optional<CheckKind> check_binding;

  Pillar primary_pillar() const { return pillars.front(); }
  bool maps_to(Pillar p) const;
};

struct PhaseRequirements {
  int phase = 0;
  std::optional<PillarMap<double>> per_pillar_min;  // absent for retirement
  std::optional<int> min_cumulative_controls;
};

struct ScoreRange {
  double low;
  double high;
  bool contains(double v) const { return v >= low && v <= high; }
};

// Immutable after load; safe to share between readers.
struct FrameworkConfig {
  std::vector<PillarSpec> pillars;
  std::vector<ControlFamily> families;
  std::vector<ControlDefinition> controls;
  std::array<PhaseRequirements, 7> phases;
  std::map<PillarPriority, ScoreRange> priority_min_ranges;

  const ControlDefinition* find_control(std::string_view id) const;
  const ControlFamily* find_family(std::string_view code) const;
  const PhaseRequirements& phase(int p) const;
  PillarMap<double> default_weights() const;
};

// Parses and validates catalog text. `source` names the document in error messages.
FrameworkConfig parse_catalog(std::string_view text, std::string_view source = "<catalog>");
FrameworkConfig load_catalog(const std::filesystem::path& path);

// Controls required at or before `gate` (cumulative), ordered as in the catalog.
std::vector<ControlDefinition> applicable_controls(const FrameworkConfig& config, int gate);

// Same, restricted to controls mapped (primary or secondary) to `pillar`.
std::vector<ControlDefinition> applicable_controls(const FrameworkConfig& config, int gate,
                                                   Pillar pillar);

struct FamilyCountDiscrepancy {
  std::string family;
  int declared;
  int actual;
};

std::vector<FamilyCountDiscrepancy> validate_family_counts(const FrameworkConfig& config);

}  // namespace trustgate
