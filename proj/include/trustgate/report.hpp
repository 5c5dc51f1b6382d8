#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "trustgate/catalog.hpp"
#include "trustgate/json.hpp"
#include "trustgate/registry.hpp"

namespace trustgate {

enum class ReportLevel { Enterprise, BusinessUnit, Project, ControlTracker, Vendor };

std::string_view to_string(ReportLevel l);
// Accepts the enum names and their kebab-case forms (e.g. "control-tracker").
std::optional<ReportLevel> parse_report_level(std::string_view name);

inline constexpr std::string_view kPortfolioScope = "portfolio";

struct ScorecardReport {
  ReportLevel level = ReportLevel::Enterprise;
  std::string scope;
  std::uint64_t audit_sequence = 0;
  std::string cadence;
  Json body;
};

// Renders from a registry state; evaluation dates are taken from the state's
// last event so that re-rendering the same sequence is byte-identical.
// Throws UnknownScope.
ScorecardReport render_scorecard(ReportLevel level, std::string_view scope, const RegistryState& state,
                                 const FrameworkConfig& config);

Json encode(const ScorecardReport& r);
std::string render_text(const ScorecardReport& r);

}  // namespace trustgate
