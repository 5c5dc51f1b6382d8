#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace trustgate {

enum class Pillar {
  Cybersecurity,
  Privacy,
  EthicsBias,
  Transparency,
  Explainability,
  Regulations,
  Audit,
  Accountability,
};

inline constexpr std::size_t kPillarCount = 8;

inline constexpr std::array<Pillar, kPillarCount> kAllPillars{
    Pillar::Cybersecurity, Pillar::Privacy,        Pillar::EthicsBias, Pillar::Transparency,
    Pillar::Explainability, Pillar::Regulations,   Pillar::Audit,      Pillar::Accountability,
};

template <typename T>
using PillarMap = std::map<Pillar, T>;

std::string_view to_string(Pillar p);
std::optional<Pillar> parse_pillar(std::string_view name);

// Priority of an individual catalog control; weights the implementation score.
enum class ControlPriority { Critical, High, Medium, Low };

std::string_view to_string(ControlPriority p);
std::optional<ControlPriority> parse_control_priority(std::string_view name);
double weight_of(ControlPriority p);

// Per-use-case importance of a pillar; sets Trust Index weights and the
// minimum-score range a system may choose from.
enum class PillarPriority { Critical, High, Standard, Low };

inline constexpr std::array<PillarPriority, 4> kAllPillarPriorities{
    PillarPriority::Critical, PillarPriority::High, PillarPriority::Standard, PillarPriority::Low};

std::string_view to_string(PillarPriority p);
std::optional<PillarPriority> parse_pillar_priority(std::string_view name);
double weight_of(PillarPriority p);

}  // namespace trustgate
