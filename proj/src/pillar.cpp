#include "trustgate/pillar.hpp"

#include "trustgate/json.hpp"

namespace trustgate {
namespace {

constexpr EnumNames<Pillar, 8> kPillarNames{{
    {Pillar::Cybersecurity, "Cybersecurity"},
    {Pillar::Privacy, "Privacy"},
    {Pillar::EthicsBias, "EthicsBias"},
    {Pillar::Transparency, "Transparency"},
    {Pillar::Explainability, "Explainability"},
    {Pillar::Regulations, "Regulations"},
    {Pillar::Audit, "Audit"},
    {Pillar::Accountability, "Accountability"},
}};

constexpr EnumNames<ControlPriority, 4> kControlPriorityNames{{
    {ControlPriority::Critical, "Critical"},
    {ControlPriority::High, "High"},
    {ControlPriority::Medium, "Medium"},
    {ControlPriority::Low, "Low"},
}};

constexpr EnumNames<PillarPriority, 4> kPillarPriorityNames{{
    {PillarPriority::Critical, "Critical"},
    {PillarPriority::High, "High"},
    {PillarPriority::Standard, "Standard"},
    {PillarPriority::Low, "Low"},
}};

}  // namespace

std::string_view to_string(Pillar p) { return enum_name(kPillarNames, p); }
std::optional<Pillar> parse_pillar(std::string_view name) { return enum_from_name(kPillarNames, name); }

std::string_view to_string(ControlPriority p) { return enum_name(kControlPriorityNames, p); }
std::optional<ControlPriority> parse_control_priority(std::string_view name) {
  return enum_from_name(kControlPriorityNames, name);
}

double weight_of(ControlPriority p) {
  switch (p) {
    case ControlPriority::Critical: return 3.0;
    case ControlPriority::High: return 2.0;
    case ControlPriority::Medium: return 1.0;
    case ControlPriority::Low: return 0.5;
  }
  return 0.0;
}

std::string_view to_string(PillarPriority p) { return enum_name(kPillarPriorityNames, p); }
std::optional<PillarPriority> parse_pillar_priority(std::string_view name) {
  return enum_from_name(kPillarPriorityNames, name);
}

double weight_of(PillarPriority p) {
  switch (p) {
    case PillarPriority::Critical: return 3.0;
    case PillarPriority::High: return 2.0;
    case PillarPriority::Standard: return 1.0;
    case PillarPriority::Low: return 0.5;
  }
  return 0.0;
}

}  // namespace trustgate
