#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

namespace trustgate {

// Insertion-ordered JSON: field order follows the order in which codecs emit
// fields, which keeps serialized records canonical.
using Json = nlohmann::ordered_json;

// Bidirectional enum <-> name table used by every enum codec in the project.
template <typename E, std::size_t N>
using EnumNames = std::array<std::pair<E, std::string_view>, N>;

template <typename E, std::size_t N>
constexpr std::string_view enum_name(const EnumNames<E, N>& names, E value) {
  for (const auto& [v, name] : names) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
constexpr std::optional<E> enum_from_name(const EnumNames<E, N>& names,
                                          std::string_view name) {
  for (const auto& [v, n] : names) {
    if (n == name) return v;
  }
  return std::nullopt;
}

}  // namespace trustgate
