#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace trustgate {

// Calendar date (UTC), rendered as YYYY-MM-DD.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days) {}

  static Date parse(std::string_view text);  // throws Error{InvalidArgument}
  static Date from_ymd(int y, unsigned m, unsigned d);

  std::string to_string() const;
  std::chrono::sys_days days() const { return days_; }

  Date plus_days(int n) const { return Date(days_ + std::chrono::days(n)); }
  Date plus_years(int n) const;
  long days_until(const Date& later) const { return (later.days_ - days_).count(); }

  auto operator<=>(const Date&) const = default;

 private:
  std::chrono::sys_days days_{};
};

// UTC instant with second resolution, rendered as RFC-3339 "YYYY-MM-DDTHH:MM:SSZ".
class Timestamp {
 public:
  Timestamp() = default;
  explicit Timestamp(std::chrono::sys_seconds t) : t_(t) {}

  static Timestamp now();
  static Timestamp parse(std::string_view text);  // throws Error{InvalidArgument}

  std::string to_string() const;
  Date date() const { return Date(std::chrono::floor<std::chrono::days>(t_)); }
  std::chrono::sys_seconds value() const { return t_; }

  auto operator<=>(const Timestamp&) const = default;

 private:
  std::chrono::sys_seconds t_{};
};

}  // namespace trustgate
