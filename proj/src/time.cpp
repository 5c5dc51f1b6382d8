#include "trustgate/time.hpp"

#include <charconv>
#include <cstdio>

#include "trustgate/error.hpp"

namespace trustgate {
namespace {

int parse_fixed(std::string_view text, std::size_t pos, std::size_t len,
                std::string_view original) {
  int value = 0;
  if (pos + len > text.size()) {
    throw Error(ErrorKind::InvalidArgument, "malformed date/time '" + std::string(original) + "'");
  }
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw Error(ErrorKind::InvalidArgument, "malformed date/time '" + std::string(original) + "'");
    }
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c, std::string_view original) {
  if (pos >= text.size() || text[pos] != c) {
    throw Error(ErrorKind::InvalidArgument, "malformed date/time '" + std::string(original) + "'");
  }
}

std::chrono::year_month_day parse_ymd(std::string_view text) {
  const int y = parse_fixed(text, 0, 4, text);
  expect_char(text, 4, '-', text);
  const int m = parse_fixed(text, 5, 2, text);
  expect_char(text, 7, '-', text);
  const int d = parse_fixed(text, 8, 2, text);
  std::chrono::year_month_day ymd{std::chrono::year(y), std::chrono::month(static_cast<unsigned>(m)),
                                  std::chrono::day(static_cast<unsigned>(d))};
  if (!ymd.ok()) {
    throw Error(ErrorKind::InvalidArgument, "invalid calendar date '" + std::string(text) + "'");
  }
  return ymd;
}

}  // namespace

Date Date::parse(std::string_view text) {
  if (text.size() != 10) {
    throw Error(ErrorKind::InvalidArgument, "malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  return Date(std::chrono::sys_days(parse_ymd(text)));
}

Date Date::from_ymd(int y, unsigned m, unsigned d) {
  return Date(std::chrono::sys_days(
      std::chrono::year_month_day{std::chrono::year(y), std::chrono::month(m), std::chrono::day(d)}));
}

Date Date::plus_years(int n) const {
  auto ymd = std::chrono::year_month_day(days_) + std::chrono::years(n);
  if (!ymd.ok()) {
    // Feb 29 rolls back to Feb 28.
    ymd = ymd.year() / ymd.month() / std::chrono::last;
  }
  return Date(std::chrono::sys_days(ymd));
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd(days_);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Timestamp Timestamp::now() {
  return Timestamp(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

Timestamp Timestamp::parse(std::string_view text) {
  if (text.size() != 20 || text[10] != 'T' || text[19] != 'Z') {
    throw Error(ErrorKind::InvalidArgument,
                "malformed timestamp '" + std::string(text) + "', expected YYYY-MM-DDTHH:MM:SSZ");
  }
  const auto ymd = parse_ymd(text.substr(0, 10));
  const int hh = parse_fixed(text, 11, 2, text);
  expect_char(text, 13, ':', text);
  const int mm = parse_fixed(text, 14, 2, text);
  expect_char(text, 16, ':', text);
  const int ss = parse_fixed(text, 17, 2, text);
  if (hh > 23 || mm > 59 || ss > 60) {
    throw Error(ErrorKind::InvalidArgument, "time of day out of range in '" + std::string(text) + "'");
  }
  return Timestamp(std::chrono::sys_days(ymd) + std::chrono::hours(hh) + std::chrono::minutes(mm) +
                   std::chrono::seconds(ss));
}

std::string Timestamp::to_string() const {
  const auto day = std::chrono::floor<std::chrono::days>(t_);
  const std::chrono::hh_mm_ss hms(t_ - day);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", Date(day).to_string().c_str(),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

}  // namespace trustgate
