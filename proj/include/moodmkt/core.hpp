#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace moodmkt {

/// Raised for any invalid input or violated precondition. The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A UTC calendar day.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}
  constexpr Date(int y, unsigned m, unsigned d)
      : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}}) {}

  static Date from_epoch_seconds(std::int64_t secs) {
    auto day = std::chrono::floor<std::chrono::days>(std::chrono::sys_seconds{std::chrono::seconds{secs}});
    return Date{day};
  }

  constexpr std::chrono::sys_days sys_days() const { return days_; }
  constexpr std::int64_t serial() const { return days_.time_since_epoch().count(); }

  constexpr Date operator+(std::int64_t n) const {
    return Date{days_ + std::chrono::days{n}};
  }
  constexpr Date operator-(std::int64_t n) const {
    return Date{days_ - std::chrono::days{n}};
  }
  constexpr std::int64_t operator-(Date other) const { return serial() - other.serial(); }
  constexpr Date& operator++() {
    days_ += std::chrono::days{1};
    return *this;
  }

  constexpr auto operator<=>(const Date&) const = default;

  std::string iso() const {
    std::chrono::year_month_day ymd{days_};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
  }

 private:
  std::chrono::sys_days days_{};
};

namespace detail {

inline std::optional<int> parse_fixed_digits(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    lines.push_back(content.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

inline bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace detail

/// Parses `YYYY-MM-DD`. Returns nullopt for anything else, including impossible calendar days.
inline std::optional<Date> parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = detail::parse_fixed_digits(s.substr(0, 4));
  auto m = detail::parse_fixed_digits(s.substr(5, 2));
  auto d = detail::parse_fixed_digits(s.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
                                  std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{std::chrono::sys_days{ymd}};
}

/// Parses an ISO-8601 timestamp (`YYYY-MM-DD[THH:MM[:SS[.fff]]][Z|+HH:MM|-HH:MM]`) or integer
/// epoch seconds into UTC epoch seconds.
inline std::optional<std::int64_t> parse_timestamp(std::string_view raw) {
  auto s = detail::trim(raw);
  if (s.empty()) return std::nullopt;

  bool all_digits = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= '0' && s[i] <= '9') && !(i == 0 && s[i] == '-')) all_digits = false;
  }
  if (all_digits) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
  }

  auto date = parse_iso_date(s.substr(0, std::min<std::size_t>(10, s.size())));
  if (!date) return std::nullopt;
  std::int64_t secs = date->serial() * 86400;
  s.remove_prefix(10);
  if (s.empty()) return secs;
  if (s.front() != 'T' && s.front() != ' ') return std::nullopt;
  s.remove_prefix(1);

  auto take2 = [&](int max) -> std::optional<int> {
    if (s.size() < 2) return std::nullopt;
    auto v = detail::parse_fixed_digits(s.substr(0, 2));
    if (!v || *v > max) return std::nullopt;
    s.remove_prefix(2);
    return v;
  };
  auto hh = take2(23);
  if (!hh || s.empty() || s.front() != ':') return std::nullopt;
  s.remove_prefix(1);
  auto mm = take2(59);
  if (!mm) return std::nullopt;
  int ss = 0;
  if (!s.empty() && s.front() == ':') {
    s.remove_prefix(1);
    auto v = take2(60);
    if (!v) return std::nullopt;
    ss = *v;
    if (!s.empty() && s.front() == '.') {
      s.remove_prefix(1);
      while (!s.empty() && s.front() >= '0' && s.front() <= '9') s.remove_prefix(1);
    }
  }
  secs += *hh * 3600 + *mm * 60 + ss;
  if (s.empty() || s == "Z") return secs;
  if (s.front() == '+' || s.front() == '-') {
    int sign = s.front() == '+' ? 1 : -1;
    s.remove_prefix(1);
    auto oh = take2(23);
    if (!oh) return std::nullopt;
    if (!s.empty() && s.front() == ':') s.remove_prefix(1);
    auto om = take2(59);
    if (!om || !s.empty()) return std::nullopt;
    return secs - sign * (*oh * 3600 + *om * 60);
  }
  return std::nullopt;
}

/// Shortest round-trip decimal representation.
inline std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

/// Fixed-point with `digits` decimals and the leading zero dropped (".262", "-.085"), the
/// typography of correlation and p-value tables.
inline std::string format_coefficient(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0." + std::string(digits, '0')) s.erase(0, 1);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

inline std::optional<double> parse_number(std::string_view raw) {
  auto s = detail::trim(raw);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Splits one delimiter-separated line, honouring double-quoted fields with `""` escapes.
inline std::vector<std::string> split_delimited(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delim) {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

/// Quotes a CSV field only when it needs it.
inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// FNV-1a, 64-bit. Used for input digests in report headers.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace moodmkt
