#include "csm/timestamp.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace csm {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  int digits(std::size_t count) {
    int value = 0;
    for (std::size_t k = 0; k < count; ++k) {
      if (done() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail();
      value = value * 10 + (text_[pos_++] - '0');
    }
    return value;
  }

  [[noreturn]] void fail() const {
    throw std::invalid_argument("malformed ISO-8601 timestamp '" + std::string(text_) + "'");
  }

  void expect(char c) {
    if (!consume(c)) fail();
  }

  // Fractional seconds to milliseconds; extra digits are truncated.
  Millis fraction_millis() {
    Millis ms = 0;
    std::size_t count = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      if (count < 3) ms = ms * 10 + (text_[pos_] - '0');
      ++pos_;
      ++count;
    }
    if (count == 0) fail();
    for (; count < 3; ++count) ms *= 10;
    return ms;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Millis parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  Cursor c(text);
  const int y = c.digits(4);
  c.expect('-');
  const int mo = c.digits(2);
  c.expect('-');
  const int d = c.digits(2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) c.fail();

  Millis ms = 0;
  if (c.consume('T') || c.consume(' ')) {
    const int hh = c.digits(2);
    c.expect(':');
    const int mm = c.digits(2);
    int ss = 0;
    if (c.consume(':')) {
      ss = c.digits(2);
      if (c.consume('.') || c.consume(',')) ms = c.fraction_millis();
    }
    if (hh > 23 || mm > 59 || ss > 60) c.fail();
    ms += hh * kMillisPerHour + mm * kMillisPerMinute + ss * kMillisPerSecond;

    if (!c.consume('Z')) {
      const char sign = c.peek();
      if (sign == '+' || sign == '-') {
        c.consume(sign);
        const int oh = c.digits(2);
        c.consume(':');
        const int om = c.digits(2);
        if (oh > 23 || om > 59) c.fail();
        const Millis offset = oh * kMillisPerHour + om * kMillisPerMinute;
        ms += sign == '+' ? -offset : offset;
      }
    }
  }
  if (!c.done()) c.fail();

  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Millis>(days) * kMillisPerDay + ms;
}

std::string format_iso8601(Millis t) {
  using namespace std::chrono;
  Millis days = t / kMillisPerDay;
  Millis rem = t % kMillisPerDay;
  if (rem < 0) {
    rem += kMillisPerDay;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(rem / kMillisPerHour), static_cast<long long>(rem / kMillisPerMinute % 60),
                static_cast<long long>(rem / kMillisPerSecond % 60), static_cast<long long>(rem % 1000));
  return buf;
}

std::string format_duration(Millis d) {
  struct Unit {
    Millis size;
    const char* suffix;
  };
  static constexpr Unit units[] = {
      {kMillisPerDay, "d"}, {kMillisPerHour, "h"}, {kMillisPerMinute, "m"}, {kMillisPerSecond, "s"}};
  const Millis magnitude = d < 0 ? -d : d;
  for (const auto& u : units) {
    if (magnitude >= u.size) {
      char buf[48];
      if (d % u.size == 0)
        std::snprintf(buf, sizeof buf, "%lld%s", static_cast<long long>(d / u.size), u.suffix);
      else
        std::snprintf(buf, sizeof buf, "%.3g%s", static_cast<double>(d) / static_cast<double>(u.size), u.suffix);
      return buf;
    }
  }
  return std::to_string(d) + "ms";
}

}  // namespace csm
