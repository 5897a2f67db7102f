#include <chrono>
#include "bimnav/time.hpp"

#include <charconv>
#include <cstdio>

#include "bimnav/error.hpp"

namespace bimnav
{

namespace
{

// Howard Hinnant's days_from_civil.
long days_from_civil(long y, unsigned m, unsigned d)
{
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, long & y, unsigned & m, unsigned & d)
{
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

class Cursor
{
public:
  explicit Cursor(std::string_view s)
  : s_(s) {}

  long number(std::size_t digits)
  {
    if (pos_ + digits > s_.size()) {
      fail("truncated timestamp");
    }
    long v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + digits, v);
    if (ec != std::errc{} || ptr != s_.data() + pos_ + digits) {
      fail("expected digits");
    }
    pos_ += digits;
    return v;
  }

  void expect(char c)
  {
    if (pos_ >= s_.size() || s_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  bool accept(char c)
  {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool done() const {return pos_ == s_.size();}
  char peek() const {return pos_ < s_.size() ? s_[pos_] : '\0';}

  [[noreturn]] void fail(const std::string & what) const
  {
    throw ParseError("timestamp '" + std::string(s_) + "'", what);
  }

private:
  std::string_view s_;
  std::size_t pos_{0};
};

}  // namespace

Timestamp parse_iso8601(std::string_view text)
{
  Cursor c(text);
  const long year = c.number(4);
  c.expect('-');
  const long month = c.number(2);
  c.expect('-');
  const long day = c.number(2);
  const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(year)},
    std::chrono::month{static_cast<unsigned>(month)}, std::chrono::day{static_cast<unsigned>(day)}};
  if (month < 1 || month > 12 || day < 1 || !ymd.ok()) {
    c.fail("date out of range");
  }
  long seconds = 0;
  if (!c.done()) {
    if (!c.accept('T')) {
      c.expect(' ');
    }
    const long hh = c.number(2);
    c.expect(':');
    const long mm = c.number(2);
    long ss = 0;
    if (c.accept(':')) {
      ss = c.number(2);
      if (c.accept('.')) {
        while (c.peek() >= '0' && c.peek() <= '9') {
          c.number(1);
        }
      }
    }
    if (hh > 23 || mm > 59 || ss > 60) {
      c.fail("time out of range");
    }
    seconds = hh * 3600 + mm * 60 + ss;
    if (c.accept('Z')) {
    } else if (c.peek() == '+' || c.peek() == '-') {
      const long sgn = c.peek() == '+' ? 1 : -1;
      c.accept(c.peek());
      const long oh = c.number(2);
      c.accept(':');
      const long om = c.number(2);
      seconds -= sgn * (oh * 3600 + om * 60);
    }
  }
  if (!c.done()) {
    c.fail("trailing characters");
  }
  const long d = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return Timestamp{std::chrono::seconds{d * 86400L + seconds}};
}

std::string format_iso8601(Timestamp t)
{
  const long total = t.time_since_epoch().count();
  long d = total / 86400;
  long rem = total % 86400;
  if (rem < 0) {
    rem += 86400;
    --d;
  }
  long y = 0;
  unsigned m = 0;
  unsigned dd = 0;
  civil_from_days(d, y, m, dd);
  char buf[32];
  std::snprintf(
    buf, sizeof(buf), "%04ld-%02u-%02uT%02ld:%02ld:%02ldZ", y, m, dd, rem / 3600,
    (rem / 60) % 60, rem % 60);
  return buf;
}

}  // namespace bimnav
