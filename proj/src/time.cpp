#include "heliocot/time.hpp"

#include <chrono>
#include <cstdio>

#include "heliocot/errors.hpp"

namespace heliocot {

namespace {

using days = std::chrono::days;
using sys_days = std::chrono::sys_days;

std::chrono::year_month_day civil_of(std::int64_t secs) {
    const auto dp = std::chrono::floor<days>(std::chrono::sys_seconds{std::chrono::seconds{secs}});
    return std::chrono::year_month_day{sys_days{dp}};
}

std::int64_t seconds_of_day(std::int64_t secs) {
    std::int64_t s = secs % 86400;
    if (s < 0) s += 86400;
    return s;
}

} // namespace

UtcInstant UtcInstant::from_civil(int year, int month, int day,
                                  int hour, int minute, int second) {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{static_cast<unsigned>(month)},
                                          std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok())
        throw ValidationError("invalid calendar date " + std::to_string(year) + "-" +
                              std::to_string(month) + "-" + std::to_string(day));
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 59)
        throw ValidationError("invalid time of day");
    const auto dp = sys_days{ymd};
    const std::int64_t secs =
        std::chrono::duration_cast<std::chrono::seconds>(dp.time_since_epoch()).count() +
        hour * 3600LL + minute * 60LL + second;
    return UtcInstant(secs);
}

UtcInstant UtcInstant::parse_iso8601(std::string_view text) {
    int y, mo, d, h, mi, s;
    char tail;
    const std::string buf(text);
    if (std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &tail) != 7 ||
        tail != 'Z' || buf.size() != 20)
        throw ParseError("bad timestamp '" + buf + "' (expected YYYY-MM-DDTHH:MM:SSZ)");
    try {
        return from_civil(y, mo, d, h, mi, s);
    } catch (const ValidationError& e) {
        throw ParseError("bad timestamp '" + buf + "': " + e.what());
    }
}

std::string UtcInstant::to_iso8601() const {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  year(), month(), day(), hour(), minute(), second());
    return buf;
}

int UtcInstant::year() const { return static_cast<int>(civil_of(secs_).year()); }
int UtcInstant::month() const { return static_cast<int>(static_cast<unsigned>(civil_of(secs_).month())); }
int UtcInstant::day() const { return static_cast<int>(static_cast<unsigned>(civil_of(secs_).day())); }
int UtcInstant::hour() const { return static_cast<int>(seconds_of_day(secs_) / 3600); }
int UtcInstant::minute() const { return static_cast<int>(seconds_of_day(secs_) / 60 % 60); }
int UtcInstant::second() const { return static_cast<int>(seconds_of_day(secs_) % 60); }

int UtcInstant::day_of_year() const {
    const auto ymd = civil_of(secs_);
    const auto jan1 = sys_days{std::chrono::year_month_day{ymd.year(), std::chrono::month{1},
                                                           std::chrono::day{1}}};
    return static_cast<int>((sys_days{ymd} - jan1).count()) + 1;
}

double UtcInstant::day_of_year_fractional() const {
    return day_of_year() + seconds_of_day(secs_) / 86400.0;
}

double UtcInstant::hours_of_day() const {
    return seconds_of_day(secs_) / 3600.0;
}

} // namespace heliocot
