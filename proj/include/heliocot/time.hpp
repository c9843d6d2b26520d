#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace heliocot {

// A civil timestamp pinned to UTC, second resolution. Local-time inputs are
// converted at the ingest boundary; everything downstream speaks UTC.
class UtcInstant {
public:
    UtcInstant() = default;

    static UtcInstant from_epoch_seconds(std::int64_t secs) { return UtcInstant(secs); }
    static UtcInstant from_civil(int year, int month, int day,
                                 int hour, int minute, int second);

    // Accepts "YYYY-MM-DDTHH:MM:SSZ" (strict). Throws ParseError.
    static UtcInstant parse_iso8601(std::string_view text);

    std::string to_iso8601() const;

    std::int64_t epoch_seconds() const { return secs_; }

    int year() const;
    int month() const;
    int day() const;
    int hour() const;
    int minute() const;
    int second() const;

    // 1-based day of year; the fractional variant folds in the time of day.
    int day_of_year() const;
    double day_of_year_fractional() const;
    double hours_of_day() const;  // 0.0 .. 24.0

    UtcInstant plus_seconds(std::int64_t s) const { return UtcInstant(secs_ + s); }

    auto operator<=>(const UtcInstant&) const = default;

private:
    explicit UtcInstant(std::int64_t secs) : secs_(secs) {}

    std::int64_t secs_ = 0;  // seconds since the Unix epoch
};

} // namespace heliocot
