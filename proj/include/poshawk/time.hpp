#pragma once

#include <cstdint>
#include <string>

namespace poshawk {

/// Calendar date-time without zone attachment. Seconds may be fractional
/// when produced by arithmetic, but parsed inputs are whole-second.
struct CivilDateTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);

/// Inverse of days_from_civil.
CivilDateTime civil_from_days(std::int64_t days);

/// Seconds since civil 1970-01-01T00:00:00 (no zone applied).
std::int64_t civil_seconds(const CivilDateTime& c);

/// Day of week with Monday = 0 .. Sunday = 6.
int weekday_monday0(std::int64_t day_serial);

bool is_valid_date(int year, int month, int day);

/// Parses "YYYY-MM-DD". Throws std::invalid_argument on malformed input.
CivilDateTime parse_civil_date(const std::string& s);

/// Parses "YYYY-MM-DD[T ]HH:MM:SS". Throws on malformed input.
CivilDateTime parse_civil_datetime(const std::string& s);

std::string format_civil_datetime(const CivilDateTime& c);

/// Fixed-offset zone. Accepted names: "UTC", "Z", "UTC+hh[:mm]",
/// "UTC-hh[:mm]", "+hh:mm", "-hh:mm". Daylight-saving zones are out of
/// scope; all covariate arithmetic assumes a constant offset.
struct TimeZoneOffset {
    int offset_s = 0;

    static TimeZoneOffset parse(const std::string& name);
    std::string name() const;
};

/// Parses an event timestamp: ISO-8601 with optional offset suffix, or a
/// number interpreted as seconds since the Unix epoch. Returns UTC
/// seconds. A bare civil timestamp is interpreted in `default_zone`.
double parse_timestamp_utc(const std::string& s, const TimeZoneOffset& default_zone);

/// floor(a / b) for possibly negative a, b > 0.
std::int64_t floor_div(std::int64_t a, std::int64_t b);

}  // namespace poshawk
