#include "poshawk/time.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace poshawk {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Howard Hinnant's civil calendar algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = floor_div(y, 400);
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDateTime civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = floor_div(z, 146097);
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    CivilDateTime c;
    c.year = static_cast<int>(y + (m <= 2));
    c.month = static_cast<int>(m);
    c.day = static_cast<int>(d);
    return c;
}

std::int64_t civil_seconds(const CivilDateTime& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 +
           c.minute * 60 + c.second;
}

int weekday_monday0(std::int64_t day_serial) {
    // 1970-01-01 was a Thursday (index 3).
    std::int64_t w = (day_serial + 3) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w);
}

bool is_valid_date(int year, int month, int day) {
    if (month < 1 || month > 12 || day < 1) return false;
    static const int md[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int dim = md[month - 1];
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) dim = 29;
    return day <= dim;
}

CivilDateTime parse_civil_date(const std::string& s) {
    int y, m, d;
    char tail;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3 ||
        !is_valid_date(y, m, d)) {
        throw std::invalid_argument("malformed date: '" + s + "'");
    }
    CivilDateTime c;
    c.year = y;
    c.month = m;
    c.day = d;
    return c;
}

CivilDateTime parse_civil_datetime(const std::string& s) {
    int y, m, d, hh, mm, ss;
    if (std::sscanf(s.c_str(), "%d-%d-%d%*1[T ]%d:%d:%d", &y, &m, &d, &hh, &mm, &ss) != 6 ||
        !is_valid_date(y, m, d) || hh < 0 || hh > 23 || mm < 0 || mm > 59 || ss < 0 || ss > 60) {
        throw std::invalid_argument("malformed datetime: '" + s + "'");
    }
    return CivilDateTime{y, m, d, hh, mm, ss};
}

std::string format_civil_datetime(const CivilDateTime& c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", c.year, c.month,
                  c.day, c.hour, c.minute, c.second);
    return buf;
}

TimeZoneOffset TimeZoneOffset::parse(const std::string& name) {
    std::string s = name;
    if (s == "UTC" || s == "Z" || s.empty()) return TimeZoneOffset{0};
    if (s.rfind("UTC", 0) == 0) s = s.substr(3);
    if (s.empty()) return TimeZoneOffset{0};
    int sign = 1;
    if (s[0] == '+') {
        s = s.substr(1);
    } else if (s[0] == '-') {
        sign = -1;
        s = s.substr(1);
    } else {
        throw std::invalid_argument("unrecognized timezone: '" + name + "'");
    }
    int hh = 0, mm = 0;
    if (std::sscanf(s.c_str(), "%d:%d", &hh, &mm) < 1 || hh < 0 || hh > 14 || mm < 0 ||
        mm > 59) {
        throw std::invalid_argument("unrecognized timezone: '" + name + "'");
    }
    return TimeZoneOffset{sign * (hh * 3600 + mm * 60)};
}

std::string TimeZoneOffset::name() const {
    if (offset_s == 0) return "UTC";
    char buf[16];
    int a = std::abs(offset_s);
    std::snprintf(buf, sizeof(buf), "UTC%c%02d:%02d", offset_s < 0 ? '-' : '+', a / 3600,
                  (a % 3600) / 60);
    return buf;
}

double parse_timestamp_utc(const std::string& s, const TimeZoneOffset& default_zone) {
    if (s.empty()) throw std::invalid_argument("empty timestamp");
    // Pure number: epoch seconds.
    {
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (end && *end == '\0') return v;
    }
    int y, m, d, hh, mm;
    double ss;
    int n = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%*1[T ]%d:%d:%lf%n", &y, &m, &d, &hh, &mm, &ss,
                    &n) != 6 ||
        !is_valid_date(y, m, d)) {
        throw std::invalid_argument("malformed timestamp: '" + s + "'");
    }
    std::string rest = s.substr(n);
    int offset = default_zone.offset_s;
    if (!rest.empty()) {
        if (rest == "Z") {
            offset = 0;
        } else {
            offset = TimeZoneOffset::parse(rest).offset_s;
        }
    }
    const std::int64_t civil = days_from_civil(y, m, d) * 86400 + hh * 3600 + mm * 60;
    return static_cast<double>(civil) + ss - offset;
}

}  // namespace poshawk
