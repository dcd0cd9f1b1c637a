#include "poshawk/covariates.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "poshawk/errors.hpp"

namespace poshawk {

const std::array<const char*, kCovariateDim> kCovariateNames = {
    "intercept", "dow", "am", "pm", "protest", "team_a", "team_b"};

CovariateVector covariate_vector(const CovariateCalendar& cal, double t) {
    const double local = cal.local_seconds(t);
    const std::int64_t local_s = static_cast<std::int64_t>(std::floor(local));
    const std::int64_t day = floor_div(local_s, 86400);
    const std::int64_t sod = local_s - day * 86400;
    const bool am = sod < 43200;
    CovariateVector c{};
    c[0] = 1.0;
    c[1] = static_cast<double>(weekday_monday0(day));
    c[2] = am ? 1.0 : 0.0;
    c[3] = am ? 0.0 : 1.0;
    c[4] = cal.protest_days.count(day) ? 1.0 : 0.0;
    c[5] = cal.team_a_days.count(day) ? 1.0 : 0.0;
    c[6] = cal.team_b_days.count(day) ? 1.0 : 0.0;
    return c;
}

Partition hourly_partition(const CovariateCalendar& cal, double t_a, double t_b) {
    if (!(t_a < t_b)) throw NumericError("hourly_partition: t_a must be < t_b");
    Partition p;
    p.t_a = t_a;
    p.t_b = t_b;
    // Local hour boundaries fall where (epoch civil seconds + t) % 3600 == 0.
    const double base = static_cast<double>(civil_seconds(cal.epoch));
    double t = t_a;
    while (t < t_b - 1e-12) {
        const double local = base + t;
        double next_local = (std::floor(local / 3600.0) + 1.0) * 3600.0;
        double next = next_local - base;
        if (next <= t + 1e-12) next = t + 3600.0;
        if (next > t_b) next = t_b;
        p.cells.push_back({t, next});
        t = next;
    }
    return p;
}

CovariateCalendar parse_calendar_csv(const std::string& csv_text,
                                     const CivilDateTime& epoch,
                                     const TimeZoneOffset& zone) {
    CovariateCalendar cal;
    cal.epoch = epoch;
    cal.zone = zone;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("calendar CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "date,protest,team_a,team_b") {
        throw IoError("calendar CSV header must be 'date,protest,team_a,team_b', got '" +
                      line + "'");
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string date_s, protest_s, a_s, b_s;
        if (!std::getline(row, date_s, ',') || !std::getline(row, protest_s, ',') ||
            !std::getline(row, a_s, ',') || !std::getline(row, b_s)) {
            throw IoError("calendar CSV line " + std::to_string(lineno) + ": malformed row");
        }
        CivilDateTime d;
        try {
            d = parse_civil_date(date_s);
        } catch (const std::invalid_argument& e) {
            throw IoError("calendar CSV line " + std::to_string(lineno) + ": " + e.what());
        }
        auto flag = [&](const std::string& s) {
            if (s == "0") return false;
            if (s == "1") return true;
            throw IoError("calendar CSV line " + std::to_string(lineno) +
                          ": flag must be 0 or 1, got '" + s + "'");
        };
        const std::int64_t serial = days_from_civil(d.year, d.month, d.day);
        if (flag(protest_s)) cal.protest_days.insert(serial);
        if (flag(a_s)) cal.team_a_days.insert(serial);
        if (flag(b_s)) cal.team_b_days.insert(serial);
    }
    return cal;
}

std::string serialize_calendar_csv(const CovariateCalendar& cal) {
    std::set<std::int64_t> all;
    all.insert(cal.protest_days.begin(), cal.protest_days.end());
    all.insert(cal.team_a_days.begin(), cal.team_a_days.end());
    all.insert(cal.team_b_days.begin(), cal.team_b_days.end());
    std::ostringstream out;
    out << "date,protest,team_a,team_b\n";
    for (std::int64_t day : all) {
        const CivilDateTime c = civil_from_days(day);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
        out << buf << ',' << cal.protest_days.count(day) << ',' << cal.team_a_days.count(day)
            << ',' << cal.team_b_days.count(day) << '\n';
    }
    return out.str();
}

}  // namespace poshawk
