#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "poshawk/time.hpp"

namespace poshawk {

/// Fixed covariate layout: [intercept, day-of-week 0..6, am, pm, protest,
/// team A match, team B match].
constexpr int kCovariateDim = 7;
using CovariateVector = std::array<double, kCovariateDim>;

extern const std::array<const char*, kCovariateDim> kCovariateNames;

inline double dot(const CovariateVector& a, const CovariateVector& b) {
    double s = 0;
    for (int i = 0; i < kCovariateDim; ++i) s += a[i] * b[i];
    return s;
}

/// Exogenous event dates plus the temporal frame (epoch + fixed-offset
/// zone) every model time in seconds refers to. Immutable after load.
struct CovariateCalendar {
    std::set<std::int64_t> protest_days;  // day serials (days since 1970-01-01, local)
    std::set<std::int64_t> team_a_days;
    std::set<std::int64_t> team_b_days;
    TimeZoneOffset zone;
    CivilDateTime epoch;  // local civil datetime of model time 0

    /// Local civil seconds (since civil 1970) at model time t.
    double local_seconds(double t) const {
        return static_cast<double>(civil_seconds(epoch)) + t;
    }
    /// UTC seconds of model time 0.
    double epoch_utc() const {
        return static_cast<double>(civil_seconds(epoch) - zone.offset_s);
    }
};

CovariateVector covariate_vector(const CovariateCalendar& cal, double t);

struct PartitionCell {
    double t_start = 0;
    double t_end = 0;
    double midpoint() const { return 0.5 * (t_start + t_end); }
    double width() const { return t_end - t_start; }
};

/// Cells aligned to local clock hours, tiling [t_a, t_b] exactly. C(t) is
/// constant inside every cell (encoders change only at midnight/noon/date
/// flips, all of which are hour boundaries).
struct Partition {
    std::vector<PartitionCell> cells;
    double t_a = 0;
    double t_b = 0;
};

Partition hourly_partition(const CovariateCalendar& cal, double t_a, double t_b);

/// Calendar CSV with exact header `date,protest,team_a,team_b`.
/// Flags are 0/1; dates are YYYY-MM-DD in the calendar's zone.
CovariateCalendar parse_calendar_csv(const std::string& csv_text,
                                     const CivilDateTime& epoch,
                                     const TimeZoneOffset& zone);

std::string serialize_calendar_csv(const CovariateCalendar& cal);

}  // namespace poshawk
