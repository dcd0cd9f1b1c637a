#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poshawk/covariates.hpp"
#include "poshawk/time.hpp"

namespace poshawk {

/// One post. Originals have no parent and carry a sentiment score in
/// {1..5}; retweets reference their origin and ignore the score column.
struct TweetEvent {
    std::string event_id;
    std::optional<std::string> parent_id;
    double time_s = 0;   // seconds since the dataset epoch
    std::int64_t followers = 0;
    int pos = 0;         // 1..5, meaningful for originals only

    bool is_original() const { return !parent_id.has_value(); }
};

/// An original plus its retweets, time-sorted.
struct Cascade {
    TweetEvent origin;
    std::vector<TweetEvent> retweets;
};

struct Dataset {
    std::vector<Cascade> cascades;
    double t_a = 0;
    double t_b = 0;
    std::size_t dropped_orphans = 0;

    std::size_t total_events() const;
};

/// Attribute pools resampled when synthesizing future originals.
struct EmpiricalDistributions {
    std::vector<int> pos_samples;
    std::vector<std::int64_t> follower_samples;
    std::vector<double> p0_samples;

    double mean_followers() const;
    double mean_p0() const;
};

struct ParseResult {
    std::vector<TweetEvent> events;
    std::vector<std::string> warnings;
};

/// Events CSV with exact header `event_id,parent_id,timestamp,followers,pos`.
/// Empty parent_id marks an original. Timestamps are ISO-8601 (optionally
/// zoned) or epoch seconds; time_s is computed relative to `epoch` in `zone`.
ParseResult parse_events(const std::string& csv_text, const CivilDateTime& epoch,
                         const TimeZoneOffset& zone);

std::string serialize_events_csv(const std::vector<TweetEvent>& events,
                                 const CivilDateTime& epoch, const TimeZoneOffset& zone);

/// Groups events into cascades. Retweet chains reattach to the root
/// original; retweets whose parent is missing are dropped and counted.
/// The window defaults to [min event time, max event time].
Dataset build_cascades(const std::vector<TweetEvent>& events,
                       std::optional<double> t_a = std::nullopt,
                       std::optional<double> t_b = std::nullopt);

std::vector<TweetEvent> flatten_events(const Dataset& ds);

EmpiricalDistributions empirical_distributions(
    const Dataset& ds, const std::map<std::string, double>& p0_by_origin);

}  // namespace poshawk
