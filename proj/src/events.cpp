#include "poshawk/events.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "poshawk/errors.hpp"

namespace poshawk {

std::size_t Dataset::total_events() const {
    std::size_t n = 0;
    for (const auto& c : cascades) n += 1 + c.retweets.size();
    return n;
}

double EmpiricalDistributions::mean_followers() const {
    if (follower_samples.empty()) throw NumericError("empty follower sample pool");
    double s = 0;
    for (auto d : follower_samples) s += static_cast<double>(d);
    return s / static_cast<double>(follower_samples.size());
}

double EmpiricalDistributions::mean_p0() const {
    if (p0_samples.empty()) throw NumericError("empty p0 sample pool");
    return std::accumulate(p0_samples.begin(), p0_samples.end(), 0.0) /
           static_cast<double>(p0_samples.size());
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ParseResult parse_events(const std::string& csv_text, const CivilDateTime& epoch,
                         const TimeZoneOffset& zone) {
    ParseResult result;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("events CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "event_id,parent_id,timestamp,followers,pos") {
        throw IoError(
            "events CSV header must be 'event_id,parent_id,timestamp,followers,pos', got '" +
            line + "'");
    }
    const double epoch_utc = static_cast<double>(civil_seconds(epoch) - zone.offset_s);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cols = split_csv_row(line);
        const std::string where = "events CSV line " + std::to_string(lineno);
        if (cols.size() != 5) throw IoError(where + ": expected 5 columns, got " +
                                            std::to_string(cols.size()));
        TweetEvent ev;
        ev.event_id = cols[0];
        if (ev.event_id.empty()) throw IoError(where + ": empty event_id");
        if (!cols[1].empty()) ev.parent_id = cols[1];
        double ts_utc;
        try {
            ts_utc = parse_timestamp_utc(cols[2], zone);
        } catch (const std::invalid_argument& e) {
            throw IoError(where + ": " + e.what());
        }
        ev.time_s = ts_utc - epoch_utc;
        if (ev.time_s < 0) throw IoError(where + ": timestamp precedes the epoch");
        char* end = nullptr;
        const long long followers = std::strtoll(cols[3].c_str(), &end, 10);
        if (cols[3].empty() || *end != '\0')
            throw IoError(where + ": malformed followers '" + cols[3] + "'");
        if (followers < 0) throw IoError(where + ": negative followers");
        ev.followers = followers;
        if (ev.is_original()) {
            const long long pos = std::strtoll(cols[4].c_str(), &end, 10);
            if (cols[4].empty() || *end != '\0' || pos < 1 || pos > 5)
                throw IoError(where + ": original requires pos in {1..5}, got '" + cols[4] +
                              "'");
            ev.pos = static_cast<int>(pos);
        } else if (!cols[4].empty()) {
            result.warnings.push_back(where + ": pos on retweet '" + ev.event_id +
                                      "' ignored");
        }
        result.events.push_back(std::move(ev));
    }
    return result;
}

std::string serialize_events_csv(const std::vector<TweetEvent>& events,
                                 const CivilDateTime& epoch, const TimeZoneOffset& zone) {
    const double epoch_utc = static_cast<double>(civil_seconds(epoch) - zone.offset_s);
    std::ostringstream out;
    out << "event_id,parent_id,timestamp,followers,pos\n";
    char buf[64];
    for (const auto& ev : events) {
        std::snprintf(buf, sizeof(buf), "%.17g", epoch_utc + ev.time_s);
        out << ev.event_id << ',' << (ev.parent_id ? *ev.parent_id : "") << ',' << buf << ','
            << ev.followers << ',';
        if (ev.is_original()) out << ev.pos;
        out << '\n';
    }
    return out.str();
}

Dataset build_cascades(const std::vector<TweetEvent>& events, std::optional<double> t_a,
                       std::optional<double> t_b) {
    std::unordered_map<std::string, std::size_t> by_id;
    by_id.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (!by_id.emplace(events[i].event_id, i).second)
            throw IoError("duplicate event_id '" + events[i].event_id + "'");
    }
    // Resolve each retweet to its root original, following chains.
    Dataset ds;
    std::unordered_map<std::string, std::size_t> cascade_of;  // origin id -> cascade index
    for (const auto& ev : events) {
        if (!ev.is_original()) continue;
        cascade_of.emplace(ev.event_id, ds.cascades.size());
        ds.cascades.push_back(Cascade{ev, {}});
    }
    for (const auto& ev : events) {
        if (ev.is_original()) continue;
        std::string cur = *ev.parent_id;
        std::size_t hops = 0;
        bool orphan = false;
        while (true) {
            auto it = by_id.find(cur);
            if (it == by_id.end()) {
                orphan = true;
                break;
            }
            const TweetEvent& parent = events[it->second];
            if (parent.is_original()) break;
            cur = *parent.parent_id;
            if (++hops > events.size())
                throw IoError("retweet parent cycle involving '" + ev.event_id + "'");
        }
        if (orphan) {
            ++ds.dropped_orphans;
            continue;
        }
        Cascade& c = ds.cascades[cascade_of.at(cur)];
        if (ev.time_s < c.origin.time_s)
            throw IoError("retweet '" + ev.event_id + "' precedes its origin");
        c.retweets.push_back(ev);
    }
    for (auto& c : ds.cascades) {
        std::stable_sort(c.retweets.begin(), c.retweets.end(),
                         [](const TweetEvent& a, const TweetEvent& b) {
                             return a.time_s < b.time_s;
                         });
    }
    double lo = 0, hi = 0;
    bool any = false;
    for (const auto& c : ds.cascades) {
        auto upd = [&](double t) {
            if (!any) {
                lo = hi = t;
                any = true;
            } else {
                lo = std::min(lo, t);
                hi = std::max(hi, t);
            }
        };
        upd(c.origin.time_s);
        for (const auto& r : c.retweets) upd(r.time_s);
    }
    ds.t_a = t_a.value_or(lo);
    ds.t_b = t_b.value_or(hi);
    if (ds.t_b <= ds.t_a) ds.t_b = ds.t_a + 1.0;
    return ds;
}

std::vector<TweetEvent> flatten_events(const Dataset& ds) {
    std::vector<TweetEvent> out;
    out.reserve(ds.total_events());
    for (const auto& c : ds.cascades) {
        out.push_back(c.origin);
        out.insert(out.end(), c.retweets.begin(), c.retweets.end());
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TweetEvent& a, const TweetEvent& b) { return a.time_s < b.time_s; });
    return out;
}

EmpiricalDistributions empirical_distributions(
    const Dataset& ds, const std::map<std::string, double>& p0_by_origin) {
    EmpiricalDistributions d;
    for (const auto& c : ds.cascades) {
        d.pos_samples.push_back(c.origin.pos);
        d.follower_samples.push_back(c.origin.followers);
    }
    for (const auto& [id, p0] : p0_by_origin) {
        if (!(p0 > 0)) throw NumericError("p0 for origin '" + id + "' must be positive");
        d.p0_samples.push_back(p0);
    }
    return d;
}

}  // namespace poshawk
