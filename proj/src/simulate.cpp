#include "poshawk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "poshawk/errors.hpp"

namespace poshawk {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x5851f42d4c957f2dULL));
}

namespace {

double sample_exponential(std::mt19937_64& rng, double rate) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    return -std::log1p(-u01(rng)) / rate;
}

}  // namespace

std::vector<double> thin_sample(const std::function<double(double)>& intensity,
                                const PiecewiseBound& bound, double t_start, double t_end,
                                std::uint64_t seed) {
    if (bound.edges.size() != bound.values.size() + 1)
        throw NumericError("thin_sample: bound edges/values size mismatch");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> out;
    for (std::size_t i = 0; i < bound.values.size(); ++i) {
        const double lo = std::max(bound.edges[i], t_start);
        const double hi = std::min(bound.edges[i + 1], t_end);
        if (hi <= lo) continue;
        const double cap = bound.values[i];
        if (!(cap > 0)) continue;
        double t = lo;
        while (true) {
            t += sample_exponential(rng, cap);
            if (t >= hi) break;
            const double lam = intensity(t);
            if (lam > cap * (1.0 + 1e-9)) {
                std::ostringstream msg;
                msg << "thin_sample: intensity " << lam << " exceeds bound " << cap
                    << " at t = " << t;
                throw NumericError(msg.str());
            }
            if (u01(rng) * cap < lam) out.push_back(t);
        }
    }
    return out;
}

std::vector<SampledOriginal> sample_originals(const HawkesModel& model,
                                              const CovariateCalendar& cal, double t_start,
                                              double t_end, std::uint64_t seed) {
    if (model.dists.pos_samples.empty() || model.dists.follower_samples.empty() ||
        model.dists.p0_samples.empty())
        throw NumericError("sample_originals: empty empirical attribute pool");
    if (t_end <= t_start) return {};

    const Partition part = hourly_partition(cal, t_start, t_end);
    PiecewiseBound bound;
    bound.edges.push_back(part.cells.front().t_start);
    for (const auto& cell : part.cells) {
        bound.edges.push_back(cell.t_end);
        bound.values.push_back(mu(model.background, cal, cell.midpoint()));
    }
    const std::uint64_t time_seed = derive_seed(seed, 0);
    const std::vector<double> times = thin_sample(
        [&](double t) { return mu(model.background, cal, t); }, bound, t_start, t_end,
        time_seed);

    std::mt19937_64 rng(derive_seed(seed, 1));
    std::uniform_int_distribution<std::size_t> pos_idx(0, model.dists.pos_samples.size() - 1);
    std::uniform_int_distribution<std::size_t> fol_idx(0,
                                                       model.dists.follower_samples.size() - 1);
    std::uniform_int_distribution<std::size_t> p0_idx(0, model.dists.p0_samples.size() - 1);
    std::vector<SampledOriginal> out;
    out.reserve(times.size());
    for (double t : times) {
        SampledOriginal o;
        o.t0 = t;
        o.pos = model.dists.pos_samples[pos_idx(rng)];
        o.followers = model.dists.follower_samples[fol_idx(rng)];
        o.p0 = model.dists.p0_samples[p0_idx(rng)];
        out.push_back(o);
    }
    return out;
}

namespace {

struct HistCascade {
    InfluenceParams params;
    int pos = 3;
    double t0 = 0;
    std::vector<std::pair<double, double>> events;  // (time, followers)

    double kernel_sum(double t, KernelMode mode) const {
        double s = 0;
        for (const auto& [tj, dj] : events) {
            if (tj >= t) break;
            s += dj * psi(t - tj, mode);
        }
        return s;
    }
};

/// Observed history reduced to the cascades that still matter past the
/// training window. Contributions below ~1e-9 of the background scale at
/// the horizon start are dropped from both the intensity and its bound.
std::vector<HistCascade> build_history(const HawkesModel& model, const Dataset& ds,
                                       double horizon_start, double mu_scale) {
    std::vector<HistCascade> kept;
    const double eps = 1e-9 * std::max(mu_scale, 1e-300);
    for (const auto& c : ds.cascades) {
        HistCascade h;
        h.params = model.influence_for(c);
        h.pos = c.origin.pos;
        h.t0 = c.origin.time_s;
        if (h.t0 > horizon_start) continue;
        h.events.emplace_back(c.origin.time_s, static_cast<double>(c.origin.followers));
        for (const auto& r : c.retweets)
            h.events.emplace_back(r.time_s, static_cast<double>(r.followers));
        const double contribution =
            influence_envelope(h.params, h.pos, h.t0, horizon_start) *
            h.kernel_sum(horizon_start + 1e-9, model.mode);
        if (contribution >= eps) kept.push_back(std::move(h));
    }
    return kept;
}

struct OtpTerm {
    InfluenceParams params;
    int pos = 3;
    double t0 = 0;
    double lower = 0;  // integral anchor
};

double excitation_at(const std::vector<HistCascade>& hist, const std::vector<OtpTerm>& otp,
                     double mean_d, KernelMode mode, double t) {
    double total = 0;
    for (const auto& h : hist) {
        const double ks = h.kernel_sum(t, mode);
        if (ks > 0) total += influence(h.params, h.pos, h.t0, t) * ks;
    }
    for (const auto& o : otp) {
        if (o.t0 > t || t <= o.lower) continue;
        total += influence(o.params, o.pos, o.t0, t) * mean_d *
                 psi_integral(0.0, t - o.lower, mode);
    }
    return total;
}

}  // namespace

HourlyForecast forecast(const HawkesModel& model, const Dataset& ds,
                        const CovariateCalendar& cal, double t_start, double t_end,
                        int n_realizations, std::uint64_t seed) {
    if (n_realizations < 1) throw NumericError("forecast: n_realizations must be >= 1");
    if (t_end < t_start) throw NumericError("forecast: horizon end precedes start");
    HourlyForecast out;
    out.t_start = t_start;
    if (t_end == t_start) return out;

    for (double h = t_start; h < t_end - 1e-9; h += 3600.0) out.hour_starts.push_back(h);
    const std::size_t n_hours = out.hour_starts.size();

    // Background scale for the pruning threshold.
    const Partition part = hourly_partition(cal, t_start, t_end);
    double mu_total = 0;
    for (const auto& cell : part.cells)
        mu_total += mu(model.background, cal, cell.midpoint()) * cell.width();
    const double mu_rate = mu_total / (t_end - t_start);

    const std::vector<HistCascade> hist = build_history(model, ds, t_start, mu_rate);
    const double mean_d = model.dists.mean_followers();

    out.mean.assign(n_hours, 0.0);
    for (int r = 0; r < n_realizations; ++r) {
        const std::uint64_t seed_r = derive_seed(seed, static_cast<std::uint64_t>(r) + 1);
        const std::vector<SampledOriginal> sampled =
            sample_originals(model, cal, t_start, t_end, derive_seed(seed_r, 11));

        std::vector<OtpTerm> otp;
        otp.reserve(sampled.size());
        for (const auto& o : sampled) {
            OtpTerm term;
            term.params.p0 = o.p0;
            term.params.r0 = model.influence.r0;
            term.params.phi0 = model.influence.phi0;
            term.params.tau_m = model.influence.tau_m;
            term.pos = o.pos;
            term.t0 = o.t0;
            term.lower = model.future_integral == FutureIntegral::Causal
                             ? std::max(t_start, o.t0)
                             : t_start;
            otp.push_back(term);
        }

        // Hourly dominating bound for the excitation part: history kernels
        // and envelopes are non-increasing; OTP terms are bounded by their
        // envelope at the hour start and the kernel integral at the hour end.
        PiecewiseBound bound;
        bound.edges.push_back(t_start);
        for (std::size_t h = 0; h < n_hours; ++h) {
            const double h0 = out.hour_starts[h];
            const double h1 = std::min(h0 + 3600.0, t_end);
            bound.edges.push_back(h1);
            double cap = 0;
            for (const auto& hc : hist)
                cap += influence_envelope(hc.params, hc.pos, hc.t0, h0) *
                       hc.kernel_sum(h0 + 1e-9, model.mode);
            for (const auto& o : otp) {
                if (o.t0 >= h1 || h1 <= o.lower) continue;
                cap += influence_envelope(o.params, o.pos, o.t0, std::max(h0, o.t0)) *
                       mean_d * psi_integral(0.0, h1 - o.lower, model.mode);
            }
            bound.values.push_back(cap);
        }

        const std::vector<double> excited = thin_sample(
            [&](double t) { return excitation_at(hist, otp, mean_d, model.mode, t); }, bound,
            t_start, t_end, derive_seed(seed_r, 12));

        std::vector<int> counts(n_hours, 0);
        auto add = [&](double t) {
            const std::size_t h = static_cast<std::size_t>((t - t_start) / 3600.0);
            if (h < n_hours) ++counts[h];
        };
        for (const auto& o : sampled) add(o.t0);
        for (double t : excited) add(t);
        for (std::size_t h = 0; h < n_hours; ++h) out.mean[h] += counts[h];
        out.realizations.push_back(std::move(counts));
    }
    for (auto& m : out.mean) m /= n_realizations;
    return out;
}

SyntheticTruth default_synthetic_truth() {
    SyntheticTruth t;
    t.beta = {-5.7, 0.04, -0.25, 0.15, 0.7, 0.35, -0.3};
    t.r0 = 0.12;
    t.phi0 = 21600;
    t.tau_m = 172800;
    // Heavy-tailed reach: almost every account has negligible audience and
    // 1 in 500 is a high-follower account, so cascades effectively spread
    // only from those.
    t.p0_pool = {1e-6, 2e-6, 3e-6};
    for (int i = 0; i < 499; ++i) t.follower_pool.push_back(i % 9 == 0 ? 1 : 0);
    t.follower_pool.push_back(1000000);
    t.pos_pool = {1, 2, 2, 3, 3, 3, 4, 4, 5};
    return t;
}

CovariateCalendar default_synthetic_calendar(const CivilDateTime& epoch,
                                             const TimeZoneOffset& zone, int days,
                                             std::uint64_t seed) {
    CovariateCalendar cal;
    cal.epoch = epoch;
    cal.zone = zone;
    const std::int64_t day0 = floor_div(civil_seconds(epoch), 86400);
    std::mt19937_64 rng(derive_seed(seed, 31));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int d = 0; d < days; ++d) {
        if (u01(rng) < 0.12) cal.protest_days.insert(day0 + d);
        if (u01(rng) < 0.10) cal.team_a_days.insert(day0 + d);
        if (u01(rng) < 0.10) cal.team_b_days.insert(day0 + d);
    }
    return cal;
}

double expected_branching(double mean_p0, double mean_followers, KernelMode mode) {
    return mean_p0 * mean_followers * psi_total_mass(mode);
}

std::optional<std::string> subcriticality_warning(const HawkesModel& model) {
    double mean_p0 = 0;
    if (!model.influence.p0_by_origin.empty()) {
        for (const auto& [id, p0] : model.influence.p0_by_origin) mean_p0 += p0;
        mean_p0 /= static_cast<double>(model.influence.p0_by_origin.size());
    } else if (!model.dists.p0_samples.empty()) {
        mean_p0 = model.dists.mean_p0();
    } else {
        return std::nullopt;
    }
    const double b = expected_branching(mean_p0, model.dists.mean_followers(), model.mode);
    if (b < 1.0) return std::nullopt;
    std::ostringstream msg;
    msg << "supercritical excitation: expected offspring per event = " << b;
    return msg.str();
}

Dataset generate_synthetic(const SyntheticTruth& truth, const CovariateCalendar& cal,
                           double horizon_s, std::uint64_t seed) {
    if (truth.p0_pool.empty() || truth.follower_pool.empty() || truth.pos_pool.empty())
        throw NumericError("generate_synthetic: attribute pools must be non-empty");

    const double mean_p0 =
        truth.excitation_scale *
        std::accumulate(truth.p0_pool.begin(), truth.p0_pool.end(), 0.0) /
        static_cast<double>(truth.p0_pool.size());
    double mean_d = 0;
    for (auto d : truth.follower_pool) mean_d += static_cast<double>(d);
    mean_d /= static_cast<double>(truth.follower_pool.size());
    if (truth.excitation_scale > 0) {
        const double b = expected_branching(mean_p0, mean_d, truth.mode);
        if (b > truth.branching_cap) {
            std::ostringstream msg;
            msg << "generate_synthetic: expected branching " << b << " exceeds cap "
                << truth.branching_cap << "; use a smaller p0 scale";
            throw NumericError(msg.str());
        }
    }

    BackgroundModel bg;
    bg.beta = truth.beta;
    HawkesModel shell;
    shell.background = bg;

    const Partition part = hourly_partition(cal, 0.0, horizon_s);
    PiecewiseBound bound;
    bound.edges.push_back(part.cells.front().t_start);
    for (const auto& cell : part.cells) {
        bound.edges.push_back(cell.t_end);
        bound.values.push_back(mu(bg, cal, cell.midpoint()));
    }
    const std::vector<double> origin_times =
        thin_sample([&](double t) { return mu(bg, cal, t); }, bound, 0.0, horizon_s,
                    derive_seed(seed, 0));

    std::mt19937_64 attr_rng(derive_seed(seed, 1));
    std::uniform_int_distribution<std::size_t> pos_idx(0, truth.pos_pool.size() - 1);
    std::uniform_int_distribution<std::size_t> fol_idx(0, truth.follower_pool.size() - 1);
    std::uniform_int_distribution<std::size_t> p0_idx(0, truth.p0_pool.size() - 1);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<TweetEvent> events;
    for (std::size_t k = 0; k < origin_times.size(); ++k) {
        TweetEvent origin;
        origin.event_id = "o" + std::to_string(k + 1);
        origin.time_s = origin_times[k];
        origin.pos = truth.pos_pool[pos_idx(attr_rng)];
        origin.followers = truth.follower_pool[fol_idx(attr_rng)];
        const double p0 = truth.excitation_scale * truth.p0_pool[p0_idx(attr_rng)];
        events.push_back(origin);
        if (truth.excitation_scale <= 0 || p0 <= 0) continue;

        InfluenceParams params;
        params.p0 = p0;
        params.r0 = truth.r0;
        params.phi0 = truth.phi0;
        params.tau_m = truth.tau_m;

        std::mt19937_64 rng(derive_seed(seed, 100 + k));
        std::vector<std::pair<double, double>> members;  // (time, followers)
        members.emplace_back(origin.time_s, static_cast<double>(origin.followers));
        double t = origin.time_s;
        std::size_t n_rt = 0;
        while (t < horizon_s) {
            double ksum = 0;
            for (const auto& [tj, dj] : members) ksum += dj * psi(t - tj, truth.mode);
            const double cap =
                influence_envelope(params, origin.pos, origin.time_s, t) * ksum;
            if (cap <= 1e-15) break;
            t += sample_exponential(rng, cap);
            if (t >= horizon_s) break;
            double ksum_t = 0;
            for (const auto& [tj, dj] : members) ksum_t += dj * psi(t - tj, truth.mode);
            const double lam = influence(params, origin.pos, origin.time_s, t) * ksum_t;
            if (lam > cap * (1.0 + 1e-9))
                throw NumericError("generate_synthetic: envelope violated");
            if (u01(rng) * cap < lam) {
                TweetEvent rt;
                ++n_rt;
                rt.event_id = origin.event_id + "_r" + std::to_string(n_rt);
                rt.parent_id = origin.event_id;
                rt.time_s = t;
                rt.followers = truth.follower_pool[fol_idx(attr_rng)];
                members.emplace_back(t, static_cast<double>(rt.followers));
                events.push_back(rt);
                if (n_rt > truth.cascade_event_cap)
                    throw NumericError(
                        "generate_synthetic: runaway cascade; use a smaller p0 scale");
            }
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const TweetEvent& a, const TweetEvent& b) { return a.time_s < b.time_s; });
    return build_cascades(events, 0.0, horizon_s);
}

}  // namespace poshawk
