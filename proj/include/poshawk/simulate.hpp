#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poshawk/intensity.hpp"

namespace poshawk {

std::uint64_t splitmix64(std::uint64_t x);

/// Derived stream seed for realization k of a run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Piecewise-constant dominating function for thinning: bound `values[i]`
/// holds on [edges[i], edges[i+1]).
struct PiecewiseBound {
    std::vector<double> edges;
    std::vector<double> values;
};

/// Ogata thinning for an inhomogeneous intensity under a piecewise
/// constant bound. Every candidate is spot-checked against the bound;
/// a violation beyond 1e-9 relative raises NumericError.
std::vector<double> thin_sample(const std::function<double(double)>& intensity,
                                const PiecewiseBound& bound, double t_start, double t_end,
                                std::uint64_t seed);

/// Future originals from μ(t) over [t_start, t_end], attributes drawn
/// uniformly from the model's empirical pools.
std::vector<SampledOriginal> sample_originals(const HawkesModel& model,
                                              const CovariateCalendar& cal, double t_start,
                                              double t_end, std::uint64_t seed);

/// Hourly forecast: OTP originals plus a thinning realization of the
/// excitation intensity λ̂ - μ per realization, binned per hour.
struct HourlyForecast {
    double t_start = 0;
    std::vector<double> hour_starts;
    std::vector<double> mean;                       // per hour, across realizations
    std::vector<std::vector<int>> realizations;     // [realization][hour]
};

HourlyForecast forecast(const HawkesModel& model, const Dataset& ds,
                        const CovariateCalendar& cal, double t_start, double t_end,
                        int n_realizations, std::uint64_t seed);

/// Ground-truth generator for estimator validation: originals from μ via
/// thinning, attributes from the supplied pools, retweets via Ogata
/// thinning of each cascade's own excitation term.
struct SyntheticTruth {
    BetaVector beta{};
    double r0 = 0;
    double phi0 = 0;
    double tau_m = 86400;
    KernelMode mode = KernelMode::PaperLiteral;
    std::vector<double> p0_pool;
    std::vector<std::int64_t> follower_pool;
    std::vector<int> pos_pool;
    double excitation_scale = 1.0;   // 0 disables retweet generation
    double branching_cap = 0.95;     // mean expected offspring per event
    std::size_t cascade_event_cap = 200000;
};

Dataset generate_synthetic(const SyntheticTruth& truth, const CovariateCalendar& cal,
                           double horizon_s, std::uint64_t seed);

/// Stock scenario used by the `synth` command and the recovery tests:
/// a subcritical process at roughly a dozen originals per hour.
SyntheticTruth default_synthetic_truth();

/// Randomly flagged protest/match days covering `days` days from the epoch.
CovariateCalendar default_synthetic_calendar(const CivilDateTime& epoch,
                                             const TimeZoneOffset& zone, int days,
                                             std::uint64_t seed);

/// Mean expected offspring per event under the truth/model parameters.
double expected_branching(double mean_p0, double mean_followers, KernelMode mode);

/// Non-empty when the fitted model is supercritical.
std::optional<std::string> subcriticality_warning(const HawkesModel& model);

}  // namespace poshawk
