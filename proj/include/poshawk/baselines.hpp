#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "poshawk/background.hpp"
#include "poshawk/covariates.hpp"
#include "poshawk/events.hpp"

namespace poshawk {

/// Aggregate non-homogeneous Poisson baseline: intensity exp(γ·C(t)) fit
/// to all events (originals and retweets alike).
struct NhppModel {
    BetaVector gamma{};
    double ridge = 1e-6;
};

NhppModel fit_nhpp(const Dataset& ds, const CovariateCalendar& cal,
                   const FitOptions& opts = {});

/// Expected counts per hour over [t_start, t_end): exact per partition cell.
std::vector<double> predict_nhpp(const NhppModel& model, const CovariateCalendar& cal,
                                 double t_start, double t_end);

/// OLS of log(1 + total retweets) on origin features, after early-activity
/// extrapolation in the style of time-dependent popularity regressions.
struct RetweetRegression {
    // weights over [intercept, log1p(early retweets), log1p(followers), pos]
    std::array<double, 4> weights{};
    double early_window_s = 3600;
};

RetweetRegression fit_retweet_regression(const Dataset& ds, double early_window_s = 3600);

double predict_log_retweets(const RetweetRegression& reg, double early_count,
                            std::int64_t followers, int pos);

/// Originals from μ per hour; each expected original adds its predicted
/// retweets spread uniformly over the 24 h after its arrival hour.
std::vector<double> predict_regression_baseline(const BackgroundModel& bg,
                                                const RetweetRegression& reg,
                                                const EmpiricalDistributions& dists,
                                                const CovariateCalendar& cal, double t_start,
                                                double t_end, std::uint64_t seed);

}  // namespace poshawk
