#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "poshawk/errors.hpp"
#include "poshawk/evaluate.hpp"
#include "poshawk/simulate.hpp"

using namespace poshawk;

namespace {

PiecewiseBound constant_bound(double t_start, double t_end, double value) {
    return PiecewiseBound{{t_start, t_end}, {value}};
}

HawkesModel rate_model(double per_hour, double p0) {
    HawkesModel m;
    m.background.beta[0] = std::log(per_hour / 3600.0);
    m.influence.r0 = 0.0;
    m.influence.tau_m = 1e15;
    m.influence.window_s = 14400.0;
    m.dists.pos_samples = {3};
    m.dists.follower_samples = {1};
    m.dists.p0_samples = {p0};
    return m;
}

}  // namespace

TEST_CASE("thinning a constant intensity gives Poisson counts") {
    auto one = [](double) { return 1.0; };
    const auto single = thin_sample(one, constant_bound(0, 1000, 1.0), 0, 1000, 42);
    CHECK(static_cast<double>(single.size()) > 1000 - 3 * std::sqrt(1000.0));
    CHECK(static_cast<double>(single.size()) < 1000 + 3 * std::sqrt(1000.0));

    double total = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        total += static_cast<double>(
            thin_sample(one, constant_bound(0, 1000, 1.0), 0, 1000, seed).size());
    CHECK(std::abs(total / 200.0 - 1000.0) / 1000.0 < 0.02);
}

TEST_CASE("thinning with zero intensity returns nothing") {
    auto zero = [](double) { return 0.0; };
    CHECK(thin_sample(zero, constant_bound(0, 1000, 1.0), 0, 1000, 1).empty());
}

TEST_CASE("no-rejection inter-arrivals are exponential") {
    auto one = [](double) { return 1.0; };
    std::vector<double> gaps;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto times = thin_sample(one, constant_bound(0, 1000, 1.0), 0, 1000, seed);
        for (std::size_t i = 1; i < times.size(); ++i)
            gaps.push_back(times[i] - times[i - 1]);
    }
    const double d =
        oracles::ks_statistic(gaps, [](double x) { return 1.0 - std::exp(-x); });
    CHECK(d < oracles::ks_critical(gaps.size(), 0.01));
}

TEST_CASE("an undersized bound is detected") {
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(thin_sample(one, constant_bound(0, 1000, 0.5), 0, 1000, 3),
                    NumericError);
}

TEST_CASE("thinning is reproducible") {
    auto lam = [](double t) { return 0.5 + 0.4 * std::sin(t / 100.0); };
    const auto a = thin_sample(lam, constant_bound(0, 5000, 1.0), 0, 5000, 99);
    const auto b = thin_sample(lam, constant_bound(0, 5000, 1.0), 0, 5000, 99);
    CHECK(a == b);
}

TEST_CASE("sample_originals draws a plausible count with resampled attributes") {
    const CovariateCalendar cal = oracles::monday_calendar();
    HawkesModel m = rate_model(1.0, 0.01);  // one original per hour
    m.dists.pos_samples = {5};
    double total = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto otp = sample_originals(m, cal, 0.0, 24 * 3600.0, seed);
        total += static_cast<double>(otp.size());
        for (const auto& o : otp) {
            CHECK(o.pos == 5);  // degenerate pool
            CHECK(o.followers == 1);
            CHECK(o.p0 == 0.01);
            CHECK(o.t0 >= 0.0);
            CHECK(o.t0 < 24 * 3600.0);
        }
    }
    CHECK(std::abs(total / 50.0 - 24.0) < 3.0 * std::sqrt(24.0 / 50.0));

    const auto a = sample_originals(m, cal, 0.0, 86400.0, 7);
    const auto b = sample_originals(m, cal, 0.0, 86400.0, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].t0 == b[i].t0);

    m.dists.pos_samples.clear();
    CHECK_THROWS_AS(sample_originals(m, cal, 0.0, 86400.0, 1), NumericError);
}

TEST_CASE("zero-length forecast horizon is empty") {
    const CovariateCalendar cal = oracles::monday_calendar();
    HawkesModel m = rate_model(10.0, 0.01);
    m.t_b = 7200.0;
    const Dataset ds = build_cascades({}, 0.0, 7200.0);
    const HourlyForecast f = forecast(m, ds, cal, 7200.0, 7200.0, 5, 1);
    CHECK(f.hour_starts.empty());
    CHECK(f.mean.empty());
    CHECK_THROWS_AS(forecast(m, ds, cal, 7200.0, 10800.0, 0, 1), NumericError);
}

TEST_CASE("forecast with negligible excitation reproduces the background integral") {
    const CovariateCalendar cal = oracles::monday_calendar();
    HawkesModel m = rate_model(20.0, 1e-300);
    m.t_b = 0.0;
    const Dataset ds = build_cascades({}, -1.0, 0.0);
    const int n = 200;
    const HourlyForecast f = forecast(m, ds, cal, 0.0, 24 * 3600.0, n, 5);
    REQUIRE(f.mean.size() == 24);
    REQUIRE(f.realizations.size() == n);
    for (double h : f.mean) {
        // each hour is Poisson(20); the mean of n draws has sd sqrt(20/n)
        CHECK(std::abs(h - 20.0) < 3.0 * std::sqrt(20.0 / n) + 1e-9);
    }
    // the reported mean is the mean of the realization columns
    for (std::size_t h = 0; h < f.mean.size(); ++h) {
        double s = 0;
        for (int r = 0; r < n; ++r) s += f.realizations[r][h];
        CHECK(f.mean[h] == doctest::Approx(s / n).epsilon(1e-12));
    }
}

TEST_CASE("forecast mean tracks the intensity integral on a history-driven fixture") {
    // A single large observed cascade decays into the horizon; future
    // originals are negligible, so the expected hourly count is the exact
    // integral of the (deterministic) intensity.
    const CovariateCalendar cal = oracles::monday_calendar();
    TweetEvent big;
    big.event_id = "o";
    big.time_s = 6000.0;
    big.followers = 40000;
    big.pos = 3;
    const Dataset ds = build_cascades({big}, 0.0, 7200.0);
    HawkesModel m = rate_model(10.0, 1e-300);
    m.t_b = 7200.0;
    m.influence.p0_by_origin["o"] = 2e-4;  // ~8 expected retweets, slow decay
    const int n = 500;
    const HourlyForecast f = forecast(m, ds, cal, 7200.0, 7200.0 + 6 * 3600.0, n, 17);
    REQUIRE(f.mean.size() == 6);
    double pred_total = 0, exact_total = 0;
    for (std::size_t h = 0; h < 6; ++h) {
        const double a = 7200.0 + 3600.0 * h;
        pred_total += f.mean[h];
        const double mu_part = 10.0;
        const InfluenceParams p = m.influence_for(ds.cascades[0]);
        const double exc = influence(p, 3, 6000.0, a + 1800.0) * 40000.0 *
                           psi_integral(a - 6000.0, a + 3600.0 - 6000.0, m.mode);
        exact_total += mu_part + exc;
    }
    CHECK(std::abs(pred_total - exact_total) / exact_total < 0.02);
}

TEST_CASE("synthetic generator without excitation is a Poisson process") {
    CovariateCalendar cal = oracles::monday_calendar();
    SyntheticTruth truth;
    truth.beta = {std::log(12.0 / 3600.0), 0, 0, 0, 0, 0, 0};
    truth.excitation_scale = 0.0;
    truth.p0_pool = {0.01};
    truth.follower_pool = {1};
    truth.pos_pool = {3};
    const double horizon = 10 * 86400.0;
    std::vector<double> bins;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Dataset ds = generate_synthetic(truth, cal, horizon, seed);
        for (const auto& c : ds.cascades) CHECK(c.retweets.empty());
        std::vector<double> times;
        for (const auto& c : ds.cascades) times.push_back(c.origin.time_s);
        for (int count : bin_hourly(times, 0.0, horizon))
            bins.push_back(static_cast<double>(count));
    }
    // index-of-dispersion test: for Poisson bins, (n-1) s^2 / mean ~ chi2(n-1)
    double mean = 0;
    for (double b : bins) mean += b;
    mean /= static_cast<double>(bins.size());
    double ss = 0;
    for (double b : bins) ss += (b - mean) * (b - mean);
    const double stat = ss / mean;
    const double dof = static_cast<double>(bins.size() - 1);
    CHECK(std::abs(stat - dof) < 3.5 * std::sqrt(2.0 * dof));
}

TEST_CASE("protest coefficient shifts synthetic day rates log-linearly") {
    CovariateCalendar cal = oracles::monday_calendar();
    for (int d = 0; d < 30; d += 4) cal.protest_days.insert(oracles::epoch_day(cal, d));
    SyntheticTruth truth;
    truth.beta = {std::log(12.0 / 3600.0), 0, 0, 0, 0.35, 0, 0};
    truth.excitation_scale = 0.0;
    truth.p0_pool = {0.01};
    truth.follower_pool = {1};
    truth.pos_pool = {3};
    SyntheticTruth doubled = truth;
    doubled.beta[4] = 0.70;

    const double horizon = 30 * 86400.0;
    auto protest_mean = [&](const SyntheticTruth& t) {
        double events = 0, days = 0;
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            const Dataset ds = generate_synthetic(t, cal, horizon, seed);
            for (const auto& c : ds.cascades) {
                const std::int64_t day =
                    floor_div(static_cast<std::int64_t>(cal.local_seconds(c.origin.time_s)),
                              86400);
                if (cal.protest_days.count(day)) events += 1;
            }
            days += static_cast<double>(cal.protest_days.size());
        }
        return events / days;
    };
    const double ratio = protest_mean(doubled) / protest_mean(truth);
    CHECK(std::abs(ratio - std::exp(0.35)) / std::exp(0.35) < 0.05);
}

TEST_CASE("synthetic generation is bitwise reproducible") {
    const CovariateCalendar cal =
        default_synthetic_calendar(parse_civil_datetime("2019-01-07T00:00:00"),
                                   TimeZoneOffset::parse("UTC"), 10, 1);
    const SyntheticTruth truth = default_synthetic_truth();
    const CivilDateTime epoch = parse_civil_datetime("2019-01-07T00:00:00");
    const TimeZoneOffset utc = TimeZoneOffset::parse("UTC");
    const Dataset a = generate_synthetic(truth, cal, 10 * 86400.0, 7);
    const Dataset b = generate_synthetic(truth, cal, 10 * 86400.0, 7);
    CHECK(serialize_events_csv(flatten_events(a), epoch, utc) ==
          serialize_events_csv(flatten_events(b), epoch, utc));
    CHECK(a.total_events() > 0);
}

TEST_CASE("branching arithmetic and subcriticality warning") {
    CHECK(expected_branching(0.1, 10.0, KernelMode::PaperLiteral) ==
          doctest::Approx(0.1 * 10.0 * psi_total_mass(KernelMode::PaperLiteral))
              .epsilon(1e-12));
    HawkesModel sub = rate_model(10.0, 0.01);
    CHECK_FALSE(subcriticality_warning(sub).has_value());
    HawkesModel super = rate_model(10.0, 2.0);
    super.dists.follower_samples = {10};
    CHECK(subcriticality_warning(super).has_value());
}

TEST_CASE("seed derivation separates streams") {
    CHECK(derive_seed(1, 1) != derive_seed(1, 2));
    CHECK(derive_seed(1, 1) != derive_seed(2, 1));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
