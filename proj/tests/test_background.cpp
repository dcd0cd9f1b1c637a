#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "poshawk/background.hpp"
#include "poshawk/errors.hpp"

using namespace poshawk;

namespace {

TweetEvent original_at(const std::string& id, double t, int pos = 3) {
    TweetEvent e;
    e.event_id = id;
    e.time_s = t;
    e.followers = 10;
    e.pos = pos;
    return e;
}

/// Originals every `step` seconds over `days` days.
Dataset regular_dataset(double step, int days) {
    std::vector<TweetEvent> events;
    const double span = days * 86400.0;
    int k = 0;
    for (double t = 0.5 * step; t < span; t += step)
        events.push_back(original_at("e" + std::to_string(k++), t));
    return build_cascades(events, 0.0, span);
}

CovariateCalendar flagged_calendar() {
    CovariateCalendar cal = oracles::monday_calendar();
    cal.protest_days.insert(oracles::epoch_day(cal, 2));
    cal.team_a_days.insert(oracles::epoch_day(cal, 4));
    cal.team_b_days.insert(oracles::epoch_day(cal, 6));
    return cal;
}

}  // namespace

TEST_CASE("mu point values") {
    CovariateCalendar cal = flagged_calendar();
    BackgroundModel m;
    CHECK(mu(m, cal, 123.0) == 1.0);
    m.beta[0] = std::log(2.0);
    CHECK(mu(m, cal, 123.0) == doctest::Approx(2.0).epsilon(1e-15));

    // protest coefficient shifts protest days by exactly e^0.5
    BackgroundModel p;
    p.beta[4] = 0.5;
    const double t_protest = 2 * 86400.0 + 3600.0;
    const double t_plain = 3 * 86400.0 + 3600.0;
    CHECK(mu(p, cal, t_protest) / mu(p, cal, t_plain) ==
          doctest::Approx(std::exp(0.5)).epsilon(1e-12));

    BackgroundModel big;
    big.beta[0] = 800.0;
    CHECK_THROWS_AS(mu(big, cal, 0.0), NumericError);
}

TEST_CASE("objective gradient matches central finite differences") {
    const Dataset ds = regular_dataset(4000.0, 7);
    const CovariateCalendar cal = flagged_calendar();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        BetaVector beta{};
        beta[0] = -8.0 + u(rng);
        for (int i = 1; i < kCovariateDim; ++i) beta[i] = u(rng);
        const ObjectiveValue ov = background_objective(ds, cal, beta, 1e-6);
        auto f = [&](const std::vector<double>& x) {
            BetaVector b{};
            for (int i = 0; i < kCovariateDim; ++i) b[i] = x[i];
            return background_objective(ds, cal, b, 1e-6).value;
        };
        const std::vector<double> g_fd =
            oracles::fd_gradient(f, std::vector<double>(beta.begin(), beta.end()), 1e-5);
        for (int i = 0; i < kCovariateDim; ++i) {
            const double scale = std::max(1.0, std::abs(ov.gradient[i]));
            CHECK(std::abs(ov.gradient[i] - g_fd[i]) / scale < 1e-5);
        }
    }
}

TEST_CASE("objective is midpoint-convex along random segments") {
    const Dataset ds = regular_dataset(6000.0, 5);
    const CovariateCalendar cal = flagged_calendar();
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        BetaVector a{}, b{};
        a[0] = -9.0 + u(rng);
        b[0] = -9.0 + u(rng);
        for (int i = 1; i < kCovariateDim; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        BetaVector mid{};
        for (int i = 0; i < kCovariateDim; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        const double fa = background_objective(ds, cal, a, 0.0).value;
        const double fb = background_objective(ds, cal, b, 0.0).value;
        const double fm = background_objective(ds, cal, mid, 0.0).value;
        CHECK(fm <= 0.5 * (fa + fb) + 1e-9 * std::abs(fa + fb));
    }
}

TEST_CASE("homogeneous window recovers the Poisson MLE rate") {
    // All events inside one clock hour: C(t) is constant there, so the fit
    // can only identify beta . C = ln(n / T).
    std::vector<TweetEvent> events;
    for (int k = 0; k < 50; ++k)
        events.push_back(original_at("e" + std::to_string(k), 10.0 + 70.0 * k));
    const Dataset ds = build_cascades(events, 0.0, 3600.0);
    const CovariateCalendar cal = oracles::monday_calendar();
    FitOptions opts;
    opts.ridge = 0.0;
    const BackgroundModel m = fit_beta(ds, cal, opts);
    const CovariateVector c = covariate_vector(cal, 1800.0);
    CHECK(dot(m.beta, c) == doctest::Approx(std::log(50.0 / 3600.0)).epsilon(1e-6));
}

TEST_CASE("duplicating the data shifts the identified rate by ln 2") {
    std::vector<TweetEvent> events;
    for (int k = 0; k < 40; ++k)
        events.push_back(original_at("e" + std::to_string(k), 5.0 + 80.0 * k));
    const Dataset single = build_cascades(events, 0.0, 3600.0);
    std::vector<TweetEvent> twice = events;
    for (int k = 0; k < 40; ++k) {
        TweetEvent e = events[k];
        e.event_id = "d" + std::to_string(k);
        twice.push_back(e);
    }
    const Dataset doubled = build_cascades(twice, 0.0, 3600.0);
    const CovariateCalendar cal = oracles::monday_calendar();
    FitOptions opts;
    opts.ridge = 0.0;
    const BetaVector b1 = fit_beta(single, cal, opts).beta;
    const BetaVector b2 = fit_beta(doubled, cal, opts).beta;
    const CovariateVector c = covariate_vector(cal, 1800.0);
    CHECK(dot(b2, c) - dot(b1, c) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
}

TEST_CASE("empty dataset errors") {
    const Dataset empty;
    const CovariateCalendar cal = oracles::monday_calendar();
    CHECK_THROWS_AS(fit_beta(empty, cal, {}), NumericError);
    BetaVector beta{};
    CHECK_THROWS_AS(background_objective(empty, cal, beta), NumericError);
}

TEST_CASE("fitted beta satisfies the discretized stationarity balance") {
    const Dataset ds = regular_dataset(3000.0, 14);
    const CovariateCalendar cal = flagged_calendar();
    FitOptions opts;
    const BackgroundModel m = fit_beta(ds, cal, opts);

    // lhs: sum of covariates at event times; rhs: partition-integral of
    // C exp(beta . C) plus the ridge gradient.
    BetaVector lhs{}, rhs{};
    for (const auto& c : ds.cascades) {
        const CovariateVector cv = covariate_vector(cal, c.origin.time_s);
        for (int i = 0; i < kCovariateDim; ++i) lhs[i] += cv[i];
    }
    for (const auto& cell : m.partition.cells) {
        const CovariateVector cv = covariate_vector(cal, cell.midpoint());
        const double ew = std::exp(dot(m.beta, cv)) * cell.width();
        for (int i = 0; i < kCovariateDim; ++i) rhs[i] += cv[i] * ew;
    }
    for (int i = 0; i < kCovariateDim; ++i) rhs[i] += 2.0 * m.ridge * m.beta[i];
    for (int i = 0; i < kCovariateDim; ++i) {
        const double scale = std::max(1.0, std::abs(lhs[i]));
        CHECK(std::abs(lhs[i] - rhs[i]) / scale < 1e-6);
    }
}

TEST_CASE("expected count matches the event count at the ridge-free optimum") {
    const Dataset ds = regular_dataset(3000.0, 10);
    const CovariateCalendar cal = flagged_calendar();
    FitOptions opts;
    opts.ridge = 0.0;
    const BackgroundModel m = fit_beta(ds, cal, opts);
    double integral = 0;
    for (const auto& cell : m.partition.cells)
        integral += std::exp(dot(m.beta, covariate_vector(cal, cell.midpoint()))) *
                    cell.width();
    CHECK(integral ==
          doctest::Approx(static_cast<double>(ds.cascades.size())).epsilon(1e-6));
}

TEST_CASE("fit is deterministic") {
    const Dataset ds = regular_dataset(5000.0, 8);
    const CovariateCalendar cal = flagged_calendar();
    const BetaVector a = fit_beta(ds, cal, {}).beta;
    const BetaVector b = fit_beta(ds, cal, {}).beta;
    for (int i = 0; i < kCovariateDim; ++i) CHECK(a[i] == b[i]);
}
