#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "poshawk/errors.hpp"
#include "poshawk/influence_fit.hpp"

using namespace poshawk;

namespace {

TweetEvent original_at(const std::string& id, double t, std::int64_t followers, int pos) {
    TweetEvent e;
    e.event_id = id;
    e.time_s = t;
    e.followers = followers;
    e.pos = pos;
    return e;
}

TweetEvent retweet_at(const std::string& id, const std::string& parent, double t,
                      std::int64_t followers) {
    TweetEvent e;
    e.event_id = id;
    e.parent_id = parent;
    e.time_s = t;
    e.followers = followers;
    return e;
}

double shape(int pos, double origin_time, double r0, double phi0, double tau_m,
             double t) {
    const double bracket =
        1.0 - pos * r0 * std::sin(2.0 * M_PI * (t + phi0) / InfluenceParams::kPeriod);
    return std::max(bracket, 0.0) * std::exp(-(t - origin_time) / tau_m);
}

/// Noise-free discretized influence series evaluated at window midpoints.
PhatSeries exact_series(const std::string& id, int pos, double origin_time, double p0,
                        double r0, double phi0, double tau_m, double window_s,
                        int n_windows) {
    PhatSeries s;
    s.origin_id = id;
    s.pos = pos;
    s.origin_time = origin_time;
    for (int k = 0; k < n_windows; ++k) {
        PhatWindow w;
        w.t_start = origin_time + k * window_s;
        w.t_end = w.t_start + window_s;
        w.t_mid = 0.5 * (w.t_start + w.t_end);
        w.retweets = 1;
        w.phat = p0 * shape(pos, origin_time, r0, phi0, tau_m, w.t_mid);
        s.windows.push_back(w);
    }
    return s;
}

}  // namespace

TEST_CASE("estimate_phat single-contributor window") {
    Cascade c;
    c.origin = original_at("o", 0.0, 1, 3);
    c.retweets = {retweet_at("r1", "o", 100.0, 0), retweet_at("r2", "o", 500.0, 0)};
    const PhatSeries s = estimate_phat(c, 600.0, 1e9, KernelMode::PaperLiteral);
    REQUIRE(s.windows.size() == 1);
    REQUIRE(s.windows[0].phat.has_value());
    CHECK(s.windows[0].retweets == 2);
    const double denom = psi_integral(0, 600, KernelMode::PaperLiteral);
    CHECK(*s.windows[0].phat == doctest::Approx(2.0 / denom).epsilon(1e-12));
    CHECK(*s.windows[0].phat == doctest::Approx(10.27).epsilon(1e-3));
}

TEST_CASE("estimate_phat marks empty windows absent") {
    Cascade c;
    c.origin = original_at("o", 0.0, 1, 3);
    c.retweets = {retweet_at("r1", "o", 700.0, 0)};
    const PhatSeries s = estimate_phat(c, 600.0, 1e9, KernelMode::PaperLiteral);
    REQUIRE(s.windows.size() == 2);
    CHECK_FALSE(s.windows[0].phat.has_value());
    CHECK(s.windows[0].retweets == 0);
    CHECK(s.windows[1].phat.has_value());
}

TEST_CASE("estimate_phat is inverse-linear in follower counts") {
    Cascade c;
    c.origin = original_at("o", 0.0, 40, 3);
    c.retweets = {retweet_at("r1", "o", 1000.0, 10), retweet_at("r2", "o", 9000.0, 30),
                  retweet_at("r3", "o", 20000.0, 5)};
    Cascade doubled = c;
    doubled.origin.followers *= 2;
    for (auto& r : doubled.retweets) r.followers *= 2;
    const PhatSeries a = estimate_phat(c, 14400.0, 1e9, KernelMode::PaperLiteral);
    const PhatSeries b = estimate_phat(doubled, 14400.0, 1e9, KernelMode::PaperLiteral);
    REQUIRE(a.windows.size() == b.windows.size());
    for (std::size_t i = 0; i < a.windows.size(); ++i) {
        if (!a.windows[i].phat) continue;
        CHECK(*b.windows[i].phat == doctest::Approx(0.5 * *a.windows[i].phat).epsilon(1e-12));
    }
}

TEST_CASE("window-only contributors give a smaller denominator") {
    Cascade c;
    c.origin = original_at("o", 0.0, 40, 3);
    c.retweets = {retweet_at("r1", "o", 1000.0, 10), retweet_at("r2", "o", 20000.0, 5)};
    const PhatSeries hist =
        estimate_phat(c, 14400.0, 1e9, KernelMode::PaperLiteral, PhatContributors::History);
    const PhatSeries win =
        estimate_phat(c, 14400.0, 1e9, KernelMode::PaperLiteral, PhatContributors::Window);
    // second window: history still counts the origin and r1, window mode does not
    REQUIRE(hist.windows.size() == 2);
    REQUIRE(win.windows.size() == 2);
    REQUIRE(hist.windows[1].phat.has_value());
    REQUIRE(win.windows[1].phat.has_value());
    CHECK(*win.windows[1].phat > *hist.windows[1].phat);
}

TEST_CASE("estimate_phat argument validation") {
    Cascade c;
    c.origin = original_at("o", 0.0, 1, 3);
    CHECK_THROWS_AS(estimate_phat(c, 600.0, 1e9, KernelMode::PaperLiteral), NumericError);
    c.retweets = {retweet_at("r1", "o", 10.0, 1)};
    CHECK_THROWS_AS(estimate_phat(c, 0.0, 1e9, KernelMode::PaperLiteral), NumericError);
    CHECK_THROWS_AS(estimate_phat(c, -5.0, 1e9, KernelMode::PaperLiteral), NumericError);
}

TEST_CASE("single cascade with a single window fits exactly") {
    std::vector<PhatSeries> series{
        exact_series("o", 3, 0.0, 0.42, 0.1, 20000.0, 90000.0, 14400.0, 1)};
    InfluenceFitOptions opts;
    const InfluenceFit fit = fit_influence_phat(series, opts);
    CHECK(fit.loss < 1e-9);
    CHECK(fit.p0_by_origin.at("o") > 0);
}

TEST_CASE("loss recomputes independently") {
    std::vector<PhatSeries> series;
    for (int i = 0; i < 4; ++i)
        series.push_back(exact_series("o" + std::to_string(i), 1 + i, i * 3600.0,
                                      0.1 * (i + 1), 0.08, 10000.0, 120000.0, 14400.0, 12));
    std::map<std::string, double> p0{{"o0", 0.11}, {"o1", 0.19}, {"o2", 0.33}, {"o3", 0.41}};
    const double reported = influence_loss(series, p0, 0.05, 5000.0, 100000.0);
    double manual = 0;
    for (const auto& s : series) {
        for (const auto& w : s.windows) {
            if (!w.phat) continue;
            manual += std::abs(*w.phat - p0.at(s.origin_id) *
                                             shape(s.pos, s.origin_time, 0.05, 5000.0,
                                                   100000.0, w.t_mid));
        }
    }
    CHECK(std::abs(reported - manual) < 1e-12);
}

TEST_CASE("inner p0 step is optimal against 1% perturbations") {
    std::vector<PhatSeries> series;
    for (int i = 0; i < 5; ++i)
        series.push_back(exact_series("o" + std::to_string(i), 1 + i % 5, i * 7200.0,
                                      0.05 * (i + 1), 0.1, 21600.0, 90000.0, 14400.0, 15));
    InfluenceFitOptions opts;
    const InfluenceFit fit = fit_influence_phat(series, opts);
    const double base =
        influence_loss(series, fit.p0_by_origin, fit.r0, fit.phi0, fit.tau_m);
    for (const auto& [id, p0] : fit.p0_by_origin) {
        for (double f : {0.99, 1.01}) {
            auto perturbed = fit.p0_by_origin;
            perturbed[id] = p0 * f;
            CHECK(influence_loss(series, perturbed, fit.r0, fit.phi0, fit.tau_m) >=
                  base - 1e-12);
        }
    }
}

TEST_CASE("shared parameters recover from noise-free series") {
    const double r0 = 0.12, phi0 = 21600.0, tau = 100000.0;
    std::vector<PhatSeries> series;
    std::vector<double> p0_true;
    for (int i = 0; i < 10; ++i) {
        const double p0 = 0.05 + 0.04 * i;
        p0_true.push_back(p0);
        series.push_back(exact_series("o" + std::to_string(i), 1 + i % 5, i * 5000.0, p0,
                                      r0, phi0, tau, 14400.0, 30));
    }
    InfluenceFitOptions opts;
    const InfluenceFit fit = fit_influence_phat(series, opts);
    CHECK(std::abs(fit.r0 - r0) / r0 < 0.05);
    CHECK(std::abs(fit.phi0 - phi0) / phi0 < 0.05);
    CHECK(std::abs(fit.tau_m - tau) / tau < 0.05);
    for (int i = 0; i < 10; ++i) {
        const double got = fit.p0_by_origin.at("o" + std::to_string(i));
        CHECK(std::abs(got - p0_true[i]) / p0_true[i] < 0.10);
    }
    CHECK(fit.r0 >= 0);  // canonical sign
}

TEST_CASE("degenerate amplitude recovers r0 near zero") {
    const double tau = 150000.0;
    std::vector<PhatSeries> series;
    for (int i = 0; i < 8; ++i)
        series.push_back(exact_series("o" + std::to_string(i), 1 + i % 5, i * 4000.0,
                                      0.1 + 0.05 * i, 0.0, 0.0, tau, 14400.0, 25));
    InfluenceFitOptions opts;
    const InfluenceFit fit = fit_influence_phat(series, opts);
    CHECK(std::abs(fit.r0) <= 0.02);
    CHECK(std::abs(fit.tau_m - tau) / tau < 0.05);
}

TEST_CASE("fit_influence end-to-end over cascades") {
    std::vector<TweetEvent> events;
    for (int i = 0; i < 3; ++i) {
        const std::string id = "o" + std::to_string(i);
        events.push_back(original_at(id, i * 2000.0, 100, 2 + i));
        for (int k = 0; k < 5; ++k)
            events.push_back(
                retweet_at(id + "r" + std::to_string(k), id, i * 2000.0 + 50.0 + 40.0 * k, 0));
    }
    events.push_back(original_at("lonely", 9000.0, 10, 1));
    const Dataset ds = build_cascades(events, 0.0, 86400.0);
    InfluenceFitOptions opts;
    const InfluenceFit fit = fit_influence(ds, opts);
    // every original gets a p0, including the retweet-free one
    CHECK(fit.p0_by_origin.size() == 4);
    CHECK(fit.p0_by_origin.at("lonely") > 0);
    CHECK(fit.p0_by_origin.at("lonely") < 1e-9);
    for (const auto& [id, p0] : fit.p0_by_origin) CHECK(p0 > 0);
}

TEST_CASE("fit_influence with no retweets anywhere errors") {
    const Dataset ds = build_cascades({original_at("a", 0.0, 1, 3)});
    CHECK_THROWS_AS(fit_influence(ds, {}), NumericError);
}
