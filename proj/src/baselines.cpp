#include "poshawk/baselines.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "poshawk/errors.hpp"
#include "poshawk/simulate.hpp"

namespace poshawk {

NhppModel fit_nhpp(const Dataset& ds, const CovariateCalendar& cal, const FitOptions& opts) {
    if (ds.cascades.empty()) throw NumericError("fit_nhpp: empty dataset");
    std::vector<double> times;
    for (const auto& c : ds.cascades) {
        times.push_back(c.origin.time_s);
        for (const auto& r : c.retweets) times.push_back(r.time_s);
    }
    const Partition part = hourly_partition(cal, ds.t_a, ds.t_b);
    NhppModel model;
    model.ridge = opts.ridge;
    model.gamma = BackgroundProblem::build(times, cal, part).minimize(opts);
    return model;
}

std::vector<double> predict_nhpp(const NhppModel& model, const CovariateCalendar& cal,
                                 double t_start, double t_end) {
    if (t_end <= t_start) return {};
    std::vector<double> hourly;
    for (double h = t_start; h < t_end - 1e-9; h += 3600.0) {
        const double h1 = std::min(h + 3600.0, t_end);
        const Partition part = hourly_partition(cal, h, h1);
        double total = 0;
        for (const auto& cell : part.cells) {
            total += std::exp(dot(model.gamma, covariate_vector(cal, cell.midpoint()))) *
                     cell.width();
        }
        hourly.push_back(total);
    }
    return hourly;
}

RetweetRegression fit_retweet_regression(const Dataset& ds, double early_window_s) {
    if (!(early_window_s > 0))
        throw NumericError("fit_retweet_regression: early window must be positive");
    if (ds.cascades.size() < 2)
        throw NumericError("fit_retweet_regression: need at least 2 cascades");
    const int dim = 4;
    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(dim);
    for (const auto& c : ds.cascades) {
        double early = 0;
        for (const auto& r : c.retweets)
            if (r.time_s - c.origin.time_s <= early_window_s) early += 1;
        Eigen::Vector4d x(1.0, std::log1p(early),
                          std::log1p(static_cast<double>(c.origin.followers)),
                          static_cast<double>(c.origin.pos));
        const double y = std::log1p(static_cast<double>(c.retweets.size()));
        xtx += x * x.transpose();
        xty += x * y;
    }
    xtx += 1e-9 * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::LDLT<Eigen::MatrixXd> solver(xtx);
    const Eigen::VectorXd w = solver.solve(xty);
    if (!w.allFinite() || (xtx * w - xty).norm() > 1e-6 * (1.0 + xty.norm()))
        throw NumericError("fit_retweet_regression: degenerate design matrix");
    RetweetRegression reg;
    reg.early_window_s = early_window_s;
    for (int i = 0; i < dim; ++i) reg.weights[i] = w[i];
    return reg;
}

double predict_log_retweets(const RetweetRegression& reg, double early_count,
                            std::int64_t followers, int pos) {
    return reg.weights[0] + reg.weights[1] * std::log1p(early_count) +
           reg.weights[2] * std::log1p(static_cast<double>(followers)) +
           reg.weights[3] * static_cast<double>(pos);
}

std::vector<double> predict_regression_baseline(const BackgroundModel& bg,
                                                const RetweetRegression& reg,
                                                const EmpiricalDistributions& dists,
                                                const CovariateCalendar& cal, double t_start,
                                                double t_end, std::uint64_t seed) {
    if (t_end <= t_start) return {};
    if (dists.pos_samples.empty() || dists.follower_samples.empty())
        throw NumericError("predict_regression_baseline: empty attribute pools");

    // Expected retweets per future original: averaged over resampled
    // attributes with zero early activity (the target is log(1+R), so the
    // count is exp(prediction) - 1, floored at zero).
    std::mt19937_64 rng(derive_seed(seed, 21));
    std::uniform_int_distribution<std::size_t> pos_idx(0, dists.pos_samples.size() - 1);
    std::uniform_int_distribution<std::size_t> fol_idx(0, dists.follower_samples.size() - 1);
    const int n_draws = 256;
    double mean_retweets = 0;
    for (int i = 0; i < n_draws; ++i) {
        const double pred = predict_log_retweets(reg, 0.0, dists.follower_samples[fol_idx(rng)],
                                                 dists.pos_samples[pos_idx(rng)]);
        mean_retweets += std::max(std::exp(pred) - 1.0, 0.0);
    }
    mean_retweets /= n_draws;

    std::vector<double> hourly;
    for (double h = t_start; h < t_end - 1e-9; h += 3600.0) hourly.push_back(0.0);
    const std::size_t n_hours = hourly.size();
    for (std::size_t h = 0; h < n_hours; ++h) {
        const double h0 = t_start + 3600.0 * static_cast<double>(h);
        const double h1 = std::min(h0 + 3600.0, t_end);
        const Partition part = hourly_partition(cal, h0, h1);
        double originals = 0;
        for (const auto& cell : part.cells)
            originals += std::exp(dot(bg.beta, covariate_vector(cal, cell.midpoint()))) *
                         cell.width();
        hourly[h] += originals;
        // Retweets spread uniformly over the 24 hours after the arrival hour.
        const double per_hour = originals * mean_retweets / 24.0;
        for (std::size_t k = 1; k <= 24; ++k) {
            if (h + k >= n_hours) break;
            hourly[h + k] += per_hour;
        }
    }
    return hourly;
}

}  // namespace poshawk
