#include "poshawk/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "poshawk/baselines.hpp"
#include "poshawk/errors.hpp"
#include "poshawk/intensity.hpp"
#include "poshawk/simulate.hpp"

namespace poshawk {

std::vector<Fold> make_folds(const Dataset& ds, int train_days, int block_days,
                             int eval_days) {
    const double train_s = train_days * 86400.0;
    const double block_s = block_days * 86400.0;
    const double eval_s = eval_days * 86400.0;
    std::vector<Fold> folds;
    for (int k = 0;; ++k) {
        Fold f;
        f.train_end = ds.t_a + train_s + k * block_s;
        f.train_start = f.train_end - train_s;
        f.test_start = f.train_end;
        f.test_end = f.test_start + eval_s;
        if (f.test_end > ds.t_b + 1e-9) break;
        folds.push_back(f);
    }
    if (folds.empty())
        throw NumericError("make_folds: dataset span is shorter than one train+eval fold");
    return folds;
}

std::vector<int> bin_hourly(const std::vector<double>& times, double t_start, double t_end) {
    std::vector<int> counts;
    for (double h = t_start; h < t_end - 1e-9; h += 3600.0) counts.push_back(0);
    for (double t : times) {
        if (t < t_start || t >= t_end) continue;
        const std::size_t h = static_cast<std::size_t>((t - t_start) / 3600.0);
        if (h < counts.size()) ++counts[h];
    }
    return counts;
}

double mae(const std::vector<double>& pred, const std::vector<double>& obs) {
    if (pred.size() != obs.size() || pred.empty())
        throw NumericError("mae: series lengths must match and be non-empty");
    double total = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) total += std::abs(pred[i] - obs[i]);
    return total / static_cast<double>(pred.size());
}

std::optional<double> pearson(const std::vector<double>& pred,
                              const std::vector<double>& obs) {
    if (pred.size() != obs.size() || pred.size() < 2)
        throw NumericError("pearson: series must have matching length >= 2");
    const double n = static_cast<double>(pred.size());
    double mp = 0, mo = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        mp += pred[i];
        mo += obs[i];
    }
    mp /= n;
    mo /= n;
    double spo = 0, spp = 0, soo = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double dp = pred[i] - mp;
        const double dob = obs[i] - mo;
        spo += dp * dob;
        spp += dp * dp;
        soo += dob * dob;
    }
    if (spp == 0 || soo == 0) return std::nullopt;
    return spo / std::sqrt(spp * soo);
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "hawkes") return ModelKind::Hawkes;
    if (s == "nhpp") return ModelKind::Nhpp;
    if (s == "regression") return ModelKind::Regression;
    throw IoError("model must be 'hawkes', 'nhpp' or 'regression', got '" + s + "'");
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Hawkes: return "hawkes";
        case ModelKind::Nhpp: return "nhpp";
        default: return "regression";
    }
}

namespace {

Dataset slice_dataset(const Dataset& ds, double t_start, double t_end) {
    std::vector<TweetEvent> events;
    for (const auto& ev : flatten_events(ds)) {
        if (ev.time_s >= t_start && ev.time_s < t_end) events.push_back(ev);
    }
    return build_cascades(events, t_start, t_end);
}

std::vector<double> predict_fold(const Dataset& train, const CovariateCalendar& cal,
                                 ModelKind kind, const CvConfig& config, const Fold& fold,
                                 std::uint64_t seed) {
    switch (kind) {
        case ModelKind::Nhpp: {
            const NhppModel nhpp = fit_nhpp(train, cal, config.background);
            return predict_nhpp(nhpp, cal, fold.test_start, fold.test_end);
        }
        case ModelKind::Regression: {
            const BackgroundModel bg = fit_beta(train, cal, config.background);
            const RetweetRegression reg =
                fit_retweet_regression(train, config.early_window_s);
            const EmpiricalDistributions dists = empirical_distributions(train, {});
            return predict_regression_baseline(bg, reg, dists, cal, fold.test_start,
                                               fold.test_end, seed);
        }
        case ModelKind::Hawkes:
        default: {
            HawkesModel model;
            model.mode = config.mode;
            model.t_b = fold.train_end;
            model.background = fit_beta(train, cal, config.background);
            InfluenceFitOptions inf_opts = config.influence;
            inf_opts.mode = config.mode;
            inf_opts.seed = derive_seed(seed, 7);
            model.influence = fit_influence(train, inf_opts);
            model.dists = empirical_distributions(train, model.influence.p0_by_origin);
            const HourlyForecast fc =
                forecast(model, train, cal, fold.test_start, fold.test_end,
                         config.n_realizations, derive_seed(seed, 8));
            return fc.mean;
        }
    }
}

}  // namespace

CvResult run_cv(const Dataset& ds, const CovariateCalendar& cal, ModelKind kind,
                const CvConfig& config, std::uint64_t seed) {
    const std::vector<Fold> folds =
        make_folds(ds, config.train_days, config.block_days, config.eval_days);
    CvResult result;
    result.kind = kind;
    std::vector<double> maes, pearsons;
    const std::vector<TweetEvent> all_events = flatten_events(ds);
    for (std::size_t k = 0; k < folds.size(); ++k) {
        const Fold& fold = folds[k];
        FoldMetrics fm;
        fm.fold = static_cast<int>(k);
        fm.train_start = fold.train_start;
        fm.test_start = fold.test_start;
        try {
            const Dataset train = slice_dataset(ds, fold.train_start, fold.train_end);
            if (train.cascades.empty()) throw NumericError("empty training window");
            const std::vector<double> pred = predict_fold(
                train, cal, kind, config, fold, derive_seed(seed, 1000 + k));
            std::vector<double> times;
            for (const auto& ev : all_events)
                if (ev.time_s >= fold.test_start && ev.time_s < fold.test_end)
                    times.push_back(ev.time_s);
            const std::vector<int> obs_counts =
                bin_hourly(times, fold.test_start, fold.test_end);
            std::vector<double> obs(obs_counts.begin(), obs_counts.end());
            fm.mae = mae(pred, obs);
            fm.pearson = pearson(pred, obs);
            maes.push_back(fm.mae);
            if (fm.pearson) {
                pearsons.push_back(*fm.pearson);
            } else {
                ++result.n_pearson_undefined;
            }
        } catch (const std::exception& e) {
            fm.error = e.what();
            ++result.n_failed;
        }
        result.folds.push_back(fm);
    }
    auto mean_sd = [](const std::vector<double>& v, double& mean, double& sd) {
        mean = 0;
        sd = 0;
        if (v.empty()) return;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        if (v.size() < 2) return;
        double ss = 0;
        for (double x : v) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    };
    mean_sd(maes, result.mae_mean, result.mae_sd);
    mean_sd(pearsons, result.pearson_mean, result.pearson_sd);
    return result;
}

std::string cv_fold_csv(const CvResult& result) {
    std::ostringstream out;
    out << "fold,model,mae,pearson,train_start,test_start\n";
    char buf[64];
    for (const auto& fm : result.folds) {
        if (fm.error) continue;
        out << fm.fold << ',' << model_kind_name(result.kind) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", fm.mae);
        out << buf << ',';
        if (fm.pearson) {
            std::snprintf(buf, sizeof(buf), "%.17g", *fm.pearson);
            out << buf;
        } else {
            out << "undefined";
        }
        std::snprintf(buf, sizeof(buf), ",%.17g,%.17g", fm.train_start, fm.test_start);
        out << buf << '\n';
    }
    return out.str();
}

}  // namespace poshawk
