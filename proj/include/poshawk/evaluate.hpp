#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poshawk/background.hpp"
#include "poshawk/covariates.hpp"
#include "poshawk/events.hpp"
#include "poshawk/influence_fit.hpp"

namespace poshawk {

/// One rolling-origin fold: train on a sliding window, test on the head
/// of the next block.
struct Fold {
    double train_start = 0;
    double train_end = 0;  // == test_start
    double test_start = 0;
    double test_end = 0;
};

std::vector<Fold> make_folds(const Dataset& ds, int train_days = 30, int block_days = 15,
                             int eval_days = 8);

/// Counts per half-open hour [h, h+1) over [t_start, t_end).
std::vector<int> bin_hourly(const std::vector<double>& times, double t_start, double t_end);

double mae(const std::vector<double>& pred, const std::vector<double>& obs);

/// Sample Pearson correlation; nullopt when either series is constant.
std::optional<double> pearson(const std::vector<double>& pred, const std::vector<double>& obs);

enum class ModelKind { Hawkes, Nhpp, Regression };

ModelKind model_kind_from_string(const std::string& s);
std::string model_kind_name(ModelKind kind);

struct CvConfig {
    int train_days = 30;
    int block_days = 15;
    int eval_days = 8;
    int n_realizations = 30;
    KernelMode mode = KernelMode::PaperLiteral;
    FitOptions background;
    InfluenceFitOptions influence;
    double early_window_s = 3600;
};

struct FoldMetrics {
    int fold = 0;
    double train_start = 0;
    double test_start = 0;
    double mae = 0;
    std::optional<double> pearson;       // absent: undefined (constant series)
    std::optional<std::string> error;    // absent: fold succeeded
};

struct CvResult {
    ModelKind kind = ModelKind::Hawkes;
    std::vector<FoldMetrics> folds;
    double mae_mean = 0;
    double mae_sd = 0;
    double pearson_mean = 0;
    double pearson_sd = 0;
    std::size_t n_failed = 0;
    std::size_t n_pearson_undefined = 0;
};

CvResult run_cv(const Dataset& ds, const CovariateCalendar& cal, ModelKind kind,
                const CvConfig& config, std::uint64_t seed);

std::string cv_fold_csv(const CvResult& result);

}  // namespace poshawk
