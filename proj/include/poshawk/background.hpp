#pragma once

#include <array>
#include <vector>

#include "poshawk/covariates.hpp"
#include "poshawk/events.hpp"

namespace poshawk {

using BetaVector = std::array<double, kCovariateDim>;

/// Background component μ(t) = exp(β·C(t)).
struct BackgroundModel {
    BetaVector beta{};
    double ridge = 1e-6;
    Partition partition;
};

struct FitOptions {
    double gradient_tol = 1e-8;      // infinity norm
    std::size_t max_iterations = 200;
    double ridge = 1e-6;
};

double mu(const BackgroundModel& model, const CovariateCalendar& cal, double t);

struct ObjectiveValue {
    double value = 0;
    BetaVector gradient{};
};

/// Negative background log-likelihood (originals only) plus ridge term:
///   -Σ_{i∈OT} β·C(t_i) + Σ_cells exp(β·C(midpoint))·width + ridge·|β|².
/// The integral discretization is exact because C is constant per cell.
ObjectiveValue background_objective(const Dataset& ds, const CovariateCalendar& cal,
                                    const BetaVector& beta, double ridge = 0.0);

BackgroundModel fit_beta(const Dataset& ds, const CovariateCalendar& cal,
                         const FitOptions& opts = {});

/// Internal machinery shared with the NHPP baseline: fits β for a set of
/// event times over a given window.
struct BackgroundProblem {
    std::vector<CovariateVector> cell_cov;  // covariates at cell midpoints
    std::vector<double> cell_width;
    BetaVector event_cov_sum{};             // Σ C(t_i) over the modeled events
    std::size_t n_events = 0;

    static BackgroundProblem build(const std::vector<double>& event_times,
                                   const CovariateCalendar& cal, const Partition& part);
    ObjectiveValue objective(const BetaVector& beta, double ridge) const;
    /// Newton iteration with backtracking line search. Deterministic.
    BetaVector minimize(const FitOptions& opts) const;
};

}  // namespace poshawk
