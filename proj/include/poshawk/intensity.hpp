#pragma once

#include <vector>

#include "poshawk/background.hpp"
#include "poshawk/covariates.hpp"
#include "poshawk/events.hpp"
#include "poshawk/influence_fit.hpp"
#include "poshawk/kernels.hpp"

namespace poshawk {

/// How the integral under a synthetic future origin's kernel is anchored:
/// from the origin's own time (causal, default) or from the end of the
/// training window (the literal published expression).
enum class FutureIntegral { Causal, Paper };

FutureIntegral future_integral_from_string(const std::string& s);
std::string future_integral_name(FutureIntegral f);

struct HawkesModel {
    BackgroundModel background;
    InfluenceFit influence;
    EmpiricalDistributions dists;
    KernelMode mode = KernelMode::PaperLiteral;
    double t_b = 0;
    FutureIntegral future_integral = FutureIntegral::Causal;

    /// Per-origin influence params, falling back to the empirical mean p0
    /// for origins without a fitted scale.
    InfluenceParams influence_for(const Cascade& c) const;
};

/// λ(t) = μ(t) + Σ_cascades p_i(t) Σ_{j in cascade, t_j < t} d_j ψ(t - t_j).
double lambda_at(const HawkesModel& model, const Dataset& ds, const CovariateCalendar& cal,
                 double t);

/// Full log-likelihood: background term over originals, excitation terms
/// over retweets, minus the compensator. The compensator freezes p_i at
/// the same window midpoints used during fitting and integrates ψ in
/// closed form.
double log_likelihood(const HawkesModel& model, const Dataset& ds,
                      const CovariateCalendar& cal);

/// A future original sampled for forecasting, with resampled attributes.
struct SampledOriginal {
    double t0 = 0;
    int pos = 3;
    double p0 = 0;
    std::int64_t followers = 0;
};

/// λ̂(t) for t past the training window: observed-history intensity plus
/// the expected excitation of the sampled future originals.
double expected_future_intensity(const HawkesModel& model, const Dataset& ds,
                                 const CovariateCalendar& cal,
                                 const std::vector<SampledOriginal>& otp, double t);

}  // namespace poshawk
