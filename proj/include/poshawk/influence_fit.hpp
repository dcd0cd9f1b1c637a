#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poshawk/events.hpp"
#include "poshawk/kernels.hpp"

namespace poshawk {

/// Which posts feed the denominator of the discretized influence: every
/// contributor posted up to the window end (default, causal), or only
/// those inside the window (the literal published estimator).
enum class PhatContributors { History, Window };

PhatContributors phat_contributors_from_string(const std::string& s);
std::string phat_contributors_name(PhatContributors c);

struct PhatWindow {
    double t_start = 0;
    double t_end = 0;
    double t_mid = 0;
    int retweets = 0;                // R_i inside this window
    std::optional<double> phat;      // absent when R = 0 or denominator = 0
};

/// Discretized influence estimates for one cascade, windowed from the
/// origin time.
struct PhatSeries {
    std::string origin_id;
    int pos = 3;
    double origin_time = 0;
    std::vector<PhatWindow> windows;
};

struct InfluenceFitOptions {
    double window_s = 14400;  // ~4 h
    KernelMode mode = KernelMode::PaperLiteral;
    PhatContributors contributors = PhatContributors::History;
    double tol = 1e-8;                    // relative improvement stop
    std::size_t max_outer_iterations = 200;
    int restarts = 5;
    std::uint64_t seed = 1;
    double r0_bound = 0.2;                // |r0| <= 1/S_max
    double tau_min = 600;
    double tau_max = 2592000;             // 30 days
};

struct InfluenceFit {
    std::map<std::string, double> p0_by_origin;
    double r0 = 0;
    double phi0 = 0;
    double tau_m = 86400;
    double loss = 0;          // final value of the L1 error function
    std::size_t iterations = 0;
    KernelMode mode = KernelMode::PaperLiteral;
    double window_s = 14400;
    std::vector<std::string> warnings;

    InfluenceParams params_for(const std::string& origin_id, double fallback_p0) const;
};

PhatSeries estimate_phat(const Cascade& cascade, double window_s, double t_b,
                         KernelMode mode,
                         PhatContributors contributors = PhatContributors::History);

/// Sum of |phat - p0_i * shape| over all present windows, given shared
/// shape parameters and per-origin scales.
double influence_loss(const std::vector<PhatSeries>& series,
                      const std::map<std::string, double>& p0_by_origin, double r0,
                      double phi0, double tau_m);

/// Fits (P0, r0, phi0, tau_m) to precomputed phat series. The per-origin
/// scale solve is exact (weighted median); the shared shape parameters go
/// through a seeded multi-start simplex search. The reported solution is
/// canonicalized to r0 >= 0 (the sign flips into a half-period phase
/// shift).
InfluenceFit fit_influence_phat(const std::vector<PhatSeries>& series,
                                const InfluenceFitOptions& opts);

InfluenceFit fit_influence(const Dataset& ds, const InfluenceFitOptions& opts);

}  // namespace poshawk
