#include "poshawk/intensity.hpp"

#include <cmath>

#include "poshawk/errors.hpp"

namespace poshawk {

FutureIntegral future_integral_from_string(const std::string& s) {
    if (s == "causal") return FutureIntegral::Causal;
    if (s == "paper") return FutureIntegral::Paper;
    throw IoError("future_integral must be 'causal' or 'paper', got '" + s + "'");
}

std::string future_integral_name(FutureIntegral f) {
    return f == FutureIntegral::Causal ? "causal" : "paper";
}

InfluenceParams HawkesModel::influence_for(const Cascade& c) const {
    const double fallback =
        dists.p0_samples.empty() ? 0.0 : dists.mean_p0();
    auto it = influence.p0_by_origin.find(c.origin.event_id);
    if (it == influence.p0_by_origin.end() && dists.p0_samples.empty())
        throw NumericError("no fitted p0 for origin '" + c.origin.event_id +
                           "' and no empirical p0 pool to fall back on");
    InfluenceParams p;
    p.p0 = it != influence.p0_by_origin.end() ? it->second : fallback;
    p.r0 = influence.r0;
    p.phi0 = influence.phi0;
    p.tau_m = influence.tau_m;
    return p;
}

double lambda_at(const HawkesModel& model, const Dataset& ds, const CovariateCalendar& cal,
                 double t) {
    double total = mu(model.background, cal, t);
    for (const auto& c : ds.cascades) {
        if (c.origin.time_s >= t) continue;
        double kernel_sum =
            static_cast<double>(c.origin.followers) * psi(t - c.origin.time_s, model.mode);
        for (const auto& r : c.retweets) {
            if (r.time_s >= t) break;
            kernel_sum += static_cast<double>(r.followers) * psi(t - r.time_s, model.mode);
        }
        if (kernel_sum == 0) continue;
        const InfluenceParams p = model.influence_for(c);
        total += influence(p, c.origin.pos, c.origin.time_s, t) * kernel_sum;
    }
    return total;
}

double log_likelihood(const HawkesModel& model, const Dataset& ds,
                      const CovariateCalendar& cal) {
    double ll = 0;
    // Background term over originals.
    for (const auto& c : ds.cascades) {
        ll += dot(model.background.beta, covariate_vector(cal, c.origin.time_s));
    }
    // Excitation terms over retweets.
    for (const auto& c : ds.cascades) {
        if (c.retweets.empty()) continue;
        const InfluenceParams p = model.influence_for(c);
        for (const auto& r : c.retweets) {
            const double arg = influence(p, c.origin.pos, c.origin.time_s, r.time_s) *
                               static_cast<double>(r.followers) *
                               psi(r.time_s - c.origin.time_s, model.mode);
            if (!(arg > 0))
                throw NumericError("log_likelihood: nonpositive intensity factor for retweet '" +
                                   r.event_id + "'");
            ll += std::log(arg);
        }
    }
    // Compensator: exact integral of mu over the partition, plus per-event
    // kernel integrals with p_i frozen at the fitting windows' midpoints.
    const Partition part = hourly_partition(cal, ds.t_a, ds.t_b);
    double compensator = 0;
    for (const auto& cell : part.cells) {
        compensator += std::exp(dot(model.background.beta,
                                    covariate_vector(cal, cell.midpoint()))) *
                       cell.width();
    }
    const double window_s = model.influence.window_s;
    for (const auto& c : ds.cascades) {
        const double t0 = c.origin.time_s;
        if (t0 >= ds.t_b) continue;
        const InfluenceParams p = model.influence_for(c);
        double w_start = t0;
        while (w_start < ds.t_b) {
            const double w_end = std::min(w_start + window_s, ds.t_b);
            const double pw = influence(p, c.origin.pos, t0, 0.5 * (w_start + w_end));
            if (pw > 0) {
                double kernel_int = static_cast<double>(c.origin.followers) *
                                    psi_integral(std::max(w_start - t0, 0.0), w_end - t0,
                                                 model.mode);
                for (const auto& r : c.retweets) {
                    if (r.time_s > w_end) break;
                    kernel_int += static_cast<double>(r.followers) *
                                  psi_integral(std::max(w_start - r.time_s, 0.0),
                                               w_end - r.time_s, model.mode);
                }
                compensator += pw * kernel_int;
            }
            w_start = w_end;
        }
    }
    return ll - compensator;
}

double expected_future_intensity(const HawkesModel& model, const Dataset& ds,
                                 const CovariateCalendar& cal,
                                 const std::vector<SampledOriginal>& otp, double t) {
    if (!(t > model.t_b))
        throw NumericError("expected_future_intensity: t must exceed the training end");
    double total = lambda_at(model, ds, cal, t);
    if (otp.empty()) return total;
    const double mean_d = model.dists.mean_followers();
    for (const auto& o : otp) {
        if (o.t0 > t) continue;
        const double lower =
            model.future_integral == FutureIntegral::Causal ? std::max(model.t_b, o.t0)
                                                            : model.t_b;
        if (t <= lower) continue;
        InfluenceParams p;
        p.p0 = o.p0;
        p.r0 = model.influence.r0;
        p.phi0 = model.influence.phi0;
        p.tau_m = model.influence.tau_m;
        total += influence(p, o.pos, o.t0, t) * mean_d * psi_integral(0.0, t - lower, model.mode);
    }
    return total;
}

}  // namespace poshawk
