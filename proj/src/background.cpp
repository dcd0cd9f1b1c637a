#include "poshawk/background.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "poshawk/errors.hpp"

namespace poshawk {

namespace {

using Vec = Eigen::Matrix<double, kCovariateDim, 1>;
using Mat = Eigen::Matrix<double, kCovariateDim, kCovariateDim>;

Vec to_eigen(const BetaVector& b) {
    Vec v;
    for (int i = 0; i < kCovariateDim; ++i) v[i] = b[i];
    return v;
}

BetaVector from_eigen(const Vec& v) {
    BetaVector b{};
    for (int i = 0; i < kCovariateDim; ++i) b[i] = v[i];
    return b;
}

}  // namespace

double mu(const BackgroundModel& model, const CovariateCalendar& cal, double t) {
    const CovariateVector c = covariate_vector(cal, t);
    const double z = dot(model.beta, c);
    if (z > 700.0) {
        std::ostringstream msg;
        msg << "mu overflow: beta.C(t) = " << z << " at t = " << t;
        throw NumericError(msg.str());
    }
    return std::exp(z);
}

BackgroundProblem BackgroundProblem::build(const std::vector<double>& event_times,
                                           const CovariateCalendar& cal,
                                           const Partition& part) {
    BackgroundProblem p;
    p.cell_cov.reserve(part.cells.size());
    p.cell_width.reserve(part.cells.size());
    for (const auto& cell : part.cells) {
        p.cell_cov.push_back(covariate_vector(cal, cell.midpoint()));
        p.cell_width.push_back(cell.width());
    }
    for (double t : event_times) {
        const CovariateVector c = covariate_vector(cal, t);
        for (int i = 0; i < kCovariateDim; ++i) p.event_cov_sum[i] += c[i];
    }
    p.n_events = event_times.size();
    return p;
}

ObjectiveValue BackgroundProblem::objective(const BetaVector& beta, double ridge) const {
    ObjectiveValue out;
    double value = -dot(beta, event_cov_sum);
    BetaVector grad{};
    for (int i = 0; i < kCovariateDim; ++i) grad[i] = -event_cov_sum[i];
    for (std::size_t k = 0; k < cell_cov.size(); ++k) {
        const double z = dot(beta, cell_cov[k]);
        if (z > 700.0) throw NumericError("background objective overflow: beta.C = " +
                                          std::to_string(z));
        const double ew = std::exp(z) * cell_width[k];
        value += ew;
        for (int i = 0; i < kCovariateDim; ++i) grad[i] += cell_cov[k][i] * ew;
    }
    double norm2 = 0;
    for (int i = 0; i < kCovariateDim; ++i) {
        norm2 += beta[i] * beta[i];
        grad[i] += 2.0 * ridge * beta[i];
    }
    out.value = value + ridge * norm2;
    out.gradient = grad;
    return out;
}

BetaVector BackgroundProblem::minimize(const FitOptions& opts) const {
    if (n_events == 0) throw NumericError("background fit: no events to fit");
    // Newton with Armijo backtracking; the objective is convex (ridge makes
    // it strictly so). Start from the homogeneous-Poisson intercept.
    double total_width = 0;
    for (double w : cell_width) total_width += w;
    Vec beta = Vec::Zero();
    beta[0] = std::log(static_cast<double>(n_events) / total_width);

    // Gradient coordinates scale with the event count, so the tolerance is
    // applied relative to each coordinate's event-sum magnitude.
    auto scaled_gnorm = [&](const BetaVector& g) {
        double gnorm = 0;
        for (int i = 0; i < kCovariateDim; ++i)
            gnorm = std::max(gnorm,
                             std::abs(g[i]) / std::max(1.0, std::abs(event_cov_sum[i])));
        return gnorm;
    };

    ObjectiveValue cur = objective(from_eigen(beta), opts.ridge);
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        if (scaled_gnorm(cur.gradient) <= opts.gradient_tol) return from_eigen(beta);

        // Hessian: Σ C Cᵀ exp(β·C) w + 2 ridge I, lightly damped so the
        // am/pm collinearity at ridge = 0 stays solvable.
        Mat H = Mat::Zero();
        const BetaVector b = from_eigen(beta);
        for (std::size_t k = 0; k < cell_cov.size(); ++k) {
            const double ew = std::exp(dot(b, cell_cov[k])) * cell_width[k];
            Vec c = to_eigen(cell_cov[k]);
            H += ew * c * c.transpose();
        }
        const double damping = 1e-12 * H.trace() + 2.0 * opts.ridge;
        H += damping * Mat::Identity();

        Vec g = to_eigen(cur.gradient);
        Vec step = H.ldlt().solve(-g);

        double alpha = 1.0;
        const double slope = g.dot(step);
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            const Vec cand = beta + alpha * step;
            ObjectiveValue next;
            try {
                next = objective(from_eigen(cand), opts.ridge);
            } catch (const NumericError&) {
                alpha *= 0.5;
                continue;
            }
            if (next.value <= cur.value + 1e-4 * alpha * slope) {
                beta = cand;
                cur = next;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) {
            // Line search exhausted: objective improvements fell below float
            // resolution. Accept if the stationarity balance is still tight.
            const double g2 = scaled_gnorm(cur.gradient);
            if (g2 <= opts.gradient_tol * 100) return from_eigen(beta);
            std::ostringstream msg;
            msg << "background fit: line search failed at scaled gradient norm " << g2;
            throw NumericError(msg.str());
        }
    }
    const double gnorm = scaled_gnorm(cur.gradient);
    if (gnorm <= opts.gradient_tol * 100) return from_eigen(beta);
    std::ostringstream msg;
    msg << "background fit: no convergence in " << opts.max_iterations
        << " iterations; last beta = [";
    for (int i = 0; i < kCovariateDim; ++i) msg << (i ? ", " : "") << beta[i];
    msg << "], gradient inf-norm = " << gnorm;
    throw NumericError(msg.str());
}

ObjectiveValue background_objective(const Dataset& ds, const CovariateCalendar& cal,
                                    const BetaVector& beta, double ridge) {
    if (ds.cascades.empty()) throw NumericError("background objective: no originals");
    std::vector<double> times;
    times.reserve(ds.cascades.size());
    for (const auto& c : ds.cascades) times.push_back(c.origin.time_s);
    const Partition part = hourly_partition(cal, ds.t_a, ds.t_b);
    return BackgroundProblem::build(times, cal, part).objective(beta, ridge);
}

BackgroundModel fit_beta(const Dataset& ds, const CovariateCalendar& cal,
                         const FitOptions& opts) {
    if (ds.cascades.empty()) throw NumericError("fit_beta: dataset has no originals");
    std::vector<double> times;
    times.reserve(ds.cascades.size());
    for (const auto& c : ds.cascades) times.push_back(c.origin.time_s);
    BackgroundModel model;
    model.ridge = opts.ridge;
    model.partition = hourly_partition(cal, ds.t_a, ds.t_b);
    model.beta = BackgroundProblem::build(times, cal, model.partition).minimize(opts);
    return model;
}

}  // namespace poshawk
