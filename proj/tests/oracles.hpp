#pragma once

// Independent reference implementations used to pin expected values in the
// tests: adaptive quadrature, finite differences, KS statistics, and naive
// metric computations. Deliberately simple and separate from the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "poshawk/covariates.hpp"
#include "poshawk/time.hpp"

namespace oracles {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

inline double quad_rec(const std::function<double(double)>& f, double a, double b,
                       double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return quad_rec(f, a, m, left, 0.5 * tol, depth - 1) +
           quad_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature with absolute tolerance.
inline double quad(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-12, int depth = 60) {
    if (a >= b) return 0.0;
    return quad_rec(f, a, b, simpson(f, a, b), tol, depth);
}

/// Central finite-difference gradient.
inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x, double h = 1e-6) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> lo = x, hi = x;
        lo[i] -= h;
        hi[i] += h;
        g[i] = (f(hi) - f(lo)) / (2.0 * h);
    }
    return g;
}

/// One-sample KS statistic against a cdf.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double c = cdf(sample[i]);
        d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - c));
    }
    return d;
}

/// Asymptotic KS critical value at significance alpha.
inline double ks_critical(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

inline double mae_ref(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

inline double pearson_ref(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// UTC calendar with the epoch at a Monday midnight (2019-01-07).
inline poshawk::CovariateCalendar monday_calendar() {
    poshawk::CovariateCalendar cal;
    cal.zone = poshawk::TimeZoneOffset::parse("UTC");
    cal.epoch = poshawk::parse_civil_datetime("2019-01-07T00:00:00");
    return cal;
}

inline std::int64_t epoch_day(const poshawk::CovariateCalendar& cal, int day_index) {
    return poshawk::floor_div(poshawk::civil_seconds(cal.epoch), 86400) + day_index;
}

}  // namespace oracles
