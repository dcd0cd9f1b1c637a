#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace poshawk {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0;
    std::size_t iterations = 0;
};

/// Derivative-free simplex minimization. Deterministic given the start
/// point and scales. Stops when the relative spread of simplex values
/// drops below `tol` or after `max_iters` iterations.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start,
                                    const std::vector<double>& scales, double tol,
                                    std::size_t max_iters) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> pts(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += scales[i];
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        for (auto i : idx) {
            p2.push_back(pts[i]);
            v2.push_back(vals[i]);
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };

    NelderMeadResult res;
    std::size_t iter = 0;
    for (; iter < max_iters; ++iter) {
        order();
        const double spread = std::abs(vals[n] - vals[0]);
        if (spread <= tol * (std::abs(vals[0]) + 1e-30) || spread == 0.0) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;

        auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + coeff * (pts[n][j] - centroid[j]);
            return x;
        };

        const std::vector<double> xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < vals[0]) {
            const std::vector<double> xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if (fr < vals[n - 1]) {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            const std::vector<double> xc = blend(fr < vals[n] ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, vals[n])) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    order();
    res.x = pts[0];
    res.value = vals[0];
    res.iterations = iter;
    return res;
}

}  // namespace poshawk
