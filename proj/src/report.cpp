#include "poshawk/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace poshawk {

namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 420;
constexpr double kMargin = 60;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string svg_bar_chart(const std::vector<std::string>& names,
                          const std::vector<double>& values, const std::string& title) {
    const std::size_t n = std::min(names.size(), values.size());
    double vmax = 1e-12;
    for (std::size_t i = 0; i < n; ++i) vmax = std::max(vmax, std::abs(values[i]));
    const double row_h = 32;
    const double h = kMargin + row_h * n + 20;
    const double mid = kWidth / 2.0;
    const double span = (kWidth - 2 * kMargin) / 2.0;
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << h
        << "'>\n";
    out << "<text x='" << mid << "' y='24' text-anchor='middle' font-size='16'>"
        << escape(title) << "</text>\n";
    out << "<line x1='" << mid << "' y1='" << kMargin - 20 << "' x2='" << mid << "' y2='"
        << h - 10 << "' stroke='#999'/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double y = kMargin + row_h * i;
        const double w = span * std::abs(values[i]) / vmax;
        const double x = values[i] >= 0 ? mid : mid - w;
        out << "<rect x='" << x << "' y='" << y << "' width='" << w << "' height='"
            << row_h - 8 << "' fill='" << (values[i] >= 0 ? "#4878b0" : "#b04848")
            << "'/>\n";
        out << "<text x='10' y='" << y + row_h - 14 << "' font-size='13'>" << escape(names[i])
            << "</text>\n";
        out << "<text x='" << (values[i] >= 0 ? x + w + 6 : x - 6) << "' y='"
            << y + row_h - 14 << "' font-size='12' text-anchor='"
            << (values[i] >= 0 ? "start" : "end") << "'>" << values[i] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_forecast_chart(const CovariateCalendar& cal,
                               const std::vector<double>& hour_starts,
                               const std::vector<double>& predicted,
                               const std::vector<double>& observed,
                               const std::string& title) {
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='"
        << kHeight << "'>\n";
    out << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='16'>"
        << escape(title) << "</text>\n";
    if (hour_starts.empty()) {
        out << "</svg>\n";
        return out.str();
    }
    const double t0 = hour_starts.front();
    const double t1 = hour_starts.back() + 3600.0;
    double vmax = 1.0;
    for (double v : predicted) vmax = std::max(vmax, v);
    for (double v : observed) vmax = std::max(vmax, v);
    auto sx = [&](double t) {
        return kMargin + (kWidth - 2 * kMargin) * (t - t0) / (t1 - t0);
    };
    auto sy = [&](double v) {
        return kHeight - kMargin - (kHeight - 2 * kMargin) * v / vmax;
    };
    // Covariate day bands.
    for (std::int64_t day = floor_div(static_cast<std::int64_t>(cal.local_seconds(t0)), 86400);
         day <= floor_div(static_cast<std::int64_t>(cal.local_seconds(t1)), 86400); ++day) {
        const double day_start = day * 86400.0 - static_cast<double>(civil_seconds(cal.epoch));
        const double a = std::max(day_start, t0);
        const double b = std::min(day_start + 86400.0, t1);
        if (b <= a) continue;
        auto band = [&](const char* color, double frac) {
            out << "<rect x='" << sx(a) << "' y='" << kMargin - 20 + 14 * frac << "' width='"
                << sx(b) - sx(a) << "' height='" << kHeight - 2 * kMargin + 20
                << "' fill='" << color << "' fill-opacity='0.15'/>\n";
        };
        if (cal.protest_days.count(day)) band("#2ca02c", 0);
        if (cal.team_a_days.count(day)) band("#ff00ff", 1);
        if (cal.team_b_days.count(day)) band("#7fffd4", 2);
    }
    auto polyline = [&](const std::vector<double>& vals, const char* color) {
        if (vals.empty()) return;
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < vals.size() && i < hour_starts.size(); ++i)
            out << sx(hour_starts[i] + 1800.0) << ',' << sy(vals[i]) << ' ';
        out << "'/>\n";
    };
    polyline(predicted, "#1f77b4");
    polyline(observed, "#ff7f0e");
    out << "<line x1='" << kMargin << "' y1='" << kHeight - kMargin << "' x2='"
        << kWidth - kMargin << "' y2='" << kHeight - kMargin << "' stroke='#333'/>\n";
    out << "<line x1='" << kMargin << "' y1='" << kMargin - 20 << "' x2='" << kMargin
        << "' y2='" << kHeight - kMargin << "' stroke='#333'/>\n";
    out << "<text x='" << kMargin << "' y='" << kHeight - kMargin + 18
        << "' font-size='12'>0 h</text>\n";
    out << "<text x='" << kWidth - kMargin << "' y='" << kHeight - kMargin + 18
        << "' font-size='12' text-anchor='end'>" << (t1 - t0) / 3600.0 << " h</text>\n";
    out << "<text x='" << kMargin - 6 << "' y='" << sy(vmax) + 4
        << "' font-size='12' text-anchor='end'>" << vmax << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace poshawk
