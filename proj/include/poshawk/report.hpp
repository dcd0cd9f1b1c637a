#pragma once

#include <string>
#include <vector>

#include "poshawk/covariates.hpp"

namespace poshawk {

/// Horizontal bar chart of named coefficient weights.
std::string svg_bar_chart(const std::vector<std::string>& names,
                          const std::vector<double>& values, const std::string& title);

/// Predicted vs. observed hourly line chart with shaded covariate-day
/// bands (green protests, fuchsia team A, aquamarine team B).
std::string svg_forecast_chart(const CovariateCalendar& cal,
                               const std::vector<double>& hour_starts,
                               const std::vector<double>& predicted,
                               const std::vector<double>& observed,
                               const std::string& title);

}  // namespace poshawk
