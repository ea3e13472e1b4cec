#pragma once

#include "invctl/estimation.hpp"
#include "invctl/timeseries.hpp"

#include <cstddef>
#include <limits>

namespace invctl {

/// Linear extrapolation of a trend: value = basis.mean_at_end + basis.slope * horizon.
/// Only the trend is predicted, never the fluctuation around it. No clamping.
struct Forecast {
    double horizon = 0.0;
    double value = 0.0;
    TrendEstimate basis;

    bool warmup() const { return basis.warmup; }
};

Forecast forecast(const TrendEstimate& est, double delta_t);

/// Forecasts at horizons dt, 2 dt, ..., steps * dt from one frozen estimate.
/// The returned series starts at est.window_end_time + dt.
TimeSeries forecast_path(const TrendEstimate& est, double dt, std::size_t steps,
                         double max_horizon = std::numeric_limits<double>::infinity());

} // namespace invctl
