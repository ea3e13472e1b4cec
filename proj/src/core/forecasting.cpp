#include "invctl/forecasting.hpp"

#include "invctl/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace invctl {

Forecast forecast(const TrendEstimate& est, double delta_t)
{
    if (!(delta_t > 0.0) || !std::isfinite(delta_t))
        throw InvalidArgument("forecast horizon must be positive, got " + std::to_string(delta_t));
    return {delta_t, est.mean_at_end + est.slope * delta_t, est};
}

TimeSeries forecast_path(const TrendEstimate& est, double dt, std::size_t steps, double max_horizon)
{
    if (steps < 1)
        throw InvalidArgument("forecast path needs at least one step");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidArgument("forecast path step must be positive");
    if (static_cast<double>(steps) * dt > max_horizon * (1.0 + 1e-12))
        throw InvalidArgument("forecast path reaches beyond the maximum horizon " + std::to_string(max_horizon));
    std::vector<double> values(steps);
    for (std::size_t k = 1; k <= steps; ++k)
        values[k - 1] = forecast(est, static_cast<double>(k) * dt).value;
    return TimeSeries(est.window_end_time + dt, dt, std::move(values));
}

} // namespace invctl
