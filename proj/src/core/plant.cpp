#include "invctl/plant.hpp"

#include "invctl/errors.hpp"

#include <cmath>
#include <string>

namespace invctl {

void PlantParams::validate() const
{
    if (!(yield_k > 0.0) || !std::isfinite(yield_k))
        throw InvalidArgument("plant yield must be positive, got " + std::to_string(yield_k));
    if (!(decay_sigma >= 0.0) || !std::isfinite(decay_sigma))
        throw InvalidArgument("plant decay rate must be non-negative, got " + std::to_string(decay_sigma));
    if (!std::isfinite(y0) || y0 < 0.0)
        throw InvalidArgument("initial inventory must be non-negative, got " + std::to_string(y0));
    (void)delay_samples();
}

std::size_t PlantParams::delay_samples() const
{
    return invctl::delay_samples(lead_time, dt);
}

PlantState make_plant_state(const PlantParams& params, double fill)
{
    params.validate();
    return {0.0, params.y0, DelayLine(params.delay_samples(), fill)};
}

PlantState& plant_step(PlantState& state, const PlantParams& params, double u_now, double d_now)
{
    if (std::isnan(u_now) || std::isnan(d_now) || std::isnan(state.y))
        throw InvalidArgument("NaN entered the plant at t = " + std::to_string(state.t));
    if (u_now < 0.0)
        throw InvalidArgument("supply must be non-negative, got " + std::to_string(u_now) +
                              " at t = " + std::to_string(state.t));
    const double delivered = state.delay.push_read(u_now);
    state.y = euler_inventory_step(state.y, params.decay_sigma, params.yield_k, delivered, d_now, params.dt);
    if (params.clamp_inventory && state.y < 0.0)
        state.y = 0.0;
    state.t += params.dt;
    return state;
}

TimeSeries run_open_loop(const PlantParams& params, const TimeSeries& u, const TimeSeries& d)
{
    params.validate();
    if (!u.same_grid(d))
        throw GridMismatch("supply and demand series are on different grids");
    if (u.dt() != params.dt)
        throw GridMismatch("series step does not match plant dt");

    TimeSeries y(d.start_time(), d.dt());
    if (d.empty())
        return y;
    y.reserve(d.size());
    PlantState state = make_plant_state(params);
    state.t = d.start_time();
    y.push_back(state.y);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        plant_step(state, params, u[i], d[i]);
        y.push_back(state.y);
    }
    return y;
}

} // namespace invctl
