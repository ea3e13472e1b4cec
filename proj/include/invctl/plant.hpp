#pragma once

#include "invctl/timeseries.hpp"

#include <cstddef>

namespace invctl {

/// Ground-truth inventory plant
///     dy/dt = -sigma y(t) + k u(t - L) - d(t)
/// with sigma = 0 for the classic (non-perishable) case.
struct PlantParams {
    double yield_k = 1.0;
    double decay_sigma = 0.0;
    double lead_time = 1.0;
    double dt = 1.0;
    double y0 = 0.0;
    bool clamp_inventory = true;

    void validate() const;
    std::size_t delay_samples() const;

    bool operator==(const PlantParams&) const = default;
};

/// One explicit Euler step of the inventory balance. Shared by the plant and
/// the model-based predictor so that a perfect model replays the plant
/// bit for bit.
inline double euler_inventory_step(double y, double sigma, double yield, double supply, double demand, double dt)
{
    return y + dt * (-sigma * y + yield * supply - demand);
}

struct PlantState {
    double t = 0.0;
    double y = 0.0;
    DelayLine delay;
};

/// Fresh state at t = 0. The supply channel reads `fill` until the first
/// order arrives.
PlantState make_plant_state(const PlantParams& params, double fill = 0.0);

/// Advances the state by one dt with order u_now and demand d_now.
PlantState& plant_step(PlantState& state, const PlantParams& params, double u_now, double d_now);

/// y[0] = y0, y[i + 1] = step(y[i], u[i], d[i]); output has the length of d.
TimeSeries run_open_loop(const PlantParams& params, const TimeSeries& u, const TimeSeries& d);

} // namespace invctl
