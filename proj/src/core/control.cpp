#include "invctl/control.hpp"

#include "invctl/errors.hpp"
#include "invctl/forecasting.hpp"
#include "invctl/plant.hpp"

#include <algorithm>
#include <cmath>

namespace invctl {

std::string to_string(ControllerVariant v)
{
    return v == ControllerVariant::smith_p ? "smith_p" : "model_free_ip";
}

std::string to_string(ForecastSource s)
{
    return s == ForecastSource::estimated ? "estimated" : "exact";
}

void ControllerParams::validate() const
{
    if (!(k_model > 0.0) || !std::isfinite(k_model))
        throw InvalidArgument("controller model yield must be positive, got " + std::to_string(k_model));
    if (!(sigma_model >= 0.0) || !std::isfinite(sigma_model))
        throw InvalidArgument("controller model decay must be non-negative");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("alpha must be positive, got " + std::to_string(alpha));
    if (!(gain >= 0.0) || !std::isfinite(gain))
        throw InvalidArgument("controller gain must be non-negative, got " + std::to_string(gain));
    if (!(forecast_error_bound >= 0.0) || !std::isfinite(forecast_error_bound))
        throw InvalidArgument("forecast error bound must be non-negative");
    if (!(forecast_error_hold >= 0.0))
        throw InvalidArgument("forecast error hold must be non-negative");
    if (variant == ControllerVariant::model_free_ip && forecast_source == ForecastSource::exact)
        throw InvalidArgument("exact forecasts are only defined for the smith_p controller");
}

Reference::Reference(std::vector<Knot> knots) : knots_(std::move(knots))
{
    if (knots_.empty())
        throw InvalidArgument("reference needs at least one knot");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i].t) || !std::isfinite(knots_[i].value))
            throw InvalidArgument("reference knots must be finite");
        if (i > 0 && !(knots_[i].t > knots_[i - 1].t))
            throw InvalidArgument("reference knot times must be strictly increasing");
    }
}

namespace {

// Index of the segment [knots[k], knots[k + 1]) containing t, or npos
// outside the knot range.
std::size_t segment_of(const std::vector<Reference::Knot>& knots, double t)
{
    if (knots.size() < 2 || t < knots.front().t || t >= knots.back().t)
        return static_cast<std::size_t>(-1);
    auto it = std::upper_bound(knots.begin(), knots.end(), t,
                               [](double v, const Reference::Knot& k) { return v < k.t; });
    return static_cast<std::size_t>(it - knots.begin()) - 1;
}

} // namespace

double Reference::value(double t) const
{
    if (t <= knots_.front().t)
        return knots_.front().value;
    if (t >= knots_.back().t)
        return knots_.back().value;
    const std::size_t k = segment_of(knots_, t);
    const Knot& a = knots_[k];
    const Knot& b = knots_[k + 1];
    return a.value + (b.value - a.value) * (t - a.t) / (b.t - a.t);
}

double Reference::rate(double t) const
{
    const std::size_t k = segment_of(knots_, t);
    if (k == static_cast<std::size_t>(-1))
        return 0.0;
    return (knots_[k + 1].value - knots_[k].value) / (knots_[k + 1].t - knots_[k].t);
}

double Reference::amplitude() const
{
    auto [lo, hi] = std::minmax_element(knots_.begin(), knots_.end(),
                                        [](const Knot& a, const Knot& b) { return a.value < b.value; });
    return hi->value - lo->value;
}

HorizonForecast horizon_forecast(const TrendEstimate& est, double t_now, double dt, std::size_t steps)
{
    if (steps < 1)
        throw InvalidArgument("prediction horizon must span at least one step");
    const double offset = t_now - est.window_end_time;
    if (offset < 0.0)
        throw InvalidArgument("trend estimate lies in the future of the decision instant");
    HorizonForecast out;
    out.path.reserve(steps);
    if (offset == 0.0) {
        out.path.push_back(est.mean_at_end);
        if (steps > 1) {
            const TimeSeries tail = forecast_path(est, dt, steps - 1);
            out.path.insert(out.path.end(), tail.values().begin(), tail.values().end());
        }
    } else {
        for (std::size_t k = 0; k < steps; ++k)
            out.path.push_back(forecast(est, offset + static_cast<double>(k) * dt).value);
    }
    out.point = forecast(est, offset + static_cast<double>(steps) * dt).value;
    out.warmup = est.warmup;
    return out;
}

ControllerState make_controller_state(const ControllerParams& params, double lead_time, double dt,
                                      const EstimatorConfig& y_dot_estimator)
{
    params.validate();
    TrendEstimator estimator(y_dot_estimator, dt);
    const double lag = estimator.slope_lag();
    ControllerState state{dt,
                          DelayLine::for_lead_time(lead_time, dt),
                          std::move(estimator),
                          TimeSeries(0.0, dt),
                          0.0,
                          TimeSeries(-lag, dt),
                          lag,
                          y_dot_estimator.window_samples - 1};
    return state;
}

void record_control(ControllerState& state, double u)
{
    state.last_delivered = state.control_history.push_read(u);
}

double predict_output(const ControllerState& state, double y_now, const ControllerParams& params,
                      std::span<const double> path)
{
    const std::size_t steps = state.horizon_steps();
    if (path.size() != steps)
        throw InvalidArgument("horizon path has " + std::to_string(path.size()) + " entries, expected " +
                              std::to_string(steps));
    const bool model_free = params.variant == ControllerVariant::model_free_ip;
    const double input_gain = model_free ? params.alpha : params.k_model;
    const double decay = model_free ? 0.0 : params.sigma_model;

    double y = y_now;
    for (std::size_t k = 0; k < steps; ++k)
        y = euler_inventory_step(y, decay, input_gain, state.control_history.at(k), path[k], state.dt);
    return y;
}

namespace {

double finish(double u, const ControllerParams& params)
{
    if (!std::isfinite(u))
        throw Error("controller produced a non-finite control");
    return params.clamp_u ? std::max(u, 0.0) : u;
}

} // namespace

ControlDecision control_smith_p(double y_now, const Reference& ref, double t, ControllerState& state,
                                const ControllerParams& params, const HorizonForecast& demand)
{
    if (!(params.k_model > 0.0))
        throw InvalidArgument("controller model yield must be positive");
    const double horizon = static_cast<double>(state.horizon_steps()) * state.dt;
    const double target = ref.value(t + horizon);
    const double target_rate = ref.rate(t + horizon);

    std::vector<double> path(demand.path);
    for (double& v : path)
        v = std::max(v, 0.0);
    const double d_point = std::max(demand.point, 0.0);

    ControlDecision out;
    out.forecast = d_point;
    out.warmup = demand.warmup || state.decisions() < state.horizon_steps();
    double u = 0.0;
    if (out.warmup) {
        out.predicted_output = target;
        u = (target_rate + params.sigma_model * target + d_point) / params.k_model;
    } else {
        out.predicted_output = predict_output(state, y_now, params, path);
        out.predicted_error = out.predicted_output - target;
        u = (target_rate + params.sigma_model * out.predicted_output + d_point - params.gain * out.predicted_error) /
            params.k_model;
    }
    out.u = finish(u, params);
    record_control(state, out.u);
    return out;
}

ControlDecision control_smith_p(double y_now, const Reference& ref, double t, ControllerState& state,
                                const ControllerParams& params, const TrendEstimate& d_estimate)
{
    return control_smith_p(y_now, ref, t, state, params,
                           horizon_forecast(d_estimate, t, state.dt, state.horizon_steps()));
}

FEstimate estimate_F(ControllerState& state, const TimeSeries& y, const ControllerParams& params)
{
    if (y.empty() || state.f_series.size() + 1 != y.size() || state.delivered_input.size() + 1 != y.size())
        throw InvalidArgument("F estimate out of step with the measured output (" + std::to_string(y.size()) +
                              " outputs, " + std::to_string(state.f_series.size()) + " F samples)");
    const std::size_t i = y.size() - 1;
    TimeSeries& cum = state.delivered_input;
    cum.push_back(i == 0 ? 0.0 : cum[i - 1] + state.dt * state.last_delivered);

    const TrendEstimate y_trend = state.y_dot_estimator.estimate(y, i);
    double f = 0.0;
    if (y_trend.warmup) {
        f = params.alpha * state.control_history.at(0);
    } else {
        const TrendEstimate u_trend = state.y_dot_estimator.estimate(cum, i);
        f = params.alpha * u_trend.slope - y_trend.slope;
    }
    state.f_series.push_back(f);
    return {f, y_trend.warmup};
}

ControlDecision control_model_free_ip(double y_now, const Reference& ref, double t, ControllerState& state,
                                      const ControllerParams& params, double forecast_offset)
{
    if (!(params.alpha > 0.0))
        throw InvalidArgument("alpha must be positive");
    if (state.f_series.empty())
        throw InvalidArgument("no F estimate available; call estimate_F first");
    const double horizon = static_cast<double>(state.horizon_steps()) * state.dt;
    const double target = ref.value(t + horizon);
    const double target_rate = ref.rate(t + horizon);

    const std::size_t i = state.f_series.size() - 1;
    TrendEstimate f_trend = state.y_dot_estimator.estimate(state.f_series, i);
    const std::size_t window = state.y_dot_estimator.config().window_samples;
    f_trend.warmup = f_trend.warmup || i < state.first_full_f + window - 1;
    HorizonForecast f_hat = horizon_forecast(f_trend, t, state.dt, state.horizon_steps());
    for (double& v : f_hat.path)
        v += forecast_offset;
    f_hat.point += forecast_offset;

    ControlDecision out;
    out.forecast = f_hat.point;
    out.warmup = f_hat.warmup || state.decisions() < state.horizon_steps();
    double u = 0.0;
    if (out.warmup) {
        out.predicted_output = target;
        u = (target_rate + f_hat.point) / params.alpha;
    } else {
        out.predicted_output = predict_output(state, y_now, params, f_hat.path);
        out.predicted_error = out.predicted_output - target;
        u = (target_rate + f_hat.point - params.gain * out.predicted_error) / params.alpha;
    }
    out.u = finish(u, params);
    record_control(state, out.u);
    return out;
}

} // namespace invctl
