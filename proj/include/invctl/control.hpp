#pragma once

#include "invctl/estimation.hpp"
#include "invctl/timeseries.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace invctl {

enum class ControllerVariant { smith_p, model_free_ip };

// Where the controller's demand forecast comes from. `exact` feeds the true
// future demand and exists to isolate controller behaviour in tests.
enum class ForecastSource { estimated, exact };

std::string to_string(ControllerVariant v);
std::string to_string(ForecastSource s);

struct ControllerParams {
    ControllerVariant variant = ControllerVariant::smith_p;
    double k_model = 1.0;     // yield the model-based controller believes in
    double sigma_model = 0.0; // believed decay rate (smith_p only)
    double alpha = 1.0;       // ultra-local model input gain (model_free_ip only)
    double gain = 0.1;        // K_p
    bool clamp_u = true;
    ForecastSource forecast_source = ForecastSource::estimated;
    // Half-width of a uniform error added to every forecast the controller
    // consumes; 0 disables the injection.
    double forecast_error_bound = 0.0;
    // Days each drawn error is held before the next draw; 0 draws afresh at
    // every step, inf draws once for the whole run.
    double forecast_error_hold = 0.0;

    void validate() const;
    bool operator==(const ControllerParams&) const = default;
};

/// Piecewise-linear reference trajectory, held constant outside its knots.
/// rate() is the right derivative, so it is exact on every sampling step
/// whose start lies on a knot.
class Reference {
public:
    struct Knot {
        double t;
        double value;
        bool operator==(const Knot&) const = default;
    };

    Reference() : Reference(std::vector<Knot>{{0.0, 0.0}}) {}
    explicit Reference(std::vector<Knot> knots);

    static Reference constant(double value) { return Reference({{0.0, value}}); }

    double value(double t) const;
    double rate(double t) const;
    double amplitude() const;

    const std::vector<Knot>& knots() const { return knots_; }

    bool operator==(const Reference&) const = default;

private:
    std::vector<Knot> knots_;
};

/// A signal's forecast over one prediction horizon of `steps` samples.
/// path[k] is the value used on the Euler step that starts at t + k dt, and
/// point is the value at t + L.
struct HorizonForecast {
    std::vector<double> path;
    double point = 0.0;
    bool warmup = false;
};

/// Frozen-estimate horizon starting at t_now: path[k] extrapolates est to
/// t_now + k dt and point to t_now + steps dt. When the estimate ends at
/// t_now this is the right-edge value followed by forecast_path(est, dt,
/// steps - 1), and point is forecast(est, steps dt).
HorizonForecast horizon_forecast(const TrendEstimate& est, double t_now, double dt, std::size_t steps);

struct ControllerState {
    double dt;
    DelayLine control_history; // the last L/dt issued controls, oldest first
    TrendEstimator y_dot_estimator;
    // Integral of the input reaching the plant, on the output's grid.
    TimeSeries delivered_input;
    double last_delivered = 0.0;
    // F estimates, one per decision instant. Each is a kernel-weighted average
    // over its window, so the series is stamped f_lag earlier than the
    // decision instant it was computed at.
    TimeSeries f_series;
    double f_lag = 0.0;
    std::size_t first_full_f = 0; // first f_series index computed from a full window

    std::size_t horizon_steps() const { return control_history.depth(); }
    std::size_t decisions() const { return control_history.pushes(); }
};

ControllerState make_controller_state(const ControllerParams& params, double lead_time, double dt,
                                      const EstimatorConfig& y_dot_estimator);

void record_control(ControllerState& state, double u);

/// Output predicted one lead time ahead by integrating the controller's
/// model over the horizon with the controls already in the pipeline.
/// smith_p:       dy = -sigma_model y + k_model u - d_hat
/// model_free_ip: dy = alpha u - F_hat
/// `path` holds d_hat or F_hat per horizon step and must have L/dt entries.
double predict_output(const ControllerState& state, double y_now, const ControllerParams& params,
                      std::span<const double> path);

struct ControlDecision {
    double u = 0.0;
    double predicted_output = 0.0; // y_hat(t + L); equals the reference during warm-up
    double predicted_error = 0.0;  // e_hat(t + L)
    double forecast = 0.0;         // d_hat(t + L) or F_hat(t + L) actually used
    bool warmup = false;
};

/// Model-based P law behind a Smith predictor:
///     u = (y*'(t+L) + sigma_model y_hat + d_hat(t+L) - K_p e_hat(t+L)) / k_model
/// Demand forecasts are clamped at zero before use. Records u in the control
/// history. During warm-up (short history or warm-up forecast) the feedback
/// term is dropped.
ControlDecision control_smith_p(double y_now, const Reference& ref, double t, ControllerState& state,
                                const ControllerParams& params, const HorizonForecast& demand);
ControlDecision control_smith_p(double y_now, const Reference& ref, double t, ControllerState& state,
                                const ControllerParams& params, const TrendEstimate& d_estimate);

struct FEstimate {
    double value = 0.0;
    bool warmup = false;
};

// F(t) = alpha u(t - L) - y'(t) on the ultra-local model. Both terms go
// through the same slope kernel: F is minus the trend slope of
// y - alpha * (integral of delivered input), which keeps the input and the
// output derivative time-aligned. During estimator warm-up the raw
// alpha u(t - L) is used with a zero slope. y must hold one more sample than
// state.f_series; the estimate is appended to state.f_series.
FEstimate estimate_F(ControllerState& state, const TimeSeries& y, const ControllerParams& params);

/// Intelligent proportional law on the ultra-local model:
///     u = (y*'(t+L) + F_hat(t+L) - K_p e_hat(t+L)) / alpha
/// F_hat extrapolates the trend of state.f_series (taking its time stamps
/// into account); `forecast_offset` is added to the whole F_hat horizon (used
/// for forecast-error injection).
ControlDecision control_model_free_ip(double y_now, const Reference& ref, double t, ControllerState& state,
                                      const ControllerParams& params, double forecast_offset = 0.0);

} // namespace invctl
