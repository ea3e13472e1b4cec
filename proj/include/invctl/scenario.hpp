#pragma once

#include "invctl/control.hpp"
#include "invctl/estimation.hpp"
#include "invctl/noise.hpp"
#include "invctl/plant.hpp"
#include "invctl/timeseries.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace invctl {

/// Piecewise-constant base demand plus additive noise switched on at
/// noise_start.
struct DemandProgram {
    struct Step {
        double t;
        double level;
        bool operator==(const Step&) const = default;
    };

    std::vector<Step> steps{{0.0, 0.0}};
    NoiseSpec noise;
    double noise_start = 0.0;

    double base(double t) const;
    void validate() const;

    bool operator==(const DemandProgram&) const = default;
};

struct ScenarioConfig {
    std::string id = "custom";
    std::string description;
    PlantParams plant;
    ControllerParams controller;
    EstimatorConfig estimator;
    Reference reference;
    DemandProgram demand;
    double duration = 100.0;
    std::uint64_t seed = 1;
    double steady_fraction = 0.2; // tail of the run used for steady-state metrics

    void validate() const;
    std::size_t steps() const; // duration / dt

    bool operator==(const ScenarioConfig&) const = default;
};

struct Metrics {
    double tracking_rmse = 0.0;      // RMS of y - y* after warm-up
    double steady_state_error = 0.0; // mean of y - y* over the steady window
    std::optional<double> bullwhip_ratio; // Var(u) / Var(d) after warm-up; empty when Var(d) = 0
    double control_variance = 0.0;   // Var(u) after warm-up
    double drift_slope = 0.0;        // least-squares slope of y - y* after warm-up
    double tracking_error_sup = 0.0; // max |y - y*| after warm-up
    double steady_envelope = 0.0;    // max |y - y*| over the steady window
    double reference_amplitude = 0.0;
    std::size_t warmup_samples = 0;
    std::size_t steady_begin = 0;    // first sample index of the steady window
};

struct RunResult {
    std::string id;
    ControllerVariant variant = ControllerVariant::smith_p;
    TimeSeries u{0.0, 1.0};
    TimeSeries y{0.0, 1.0};
    TimeSeries y_ref{0.0, 1.0};
    TimeSeries d{0.0, 1.0};
    TimeSeries d_forecast{0.0, 1.0}; // raw d_hat(t + L) issued at t
    TimeSeries f_forecast{0.0, 1.0}; // F_hat(t + L) issued at t; empty for smith_p
    std::vector<std::uint8_t> warmup;
    Metrics metrics;

    std::size_t size() const { return y.size(); }
};

/// Full closed-loop simulation on the grid 0, dt, ..., duration. Deterministic
/// for a fixed config. Errors from the components are rethrown with the
/// scenario id prepended.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Runs independent scenarios concurrently; results come back in input order.
std::vector<RunResult> run_suite(std::span<const ScenarioConfig> configs);

/// Population variances; all metrics skip warm-up samples. Throws if every
/// sample is warm-up.
Metrics compute_metrics(const TimeSeries& u, const TimeSeries& y, const TimeSeries& y_ref, const TimeSeries& d,
                        std::span<const std::uint8_t> warmup, double steady_fraction = 0.2);

/// Open-loop biased feedforward u = (demand_level + bias) / k against constant
/// demand, inventory clamp off. The reference is held at y(L), so drift_slope
/// is the inventory drift measured over t >= L.
Metrics bias_drift_experiment(double bias, const PlantParams& plant, double duration, double demand_level = 10.0);

struct SweepRow {
    double gain;
    Metrics metrics;
};

/// Re-runs cfg for each K_p with forecasts corrupted by uniform error in
/// [-bound, bound]; every run uses cfg.seed.
std::vector<SweepRow> gain_sweep(const ScenarioConfig& cfg, std::span<const double> gains, double bound);

struct ShockRecovery {
    double shock_time;
    double envelope;                     // pre-shock max |y - y*|, floored
    std::optional<double> recovery_time; // empty if the error never settles back
};

/// For every demand step after warm-up: the time until |y - y*| re-enters
/// and stays inside its pre-shock envelope. The envelope is the max error
/// over `lookback` days before the step, floored at floor_fraction of the
/// reference amplitude.
std::vector<ShockRecovery> shock_recovery(const RunResult& result, const DemandProgram& demand, double lookback = 5.0,
                                          double floor_fraction = 0.01);

} // namespace invctl
