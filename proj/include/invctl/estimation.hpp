#pragma once

#include "invctl/timeseries.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace invctl {

enum class WarmupPolicy { hold_last_sample_zero_slope };

struct EstimatorConfig {
    std::size_t window_samples = 10;
    int integration_order = 2;
    WarmupPolicy warmup = WarmupPolicy::hold_last_sample_zero_slope;

    void validate() const;
    bool operator==(const EstimatorConfig&) const = default;
};

/// Local affine trend referenced to the right edge of the window.
struct TrendEstimate {
    double mean_at_end = 0.0;
    double slope = 0.0;
    double window_end_time = 0.0;
    bool warmup = false;
};

/// Continuous integral kernels of the windowed affine estimator.
///
/// The local model x(tau) = a0 + a1 tau on [0, T] is written in the operator
/// domain, its identity and its s-derivative are multiplied by
/// s^-(order + 1), and the resulting triangular system is solved for a0 and
/// a1. Every term then is a proper iterated integral of x, which is where the
/// noise attenuation comes from. Order 2 reproduces the continuous
/// least-squares line fit; higher orders weight the window's far end less.
class KernelPair {
public:
    KernelPair(int integration_order, double span);

    /// w0: a0 = integral of w0(tau) x(tau) over [0, T].
    double intercept(double tau) const;
    /// w1: a1 = integral of w1(tau) x(tau) over [0, T].
    double slope(double tau) const;

    /// The two raw kernels before the triangular solve. annihilator() comes
    /// from the differentiated identity (its moment against tau vanishes),
    /// plain() from the undifferentiated one.
    double annihilator(double tau) const;
    double plain(double tau) const;

    /// Analytic moments of the raw kernels against 1 (the triangular system's
    /// diagonal and sub-diagonal).
    double annihilator_mass() const { return mass_a_; }
    double plain_mass() const { return mass_b_; }

    double span() const { return span_; }
    int integration_order() const { return order_; }

private:
    int order_;
    int mult_; // order + 1
    double span_;
    double mass_a_;
    double mass_b_;
};

/// Throws InvalidArgument if span <= 0 or the config is invalid.
KernelPair derive_kernel_weights(const EstimatorConfig& cfg, double span);

/// Discrete sliding-window estimator for a fixed (config, dt).
///
/// Sample weights are the trapezoid discretisation of the kernels, corrected
/// by solving the 2x2 system with discrete moments so that affine signals are
/// reproduced to rounding error on any grid.
class TrendEstimator {
public:
    TrendEstimator(EstimatorConfig cfg, double dt);

    const EstimatorConfig& config() const { return cfg_; }
    double dt() const { return dt_; }
    double span() const { return span_; }

    TrendEstimate estimate(std::span<const double> samples, std::size_t end_index, double end_time) const;
    TrendEstimate estimate(const TimeSeries& x, std::size_t end_index) const;

    /// Per-sample weights (oldest first) producing the right-edge value and
    /// the slope as inner products with the window.
    std::span<const double> end_value_weights() const { return end_weights_; }
    std::span<const double> slope_weights() const { return slope_weights_; }

    /// How far before the window's right edge the slope estimate is centred:
    /// the slope is a weighted mean of the per-step increments, and this is
    /// right edge minus the weighted mean start time of those steps.
    double slope_lag() const { return slope_lag_; }

private:
    EstimatorConfig cfg_;
    double dt_;
    double span_;
    std::vector<double> end_weights_;
    std::vector<double> slope_weights_;
    double slope_lag_ = 0.0;
};

TrendEstimate estimate_trend(const TimeSeries& x, std::size_t end_index, const EstimatorConfig& cfg);

struct Decomposition {
    TimeSeries trend;
    TimeSeries fluctuation;
};

/// trend[i] is the right-edge estimate at i; fluctuation = x - trend.
Decomposition decompose(const TimeSeries& x, const EstimatorConfig& cfg);

} // namespace invctl
