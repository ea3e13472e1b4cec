#include "invctl/estimation.hpp"

#include "invctl/errors.hpp"

#include <cmath>
#include <string>

namespace invctl {

void EstimatorConfig::validate() const
{
    if (window_samples < 3)
        throw InvalidArgument("estimator window needs at least 3 samples, got " + std::to_string(window_samples));
    if (integration_order < 2)
        throw InvalidArgument("integration order must be >= 2, got " + std::to_string(integration_order));
}

namespace {

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i)
        f *= i;
    return f;
}

// (T - tau)^k / k!, with the k = 0 case equal to 1.
double falling_power(double T, double tau, int k)
{
    return std::pow(T - tau, k) / factorial(k);
}

} // namespace

KernelPair::KernelPair(int integration_order, double span)
    : order_(integration_order), mult_(integration_order + 1), span_(span)
{
    if (integration_order < 2)
        throw InvalidArgument("integration order must be >= 2");
    if (!(span > 0.0) || !std::isfinite(span))
        throw InvalidArgument("estimation window must have positive length, got " + std::to_string(span));
    // Right-hand sides of the two transformed identities:
    //   int annihilator * x = a0 T^(m-1)/(m-1)!
    //   int plain * x       = a0 T^(m-2)/(m-2)! + a1 T^(m-1)/(m-1)!
    mass_a_ = std::pow(span_, mult_ - 1) / factorial(mult_ - 1);
    mass_b_ = std::pow(span_, mult_ - 2) / factorial(mult_ - 2);
}

double KernelPair::annihilator(double tau) const
{
    return 2.0 * falling_power(span_, tau, mult_ - 2) - tau * falling_power(span_, tau, mult_ - 3);
}

double KernelPair::plain(double tau) const
{
    return falling_power(span_, tau, mult_ - 3);
}

double KernelPair::intercept(double tau) const
{
    return annihilator(tau) / mass_a_;
}

double KernelPair::slope(double tau) const
{
    return (plain(tau) - mass_b_ * intercept(tau)) / mass_a_;
}

KernelPair derive_kernel_weights(const EstimatorConfig& cfg, double span)
{
    cfg.validate();
    return KernelPair(cfg.integration_order, span);
}

TrendEstimator::TrendEstimator(EstimatorConfig cfg, double dt) : cfg_(cfg), dt_(dt)
{
    cfg_.validate();
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidArgument("estimator step must be positive");
    const std::size_t n = cfg_.window_samples;
    span_ = static_cast<double>(n - 1) * dt_;
    const KernelPair kernels(cfg_.integration_order, span_);
    const std::vector<double> q = trapezoid_weights(n, dt_);

    std::vector<double> ga(n), gb(n);
    // Discrete moments of the raw kernels against the model basis {1, tau}.
    double a0 = 0.0, a1 = 0.0, b0 = 0.0, b1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double tau = static_cast<double>(j) * dt_;
        ga[j] = q[j] * kernels.annihilator(tau);
        gb[j] = q[j] * kernels.plain(tau);
        a0 += ga[j];
        a1 += ga[j] * tau;
        b0 += gb[j];
        b1 += gb[j] * tau;
    }
    const double det = a0 * b1 - a1 * b0;
    if (!(std::abs(det) > 0.0))
        throw InvalidArgument("estimator moment system is singular");

    end_weights_.resize(n);
    slope_weights_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double c0 = (b1 * ga[j] - a1 * gb[j]) / det; // intercept at window start
        const double c1 = (a0 * gb[j] - b0 * ga[j]) / det; // slope
        slope_weights_[j] = c1;
        end_weights_[j] = c0 + span_ * c1;
    }

    // Increment m (from tau_m to tau_m+1) carries weight dt * sum_{j>m} c_j.
    double tail = 0.0, centre = 0.0;
    for (std::size_t m = n - 1; m-- > 0;) {
        tail += slope_weights_[m + 1];
        centre += dt_ * tail * static_cast<double>(m) * dt_;
    }
    slope_lag_ = span_ - centre;
}

TrendEstimate TrendEstimator::estimate(std::span<const double> samples, std::size_t end_index, double end_time) const
{
    if (end_index >= samples.size())
        throw InvalidArgument("estimate index " + std::to_string(end_index) + " out of range (size " +
                              std::to_string(samples.size()) + ")");
    const std::size_t n = cfg_.window_samples;
    if (end_index + 1 < n)
        return {samples[end_index], 0.0, end_time, true};

    const std::size_t first = end_index + 1 - n;
    double value = 0.0;
    double slope = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        value += end_weights_[j] * samples[first + j];
        slope += slope_weights_[j] * samples[first + j];
    }
    return {value, slope, end_time, false};
}

TrendEstimate TrendEstimator::estimate(const TimeSeries& x, std::size_t end_index) const
{
    if (x.dt() != dt_)
        throw GridMismatch("series step does not match the estimator step");
    if (end_index >= x.size())
        throw InvalidArgument("estimate index " + std::to_string(end_index) + " out of range (size " +
                              std::to_string(x.size()) + ")");
    return estimate(x.values(), end_index, x.time_at(end_index));
}

TrendEstimate estimate_trend(const TimeSeries& x, std::size_t end_index, const EstimatorConfig& cfg)
{
    return TrendEstimator(cfg, x.dt()).estimate(x, end_index);
}

Decomposition decompose(const TimeSeries& x, const EstimatorConfig& cfg)
{
    cfg.validate();
    if (x.size() < cfg.window_samples)
        throw InvalidArgument("series shorter than one estimation window (" + std::to_string(x.size()) + " < " +
                              std::to_string(cfg.window_samples) + ")");
    const TrendEstimator est(cfg, x.dt());
    std::vector<double> trend(x.size()), fluct(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        trend[i] = est.estimate(x, i).mean_at_end;
        fluct[i] = x[i] - trend[i];
    }
    return {TimeSeries(x.start_time(), x.dt(), std::move(trend)),
            TimeSeries(x.start_time(), x.dt(), std::move(fluct))};
}

} // namespace invctl
