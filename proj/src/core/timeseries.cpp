#include "invctl/timeseries.hpp"

#include "invctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace invctl {

TimeSeries::TimeSeries(double start_time, double dt, std::vector<double> values)
    : start_(start_time), dt_(dt), values_(std::move(values))
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidArgument("time series step must be positive and finite, got " + std::to_string(dt));
    if (!std::isfinite(start_time))
        throw InvalidArgument("time series start must be finite");
}

double TimeSeries::at(std::size_t i) const
{
    if (i >= values_.size())
        throw InvalidArgument("sample index " + std::to_string(i) + " out of range (size " +
                              std::to_string(values_.size()) + ")");
    return values_[i];
}

bool TimeSeries::same_grid(const TimeSeries& other) const
{
    return start_ == other.start_ && dt_ == other.dt_ && values_.size() == other.values_.size();
}

namespace {

void require_same_grid(const TimeSeries& a, const TimeSeries& b)
{
    if (!a.same_grid(b))
        throw GridMismatch("series are not on the same grid (start " + std::to_string(a.start_time()) + "/" +
                           std::to_string(b.start_time()) + ", dt " + std::to_string(a.dt()) + "/" +
                           std::to_string(b.dt()) + ", size " + std::to_string(a.size()) + "/" +
                           std::to_string(b.size()) + ")");
}

template <class Op>
TimeSeries zip(const TimeSeries& a, const TimeSeries& b, Op op)
{
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = op(a[i], b[i]);
    return TimeSeries(a.start_time(), a.dt(), std::move(out));
}

} // namespace

TimeSeries operator+(const TimeSeries& a, const TimeSeries& b)
{
    return zip(a, b, [](double x, double y) { return x + y; });
}

TimeSeries operator-(const TimeSeries& a, const TimeSeries& b)
{
    return zip(a, b, [](double x, double y) { return x - y; });
}

TimeSeries operator*(double k, const TimeSeries& a)
{
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out)
        v *= k;
    return TimeSeries(a.start_time(), a.dt(), std::move(out));
}

DelayLine::DelayLine(std::size_t depth, double fill) : buffer_(depth, fill)
{
    if (depth == 0)
        throw InvalidArgument("delay line depth must be at least one sample");
}

DelayLine DelayLine::for_lead_time(double lead_time, double dt, double fill)
{
    return DelayLine(delay_samples(lead_time, dt), fill);
}

double DelayLine::push_read(double value)
{
    const double out = buffer_[head_];
    buffer_[head_] = value;
    head_ = (head_ + 1) % buffer_.size();
    ++pushes_;
    return out;
}

double DelayLine::at(std::size_t k) const
{
    if (k >= buffer_.size())
        throw InvalidArgument("delay line slot " + std::to_string(k) + " out of range");
    return buffer_[(head_ + k) % buffer_.size()];
}

std::vector<double> DelayLine::snapshot() const
{
    std::vector<double> out(buffer_.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = buffer_[(head_ + k) % buffer_.size()];
    return out;
}

std::size_t delay_samples(double lead_time, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidArgument("sampling step must be positive");
    if (!(lead_time > 0.0) || !std::isfinite(lead_time))
        throw InvalidArgument("lead time must be positive, got " + std::to_string(lead_time));
    const double ratio = lead_time / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("lead time " + std::to_string(lead_time) + " is not a whole multiple of dt " +
                              std::to_string(dt));
    return static_cast<std::size_t>(rounded);
}

std::vector<double> trapezoid_weights(std::size_t n, double dt)
{
    if (n < 2)
        throw InvalidArgument("trapezoid rule needs at least two samples");
    std::vector<double> w(n, dt);
    w.front() = 0.5 * dt;
    w.back() = 0.5 * dt;
    return w;
}

double integrate_window(const TimeSeries& x, std::size_t i_lo, std::size_t i_hi)
{
    if (i_hi >= x.size())
        throw InvalidArgument("integration window end " + std::to_string(i_hi) + " out of range (size " +
                              std::to_string(x.size()) + ")");
    if (i_lo >= i_hi)
        throw InvalidArgument("integration window is empty");
    double interior = 0.0;
    for (std::size_t i = i_lo + 1; i < i_hi; ++i)
        interior += x[i];
    return x.dt() * (0.5 * (x[i_lo] + x[i_hi]) + interior);
}

} // namespace invctl
