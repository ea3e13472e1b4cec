#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace invctl {

/// Uniformly sampled scalar signal. Sample i sits at start_time() + i * dt().
///
/// Arithmetic between two series is only defined on an identical grid (same
/// start, step and length); anything else throws GridMismatch. There is no
/// implicit resampling anywhere in the library.
class TimeSeries {
public:
    TimeSeries(double start_time, double dt, std::vector<double> values = {});

    double start_time() const { return start_; }
    double dt() const { return dt_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double time_at(std::size_t i) const { return start_ + static_cast<double>(i) * dt_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double at(std::size_t i) const;

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    void push_back(double v) { values_.push_back(v); }
    void reserve(std::size_t n) { values_.reserve(n); }

    bool same_grid(const TimeSeries& other) const;

private:
    double start_;
    double dt_;
    std::vector<double> values_;
};

TimeSeries operator+(const TimeSeries& a, const TimeSeries& b);
TimeSeries operator-(const TimeSeries& a, const TimeSeries& b);
TimeSeries operator*(double k, const TimeSeries& a);

/// Fixed-depth FIFO. push_read(v) stores v and returns the value pushed
/// `depth` pushes earlier, or the fill value while the history is shorter.
class DelayLine {
public:
    explicit DelayLine(std::size_t depth, double fill = 0.0);

    /// Builds a line whose depth is lead_time / dt. Throws InvalidArgument if
    /// the ratio is not a positive integer.
    static DelayLine for_lead_time(double lead_time, double dt, double fill = 0.0);

    double push_read(double value);

    std::size_t depth() const { return buffer_.size(); }
    std::size_t pushes() const { return pushes_; }

    /// k-th stored value, oldest first; k in [0, depth). at(0) is what the
    /// next push_read will return.
    double at(std::size_t k) const;

    std::vector<double> snapshot() const;

private:
    std::vector<double> buffer_;
    std::size_t head_ = 0;
    std::size_t pushes_ = 0;
};

/// Number of whole samples in lead_time / dt. Throws unless the ratio is a
/// positive integer (within 1e-9 relative).
std::size_t delay_samples(double lead_time, double dt);

/// Composite trapezoid weights for n equally spaced samples.
std::vector<double> trapezoid_weights(std::size_t n, double dt);

/// Trapezoid approximation of the integral of x over [t(i_lo), t(i_hi)].
double integrate_window(const TimeSeries& x, std::size_t i_lo, std::size_t i_hi);

} // namespace invctl
