#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace invctl {

struct NoiseSpec {
    enum class Kind { none, uniform, gaussian };

    Kind kind = Kind::none;
    // uniform: [first, second] = [lo, hi]; gaussian: (mean, std).
    double first = 0.0;
    double second = 0.0;

    static NoiseSpec none() { return {}; }
    static NoiseSpec uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
    static NoiseSpec gaussian(double mean, double std) { return {Kind::gaussian, mean, std}; }

    void validate() const;

    /// "none", "uniform(lo,hi)" or "gaussian(mean,std)".
    std::string to_string() const;
    static NoiseSpec parse(const std::string& text);

    bool operator==(const NoiseSpec&) const = default;
};

/// Seeded noise stream.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The conversion to doubles is done here rather than through the
/// <random> distributions, which are implementation-defined: uniform samples
/// take the top 53 bits, gaussian samples use Box-Muller and keep both
/// outputs of each pair.
class NoiseSource {
public:
    NoiseSource(NoiseSpec spec, std::uint64_t seed);

    double next();

    const NoiseSpec& spec() const { return spec_; }

private:
    double unit();

    NoiseSpec spec_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

} // namespace invctl
