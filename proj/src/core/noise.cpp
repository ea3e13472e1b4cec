#include "invctl/noise.hpp"

#include "invctl/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace invctl {

void NoiseSpec::validate() const
{
    switch (kind) {
    case Kind::none:
        return;
    case Kind::uniform:
        if (!std::isfinite(first) || !std::isfinite(second) || first > second)
            throw InvalidArgument("uniform noise needs finite lo <= hi");
        return;
    case Kind::gaussian:
        if (!std::isfinite(first) || !std::isfinite(second) || second < 0.0)
            throw InvalidArgument("gaussian noise needs a finite mean and non-negative std");
        return;
    }
}

std::string NoiseSpec::to_string() const
{
    auto num = [](double v) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ptr);
    };
    switch (kind) {
    case Kind::none:
        break;
    case Kind::uniform:
        return "uniform(" + num(first) + "," + num(second) + ")";
    case Kind::gaussian:
        return "gaussian(" + num(first) + "," + num(second) + ")";
    }
    return "none";
}

namespace {

double parse_number(std::string_view s, const std::string& whole)
{
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InvalidArgument("bad number in noise spec '" + whole + "'");
    return v;
}

} // namespace

NoiseSpec NoiseSpec::parse(const std::string& text)
{
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    if (s == "none")
        return none();

    const auto open = s.find('(');
    const auto comma = s.find(',');
    if (open == std::string_view::npos || comma == std::string_view::npos || s.back() != ')' || comma < open)
        throw InvalidArgument("noise spec must be none, uniform(lo,hi) or gaussian(mean,std); got '" + text + "'");
    const auto name = s.substr(0, open);
    const double a = parse_number(s.substr(open + 1, comma - open - 1), text);
    const double b = parse_number(s.substr(comma + 1, s.size() - comma - 2), text);

    NoiseSpec spec;
    if (name == "uniform")
        spec = uniform(a, b);
    else if (name == "gaussian")
        spec = gaussian(a, b);
    else
        throw InvalidArgument("unknown noise kind '" + std::string(name) + "'");
    spec.validate();
    return spec;
}

NoiseSource::NoiseSource(NoiseSpec spec, std::uint64_t seed) : spec_(spec), engine_(seed)
{
    spec_.validate();
}

double NoiseSource::unit()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NoiseSource::next()
{
    switch (spec_.kind) {
    case NoiseSpec::Kind::none:
        return 0.0;
    case NoiseSpec::Kind::uniform: {
        const double v = spec_.first + (spec_.second - spec_.first) * unit();
        return v > spec_.second ? spec_.second : v;
    }
    case NoiseSpec::Kind::gaussian: {
        if (spare_) {
            const double z = *spare_;
            spare_.reset();
            return spec_.first + spec_.second * z;
        }
        const double u1 = 1.0 - unit(); // (0, 1]
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        return spec_.first + spec_.second * r * std::cos(phi);
    }
    }
    return 0.0;
}

} // namespace invctl
