#include "invctl/fixtures.hpp"

#include <cmath>

namespace invctl {

namespace {

// Smoothstep 3x^2 - 2x^3 from 0 to `level`, starting at `start` and lasting
// `rise` days, sampled into piecewise-linear knots.
Reference smoothed_step(double start, double rise, double level)
{
    constexpr int pieces = 40;
    std::vector<Reference::Knot> knots{{0.0, 0.0}};
    for (int j = 0; j <= pieces; ++j) {
        const double x = static_cast<double>(j) / pieces;
        // Rounded so the shipped config files stay readable.
        const double v = level * x * x * (3.0 - 2.0 * x);
        knots.push_back({start + rise * x, std::round(v * 1e6) / 1e6});
    }
    return Reference(std::move(knots));
}

ScenarioConfig classic(std::string id, std::string description)
{
    ScenarioConfig c;
    c.id = std::move(id);
    c.description = std::move(description);
    c.plant = {.yield_k = 0.95, .decay_sigma = 0.0, .lead_time = 5.0, .dt = 1.0, .y0 = 0.0, .clamp_inventory = true};
    c.controller.k_model = 0.95;
    c.controller.gain = 0.1;
    c.estimator.window_samples = 10;
    c.estimator.integration_order = 2;
    c.reference = smoothed_step(10.0, 40.0, 100.0);
    // Constant opening portion, then uniform white noise in [-1, 1].
    c.demand.steps = {{0.0, 10.0}};
    c.demand.noise = NoiseSpec::uniform(-1.0, 1.0);
    c.demand.noise_start = 30.0;
    c.duration = 150.0;
    c.seed = 42;
    return c;
}

ScenarioConfig perishable(std::string id, std::string description, double sigma)
{
    ScenarioConfig c;
    c.id = std::move(id);
    c.description = std::move(description);
    c.plant = {.yield_k = 1.0, .decay_sigma = sigma, .lead_time = 7.0, .dt = 0.1, .y0 = 0.0, .clamp_inventory = true};
    c.controller.variant = ControllerVariant::model_free_ip;
    c.controller.alpha = 1.0;
    c.controller.gain = 0.1;
    // A short window keeps the F estimate's lag small; the gentle rise keeps
    // the curvature the linear F extrapolation cannot follow small.
    c.estimator.window_samples = 10;
    c.estimator.integration_order = 2;
    c.reference = smoothed_step(10.0, 120.0, 100.0);
    c.demand.steps = {{0.0, 0.0}};
    c.demand.noise = NoiseSpec::none();
    c.duration = 200.0;
    c.seed = 42;
    return c;
}

std::vector<ScenarioConfig> make_all()
{
    std::vector<ScenarioConfig> out;

    out.push_back(classic("S1", "classic plant, Smith predictor + P, exact yield model"));

    ScenarioConfig s2 = classic("S2", "classic plant, Smith predictor + P, yield model 10% low");
    s2.controller.k_model = 0.95 * 0.9;
    out.push_back(s2);

    ScenarioConfig s3 = classic("S3", "classic plant, model-free iP (alpha = 1)");
    s3.controller.variant = ControllerVariant::model_free_ip;
    s3.controller.k_model = 0.95 * 0.9;
    s3.controller.alpha = 1.0;
    out.push_back(s3);

    out.push_back(perishable("S4", "perishable plant, sigma = 0.08, no demand", 0.08));
    out.push_back(perishable("S5", "perishable plant, sigma = 0.06, no demand", 0.06));
    out.push_back(perishable("S6", "perishable plant, sigma = 0.1, no demand", 0.1));

    // The iP loop settles slowly after a jump in F, so the steps are far apart.
    ScenarioConfig s7 = perishable("S7", "perishable plant, demand with violent steps", 0.08);
    s7.demand.steps = {{0.0, 10.0}, {150.0, 30.0}, {450.0, 5.0}, {750.0, 25.0}, {1050.0, 10.0}};
    s7.duration = 1350.0;
    out.push_back(s7);

    ScenarioConfig s8 = perishable("S8", "perishable plant, demand 30 + gaussian noise (std 10)", 0.08);
    s8.demand.steps = {{0.0, 30.0}};
    s8.demand.noise = NoiseSpec::gaussian(0.0, 10.0);
    s8.demand.noise_start = 0.0;
    // Ten days of data per estimate; shorter windows let the noise through
    // the F extrapolation and the u >= 0 clamp turns it into a bias.
    s8.estimator.window_samples = 100;
    out.push_back(s8);

    return out;
}

} // namespace

const std::vector<ScenarioConfig>& builtin_scenarios()
{
    static const std::vector<ScenarioConfig> all = make_all();
    return all;
}

std::optional<ScenarioConfig> find_builtin(std::string_view id)
{
    for (const ScenarioConfig& c : builtin_scenarios())
        if (c.id == id)
            return c;
    return std::nullopt;
}

} // namespace invctl
