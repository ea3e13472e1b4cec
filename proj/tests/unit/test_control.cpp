#include "invctl/control.hpp"
#include "invctl/errors.hpp"
#include "invctl/plant.hpp"
#include "invctl/scenario.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace invctl;
using Catch::Approx;

namespace {

ControllerParams smith(double k_model, double gain)
{
    ControllerParams p;
    p.k_model = k_model;
    p.gain = gain;
    return p;
}

ControllerParams ip(double alpha, double gain)
{
    ControllerParams p;
    p.variant = ControllerVariant::model_free_ip;
    p.alpha = alpha;
    p.gain = gain;
    return p;
}

EstimatorConfig window(std::size_t w)
{
    EstimatorConfig c;
    c.window_samples = w;
    return c;
}

HorizonForecast flat(double v, std::size_t steps)
{
    return {std::vector<double>(steps, v), v, false};
}

// Closed-loop scenario on a noise-free plant with a smoothed rise to 100.
ScenarioConfig loop(ControllerVariant variant, double plant_k, double sigma, double dt, double lead)
{
    ScenarioConfig c;
    c.id = "loop";
    c.plant = {.yield_k = plant_k, .decay_sigma = sigma, .lead_time = lead, .dt = dt, .y0 = 0.0,
               .clamp_inventory = true};
    c.controller.variant = variant;
    c.controller.k_model = 1.0;
    c.controller.sigma_model = sigma;
    c.controller.gain = 0.1;
    c.estimator.window_samples = 10;
    std::vector<Reference::Knot> knots{{0.0, 0.0}};
    for (int j = 0; j <= 20; ++j) {
        const double x = j / 20.0;
        knots.push_back({10.0 + 100.0 * x, 100.0 * x * x * (3.0 - 2.0 * x)});
    }
    c.reference = Reference(knots);
    c.demand.steps = {{0.0, 10.0}};
    c.duration = 400.0;
    return c;
}

double tail_mean(const TimeSeries& s, std::size_t count)
{
    double sum = 0.0;
    for (std::size_t i = s.size() - count; i < s.size(); ++i)
        sum += s[i];
    return sum / static_cast<double>(count);
}

} // namespace

TEST_CASE("reference is piecewise linear and flat outside its knots")
{
    const Reference r({{10.0, 0.0}, {30.0, 100.0}, {40.0, 100.0}});
    CHECK(r.value(0.0) == 0.0);
    CHECK(r.value(20.0) == Approx(50.0));
    CHECK(r.value(35.0) == 100.0);
    CHECK(r.value(1e6) == 100.0);
    CHECK(r.rate(5.0) == 0.0);
    CHECK(r.rate(10.0) == Approx(5.0)); // right derivative at the knot
    CHECK(r.rate(29.9) == Approx(5.0));
    CHECK(r.rate(30.0) == 0.0);
    CHECK(r.rate(40.0) == 0.0);
    CHECK(r.amplitude() == 100.0);
    CHECK(Reference::constant(7.0).value(3.0) == 7.0);
    CHECK(Reference::constant(7.0).amplitude() == 0.0);

    CHECK_THROWS_AS(Reference(std::vector<Reference::Knot>{}), InvalidArgument);
    CHECK_THROWS_AS(Reference({{1.0, 0.0}, {1.0, 2.0}}), InvalidArgument);
    CHECK_THROWS_AS(Reference({{0.0, NAN}}), InvalidArgument);
}

TEST_CASE("controller parameter validation")
{
    CHECK_NOTHROW(smith(0.95, 0.1).validate());
    CHECK_THROWS_AS(smith(0.0, 0.1).validate(), InvalidArgument);
    CHECK_THROWS_AS(smith(1.0, -0.1).validate(), InvalidArgument);
    CHECK_THROWS_AS(ip(0.0, 0.1).validate(), InvalidArgument);
    ControllerParams exact_ip = ip(1.0, 0.1);
    exact_ip.forecast_source = ForecastSource::exact;
    CHECK_THROWS_AS(exact_ip.validate(), InvalidArgument);
    ControllerParams bad = smith(1.0, 0.1);
    bad.forecast_error_bound = -1.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("horizon forecast from a frozen estimate")
{
    const TrendEstimate e{10.0, 1.0, 5.0, false};
    SECTION("estimate ends now")
    {
        const HorizonForecast h = horizon_forecast(e, 5.0, 1.0, 3);
        CHECK(h.path == std::vector<double>{10.0, 11.0, 12.0});
        CHECK(h.point == 13.0);
    }
    SECTION("estimate ends earlier")
    {
        const HorizonForecast h = horizon_forecast(e, 7.0, 1.0, 2);
        CHECK(h.path == std::vector<double>{12.0, 13.0});
        CHECK(h.point == 14.0);
    }
    CHECK_THROWS_AS(horizon_forecast(e, 4.0, 1.0, 3), InvalidArgument);
    CHECK_THROWS_AS(horizon_forecast(e, 5.0, 1.0, 0), InvalidArgument);
}

TEST_CASE("predictor integrates the model over the pipeline")
{
    const ControllerParams p = smith(1.0, 0.1);
    ControllerState s = make_controller_state(p, 2.0, 1.0, window(3));
    record_control(s, 3.0);
    record_control(s, 4.0);
    CHECK(predict_output(s, 50.0, p, std::vector<double>{2.0, 2.0}) == Approx(53.0));

    ControllerState empty = make_controller_state(p, 2.0, 1.0, window(3));
    CHECK(predict_output(empty, 50.0, p, std::vector<double>{0.0, 0.0}) == 50.0);
    CHECK_THROWS_AS(predict_output(s, 50.0, p, std::vector<double>{2.0}), InvalidArgument);
}

TEST_CASE("smith law examples")
{
    const ControllerParams p = smith(0.95, 0.1);
    ControllerState s = make_controller_state(p, 1.0, 1.0, window(3));
    record_control(s, 10.0 / 0.95);
    // y_hat = 105 + (10 - 10) = 105, reference 100, so e_hat = 5.
    const ControlDecision d = control_smith_p(105.0, Reference::constant(100.0), 0.0, s, p, flat(10.0, 1));
    CHECK_FALSE(d.warmup);
    CHECK(d.predicted_error == Approx(5.0));
    CHECK(d.u == Approx(10.0));

    ControllerState z = make_controller_state(p, 1.0, 1.0, window(3));
    record_control(z, 10.0 / 0.95);
    const ControlDecision ff = control_smith_p(100.0, Reference::constant(100.0), 0.0, z, p, flat(10.0, 1));
    CHECK(ff.predicted_error == Approx(0.0).margin(1e-12));
    CHECK(ff.u == Approx(10.0 / 0.95));

    ControllerState w = make_controller_state(p, 1.0, 1.0, window(3));
    ControllerParams bad = p;
    bad.k_model = 0.0;
    CHECK_THROWS_AS(control_smith_p(0.0, Reference::constant(0.0), 0.0, w, bad, flat(1.0, 1)), InvalidArgument);
}

TEST_CASE("smith law clamps forecasts and controls")
{
    ControllerParams p = smith(1.0, 0.1);
    ControllerState s = make_controller_state(p, 1.0, 1.0, window(3));
    const ControlDecision d = control_smith_p(0.0, Reference::constant(0.0), 0.0, s, p, flat(-5.0, 1));
    CHECK(d.forecast == 0.0);
    CHECK(d.u == 0.0);

    p.clamp_u = false;
    ControllerState t = make_controller_state(p, 1.0, 1.0, window(3));
    record_control(t, 0.0);
    // y well above the reference: the unclamped law orders a negative amount.
    const ControlDecision neg = control_smith_p(500.0, Reference::constant(0.0), 0.0, t, p, flat(0.0, 1));
    CHECK(neg.u == Approx(-50.0));
}

TEST_CASE("property: exact predictor replays the plant")
{
    const PlantParams plant{.yield_k = 0.95, .decay_sigma = 0.0, .lead_time = 5.0, .dt = 1.0, .y0 = 20.0,
                            .clamp_inventory = false};
    ControllerParams p = smith(0.95, 0.3);
    p.clamp_u = false;
    ControllerState s = make_controller_state(p, plant.lead_time, plant.dt, window(10));
    PlantState ps = make_plant_state(plant);
    std::vector<double> demand(200);
    for (std::size_t i = 0; i < demand.size(); ++i)
        demand[i] = 10.0 + 3.0 * std::sin(0.2 * static_cast<double>(i));
    std::vector<double> predicted, realized;
    for (std::size_t i = 0; i + 6 < demand.size(); ++i) {
        realized.push_back(ps.y);
        const HorizonForecast h{std::vector<double>(demand.begin() + i, demand.begin() + i + 5), demand[i + 5], false};
        const ControlDecision d = control_smith_p(ps.y, Reference::constant(60.0), static_cast<double>(i), s, p, h);
        predicted.push_back(d.warmup ? NAN : d.predicted_output);
        plant_step(ps, plant, d.u, demand[i]);
    }
    for (std::size_t i = 5; i + 5 < realized.size(); ++i)
        REQUIRE(predicted[i] == Approx(realized[i + 5]).margin(1e-9));
}

TEST_CASE("property: predicted error decays by (1 - K_p dt) per step")
{
    for (double gain : {0.05, 0.1, 0.5}) {
        const PlantParams plant{.yield_k = 0.95, .decay_sigma = 0.0, .lead_time = 5.0, .dt = 0.1, .y0 = 0.0,
                                .clamp_inventory = false};
        ControllerParams p = smith(0.95, gain);
        p.clamp_u = false;
        ControllerState s = make_controller_state(p, plant.lead_time, plant.dt, window(10));
        PlantState ps = make_plant_state(plant);
        std::vector<double> e;
        for (std::size_t i = 0; i < 400; ++i) {
            const ControlDecision d =
                control_smith_p(ps.y, Reference::constant(100.0), static_cast<double>(i) * 0.1, s, p, flat(10.0, 50));
            if (!d.warmup)
                e.push_back(d.predicted_error);
            plant_step(ps, plant, d.u, 10.0);
        }
        REQUIRE(e.size() > 100);
        for (std::size_t k = 1; k < e.size(); ++k)
            REQUIRE(e[k] == Approx((1.0 - gain * 0.1) * e[k - 1]).margin(1e-9));
    }
}

TEST_CASE("F estimate examples")
{
    const ControllerParams p = ip(1.0, 0.1);
    SECTION("delivered 10, output rising at 1: F = 9")
    {
        ControllerState s = make_controller_state(p, 1.0, 1.0, window(5));
        TimeSeries y(0.0, 1.0);
        FEstimate f;
        for (std::size_t i = 0; i < 20; ++i) {
            y.push_back(static_cast<double>(i));
            f = estimate_F(s, y, p);
            record_control(s, 10.0);
        }
        CHECK_FALSE(f.warmup);
        CHECK(f.value == Approx(9.0));
    }
    SECTION("nothing moves: F = 0")
    {
        ControllerState s = make_controller_state(p, 1.0, 1.0, window(5));
        TimeSeries y(0.0, 1.0);
        for (std::size_t i = 0; i < 20; ++i) {
            y.push_back(42.0);
            CHECK(estimate_F(s, y, p).value == Approx(0.0).margin(1e-12));
            record_control(s, 0.0);
        }
    }
    SECTION("calls must stay in step with the output series")
    {
        ControllerState s = make_controller_state(p, 1.0, 1.0, window(5));
        const TimeSeries y(0.0, 1.0, {1.0, 2.0});
        CHECK_THROWS_AS(estimate_F(s, y, p), InvalidArgument);
    }
}

TEST_CASE("F tracks sigma y + d on the perishable plant")
{
    const PlantParams plant{.yield_k = 1.0, .decay_sigma = 0.08, .lead_time = 7.0, .dt = 0.1, .y0 = 50.0,
                            .clamp_inventory = false};
    const ControllerParams p = ip(1.0, 0.1);
    ControllerState s = make_controller_state(p, plant.lead_time, plant.dt, window(10));
    PlantState ps = make_plant_state(plant);
    TimeSeries y(0.0, plant.dt);
    std::vector<double> truth;
    const auto lag_steps = static_cast<std::size_t>(std::lround(s.f_lag / plant.dt));
    for (std::size_t i = 0; i < 1500; ++i) {
        const double t = static_cast<double>(i) * plant.dt;
        const double d = 3.0;
        y.push_back(ps.y);
        truth.push_back(0.08 * ps.y + d);
        const FEstimate f = estimate_F(s, y, p);
        const double u = 8.0 + 2.0 * std::sin(0.05 * t);
        record_control(s, u);
        if (i > 100 && !f.warmup)
            REQUIRE(f.value == Approx(truth[i - lag_steps]).margin(2e-3));
        plant_step(ps, plant, u, d);
    }
}

TEST_CASE("iP law example")
{
    const ControllerParams p = ip(1.0, 0.1);
    ControllerState s = make_controller_state(p, 1.0, 1.0, window(3));
    TimeSeries y(0.0, 1.0);
    for (std::size_t i = 0; i < 10; ++i) {
        y.push_back(50.0);
        estimate_F(s, y, p);
        record_control(s, 2.0);
    }
    y.push_back(50.0);
    estimate_F(s, y, p);
    // F = 2 throughout, y_hat = 50 + 2 - 2 = 50, reference 53: e_hat = -3.
    const ControlDecision d = control_model_free_ip(50.0, Reference::constant(53.0), 10.0, s, p);
    CHECK_FALSE(d.warmup);
    CHECK(d.forecast == Approx(2.0));
    CHECK(d.predicted_error == Approx(-3.0));
    CHECK(d.u == Approx(2.3));

    ControllerState fresh = make_controller_state(p, 1.0, 1.0, window(3));
    CHECK_THROWS_AS(control_model_free_ip(0.0, Reference::constant(0.0), 0.0, fresh, p), InvalidArgument);
    ControllerParams bad = p;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(control_model_free_ip(0.0, Reference::constant(0.0), 0.0, s, bad), InvalidArgument);
}

TEST_CASE("closed loop: smith_p settles on the fixed point")
{
    ScenarioConfig c = loop(ControllerVariant::smith_p, 0.95, 0.0, 1.0, 5.0);
    c.controller.k_model = 0.95;
    const RunResult r = run_scenario(c);
    CHECK(tail_mean(r.u, 50) == Approx(10.0 / 0.95).epsilon(1e-6));
    CHECK(tail_mean(r.y, 50) == Approx(100.0).epsilon(1e-6));
}

TEST_CASE("closed loop: iP steady state does not depend on alpha")
{
    // Fixed point of the plant with y' = 0: k u = sigma y* + d.
    for (double alpha : {0.8, 1.0, 1.25}) {
        ScenarioConfig c = loop(ControllerVariant::model_free_ip, 0.95, 0.0, 1.0, 5.0);
        c.controller.alpha = alpha;
        c.duration = 1000.0;
        const RunResult r = run_scenario(c);
        INFO("alpha " << alpha);
        CHECK(tail_mean(r.u, 50) == Approx(10.0 / 0.95).epsilon(1e-3));
        CHECK(tail_mean(r.y, 50) == Approx(100.0).epsilon(1e-3));
    }
    ScenarioConfig c = loop(ControllerVariant::model_free_ip, 1.0, 0.08, 0.1, 7.0);
    c.duration = 500.0;
    const RunResult r = run_scenario(c);
    CHECK(tail_mean(r.u, 500) == Approx(0.08 * 100.0 + 10.0).epsilon(1e-3));
    CHECK(tail_mean(r.y, 500) == Approx(100.0).epsilon(1e-3));
}

TEST_CASE("closed loop: iP ignores the plant yield, smith_p does not")
{
    double prev_offset = -1.0;
    for (double k : {1.0, 0.9, 0.8}) {
        const RunResult rip = run_scenario(loop(ControllerVariant::model_free_ip, k, 0.0, 1.0, 5.0));
        CHECK(std::abs(rip.metrics.steady_state_error) < 1.0);
        const RunResult rsp = run_scenario(loop(ControllerVariant::smith_p, k, 0.0, 1.0, 5.0));
        const double offset = std::abs(rsp.metrics.steady_state_error);
        CHECK(offset > prev_offset);
        prev_offset = offset;
    }
    const RunResult high = run_scenario(loop(ControllerVariant::model_free_ip, 1.2, 0.0, 1.0, 5.0));
    CHECK(std::abs(high.metrics.steady_state_error) < 1.0);
    CHECK(std::abs(run_scenario(loop(ControllerVariant::smith_p, 1.2, 0.0, 1.0, 5.0)).metrics.steady_state_error) >
          1.0);
}

TEST_CASE("property: clamped controls are never negative")
{
    for (ControllerVariant v : {ControllerVariant::smith_p, ControllerVariant::model_free_ip}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            ScenarioConfig c = loop(v, 0.95, v == ControllerVariant::smith_p ? 0.0 : 0.05, 1.0, 5.0);
            c.demand.steps = {{0.0, 10.0}, {80.0, 40.0}, {120.0, 0.0}, {200.0, 25.0}};
            c.demand.noise = NoiseSpec::gaussian(0.0, 8.0);
            c.seed = seed;
            const RunResult r = run_scenario(c);
            for (double u : r.u.values())
                REQUIRE(u >= 0.0);
        }
    }
}
