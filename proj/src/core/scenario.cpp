#include "invctl/scenario.hpp"

#include "invctl/errors.hpp"
#include "invctl/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

namespace invctl {

double DemandProgram::base(double t) const
{
    double level = steps.front().level;
    for (const Step& s : steps) {
        if (t >= s.t)
            level = s.level;
        else
            break;
    }
    return level;
}

void DemandProgram::validate() const
{
    if (steps.empty())
        throw InvalidArgument("demand program needs at least one step");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!std::isfinite(steps[i].t) || !std::isfinite(steps[i].level))
            throw InvalidArgument("demand steps must be finite");
        if (i > 0 && !(steps[i].t > steps[i - 1].t))
            throw InvalidArgument("demand step times must be strictly increasing");
    }
    noise.validate();
    if (!std::isfinite(noise_start))
        throw InvalidArgument("demand noise start must be finite");
}

namespace {

std::size_t whole_steps(double duration, double dt)
{
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw InvalidArgument("duration must be positive, got " + std::to_string(duration));
    const double ratio = duration / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
        throw InvalidArgument("duration " + std::to_string(duration) + " is not a whole multiple of dt " +
                              std::to_string(dt));
    return static_cast<std::size_t>(rounded);
}

// Seed of the forecast-error stream, decorrelated from the demand stream.
std::uint64_t derived_seed(std::uint64_t seed)
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

[[noreturn]] void rethrow_with_context(const std::string& id)
{
    try {
        throw;
    } catch (const GridMismatch& e) {
        throw GridMismatch("scenario " + id + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument("scenario " + id + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError("scenario " + id + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError("scenario " + id + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error("scenario " + id + ": " + e.what());
    }
}

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(std::span<const double> v)
{
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

double ls_slope(std::span<const double> t, std::span<const double> v)
{
    if (t.size() < 2)
        return 0.0;
    const double mt = mean_of(t);
    const double mv = mean_of(v);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sxy += (t[i] - mt) * (v[i] - mv);
        sxx += (t[i] - mt) * (t[i] - mt);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

} // namespace

void ScenarioConfig::validate() const
{
    plant.validate();
    controller.validate();
    estimator.validate();
    demand.validate();
    (void)steps();
    if (!(steady_fraction > 0.0 && steady_fraction <= 1.0))
        throw InvalidArgument("steady fraction must lie in (0, 1]");
}

std::size_t ScenarioConfig::steps() const
{
    return whole_steps(duration, plant.dt);
}

RunResult run_scenario(const ScenarioConfig& cfg)
{
    try {
        cfg.validate();
        const double dt = cfg.plant.dt;
        const std::size_t n = cfg.steps();
        const std::size_t depth = cfg.plant.delay_samples();
        const ControllerParams& cp = cfg.controller;
        const bool model_free = cp.variant == ControllerVariant::model_free_ip;

        // Demand is drawn for the run plus one horizon so exact forecasts can
        // look ahead; only samples up to t are ever shown to the estimator.
        std::vector<double> demand(n + depth + 1);
        NoiseSource demand_noise(cfg.demand.noise, cfg.seed);
        for (std::size_t i = 0; i < demand.size(); ++i) {
            const double t = static_cast<double>(i) * dt;
            demand[i] = cfg.demand.base(t) + (t >= cfg.demand.noise_start ? demand_noise.next() : 0.0);
        }
        std::optional<NoiseSource> forecast_error;
        if (cp.forecast_error_bound > 0.0)
            forecast_error.emplace(NoiseSpec::uniform(-cp.forecast_error_bound, cp.forecast_error_bound),
                                   derived_seed(cfg.seed));

        double eps = 0.0;
        double next_draw = 0.0;

        RunResult r;
        r.id = cfg.id;
        r.variant = cp.variant;
        r.u = r.y = r.y_ref = r.d = r.d_forecast = TimeSeries(0.0, dt);
        r.f_forecast = TimeSeries(0.0, dt);
        for (TimeSeries* s : {&r.u, &r.y, &r.y_ref, &r.d, &r.d_forecast})
            s->reserve(n + 1);
        r.warmup.reserve(n + 1);

        PlantState plant = make_plant_state(cfg.plant);
        ControllerState ctrl = make_controller_state(cp, cfg.plant.lead_time, dt, cfg.estimator);
        const TrendEstimator demand_estimator(cfg.estimator, dt);
        TimeSeries measured_y(0.0, dt);

        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) * dt;
            measured_y.push_back(plant.y);
            r.y.push_back(plant.y);
            r.d.push_back(demand[i]);
            r.y_ref.push_back(cfg.reference.value(t));

            HorizonForecast d_hat;
            if (cp.forecast_source == ForecastSource::exact) {
                d_hat.path.assign(demand.begin() + static_cast<std::ptrdiff_t>(i),
                                  demand.begin() + static_cast<std::ptrdiff_t>(i + depth));
                d_hat.point = demand[i + depth];
            } else {
                d_hat = horizon_forecast(demand_estimator.estimate(r.d, i), t, dt, depth);
            }
            if (forecast_error && (i == 0 || t >= next_draw)) {
                eps = forecast_error->next();
                next_draw = t + std::max(cp.forecast_error_hold, dt) - 0.5 * dt;
            }

            ControlDecision decision;
            if (model_free) {
                estimate_F(ctrl, measured_y, cp);
                decision = control_model_free_ip(plant.y, cfg.reference, t, ctrl, cp, eps);
                r.f_forecast.push_back(decision.forecast);
                r.d_forecast.push_back(d_hat.point);
            } else {
                for (double& v : d_hat.path)
                    v += eps;
                d_hat.point += eps;
                r.d_forecast.push_back(d_hat.point);
                decision = control_smith_p(plant.y, cfg.reference, t, ctrl, cp, d_hat);
            }
            r.u.push_back(decision.u);
            r.warmup.push_back(decision.warmup ? 1 : 0);

            if (i < n)
                plant_step(plant, cfg.plant, decision.u, demand[i]);
        }
        r.metrics = compute_metrics(r.u, r.y, r.y_ref, r.d, r.warmup, cfg.steady_fraction);
        return r;
    } catch (...) {
        rethrow_with_context(cfg.id);
    }
}

std::vector<RunResult> run_suite(std::span<const ScenarioConfig> configs)
{
    std::vector<std::future<RunResult>> jobs;
    jobs.reserve(configs.size());
    for (const ScenarioConfig& cfg : configs)
        jobs.push_back(std::async(std::launch::async, [&cfg] { return run_scenario(cfg); }));
    std::vector<RunResult> out;
    out.reserve(configs.size());
    for (auto& job : jobs)
        out.push_back(job.get());
    return out;
}

Metrics compute_metrics(const TimeSeries& u, const TimeSeries& y, const TimeSeries& y_ref, const TimeSeries& d,
                        std::span<const std::uint8_t> warmup, double steady_fraction)
{
    if (!u.same_grid(y) || !u.same_grid(y_ref) || !u.same_grid(d))
        throw GridMismatch("metric inputs are not on one grid");
    if (warmup.size() != u.size())
        throw InvalidArgument("warm-up mask length does not match the series");
    if (!(steady_fraction > 0.0 && steady_fraction <= 1.0))
        throw InvalidArgument("steady fraction must lie in (0, 1]");

    const std::size_t n = u.size();
    Metrics m;
    m.warmup_samples = static_cast<std::size_t>(std::count(warmup.begin(), warmup.end(), std::uint8_t{1}));
    if (m.warmup_samples == n)
        throw InvalidArgument("no post-warm-up samples to evaluate");
    const std::size_t steady_len =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(steady_fraction * static_cast<double>(n))));
    m.steady_begin = n - std::min(n, steady_len);

    std::vector<double> uu, dd, tt, ee, steady;
    for (std::size_t i = 0; i < n; ++i) {
        if (warmup[i])
            continue;
        const double e = y[i] - y_ref[i];
        uu.push_back(u[i]);
        dd.push_back(d[i]);
        tt.push_back(u.time_at(i));
        ee.push_back(e);
        m.tracking_error_sup = std::max(m.tracking_error_sup, std::abs(e));
        if (i >= m.steady_begin) {
            steady.push_back(e);
            m.steady_envelope = std::max(m.steady_envelope, std::abs(e));
        }
    }
    if (steady.empty())
        throw InvalidArgument("steady-state window lies entirely inside warm-up");

    double sq = 0.0;
    for (double e : ee)
        sq += e * e;
    m.tracking_rmse = std::sqrt(sq / static_cast<double>(ee.size()));
    m.steady_state_error = mean_of(steady);
    m.control_variance = variance_of(uu);
    const double var_d = variance_of(dd);
    const double scale = std::max(1.0, mean_of(dd) * mean_of(dd));
    if (var_d > 1e-24 * scale)
        m.bullwhip_ratio = m.control_variance / var_d;
    m.drift_slope = ls_slope(tt, ee);

    auto [lo, hi] = std::minmax_element(y_ref.values().begin(), y_ref.values().end());
    m.reference_amplitude = n ? *hi - *lo : 0.0;
    return m;
}

Metrics bias_drift_experiment(double bias, const PlantParams& plant, double duration, double demand_level)
{
    PlantParams p = plant;
    p.clamp_inventory = false;
    p.validate();
    if (!(duration > p.lead_time))
        throw InvalidArgument("bias drift run must last longer than the lead time");
    const std::size_t n = whole_steps(duration, p.dt);
    const std::size_t depth = p.delay_samples();
    const double supply = (demand_level + bias) / p.yield_k;
    if (!(supply >= 0.0))
        throw InvalidArgument("biased feedforward supply would be negative");

    const TimeSeries u(0.0, p.dt, std::vector<double>(n + 1, supply));
    const TimeSeries d(0.0, p.dt, std::vector<double>(n + 1, demand_level));
    const TimeSeries y = run_open_loop(p, u, d);
    const TimeSeries y_ref(0.0, p.dt, std::vector<double>(n + 1, y[depth]));
    std::vector<std::uint8_t> mask(n + 1, 0);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(depth), std::uint8_t{1});
    return compute_metrics(u, y, y_ref, d, mask);
}

std::vector<SweepRow> gain_sweep(const ScenarioConfig& cfg, std::span<const double> gains, double bound)
{
    if (gains.empty())
        throw InvalidArgument("gain sweep needs at least one gain");
    std::vector<ScenarioConfig> configs;
    configs.reserve(gains.size());
    for (double g : gains) {
        ScenarioConfig c = cfg;
        c.controller.gain = g;
        c.controller.forecast_error_bound = bound;
        configs.push_back(std::move(c));
    }
    const std::vector<RunResult> runs = run_suite(configs);
    std::vector<SweepRow> rows;
    rows.reserve(runs.size());
    for (std::size_t k = 0; k < runs.size(); ++k)
        rows.push_back({gains[k], runs[k].metrics});
    return rows;
}

std::vector<ShockRecovery> shock_recovery(const RunResult& result, const DemandProgram& demand, double lookback,
                                          double floor_fraction)
{
    const std::size_t n = result.size();
    const double dt = result.y.dt();
    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i)
        err[i] = std::abs(result.y[i] - result.y_ref[i]);
    const double amplitude = result.metrics.reference_amplitude > 0.0 ? result.metrics.reference_amplitude : 1.0;
    const double floor = floor_fraction * amplitude;

    auto index_at = [&](double t) {
        return std::min(n, static_cast<std::size_t>(std::max(0.0, std::ceil(t / dt - 1e-9))));
    };

    std::vector<ShockRecovery> out;
    for (std::size_t k = 1; k < demand.steps.size(); ++k) {
        const double ts = demand.steps[k].t;
        const std::size_t is = index_at(ts);
        if (is >= n || result.warmup[is])
            continue;
        const std::size_t seg_end = k + 1 < demand.steps.size() ? index_at(demand.steps[k + 1].t) : n;

        double env = 0.0;
        for (std::size_t i = index_at(ts - lookback); i < is; ++i)
            if (!result.warmup[i])
                env = std::max(env, err[i]);
        env = std::max(env, floor);

        std::optional<std::size_t> last_out;
        for (std::size_t i = is; i < seg_end; ++i)
            if (err[i] > env)
                last_out = i;

        ShockRecovery rec{ts, env, std::nullopt};
        if (!last_out)
            rec.recovery_time = 0.0;
        else if (*last_out + 1 < seg_end)
            rec.recovery_time = result.y.time_at(*last_out + 1) - ts;
        out.push_back(rec);
    }
    return out;
}

} // namespace invctl
