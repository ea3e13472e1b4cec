#include "invctl/invctl.h"

#include "invctl/config.hpp"
#include "invctl/csv.hpp"
#include "invctl/errors.hpp"
#include "invctl/fixtures.hpp"
#include "invctl/scenario.hpp"

#include <algorithm>
#include <cstring>
#include <new>
#include <sstream>
#include <string>
#include <vector>

struct invctl_scenario {
    invctl::ScenarioConfig config;
};

struct invctl_result {
    invctl::RunResult run;
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
};

namespace {

thread_local std::string last_error;

invctl_status fail(invctl_status code, const std::string& message)
{
    last_error = message;
    return code;
}

// Runs fn and turns any escaping exception into a status code.
template <class Fn>
invctl_status guarded(Fn&& fn)
{
    try {
        fn();
        return INVCTL_OK;
    } catch (const invctl::ConfigError& e) {
        return fail(INVCTL_ERR_CONFIG, e.what());
    } catch (const invctl::IoError& e) {
        return fail(INVCTL_ERR_IO, e.what());
    } catch (const invctl::InvalidArgument& e) {
        return fail(INVCTL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(INVCTL_ERR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return fail(INVCTL_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(INVCTL_ERR_RUNTIME, "unknown error");
    }
}

invctl_status null_arg(const char* what)
{
    return fail(INVCTL_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

invctl_status copy_out(const std::string& text, char* buffer, size_t capacity, size_t* needed)
{
    if (needed)
        *needed = text.size();
    if (buffer && capacity > 0) {
        const size_t n = std::min(capacity - 1, text.size());
        std::memcpy(buffer, text.data(), n);
        buffer[n] = '\0';
        if (n < text.size())
            return fail(INVCTL_ERR_INVALID_ARGUMENT, "buffer too small");
    }
    return INVCTL_OK;
}

invctl_metrics to_c(const invctl::Metrics& m)
{
    invctl_metrics out{};
    out.tracking_rmse = m.tracking_rmse;
    out.steady_state_error = m.steady_state_error;
    out.bullwhip_defined = m.bullwhip_ratio.has_value() ? 1 : 0;
    out.bullwhip_ratio = m.bullwhip_ratio.value_or(0.0);
    out.control_variance = m.control_variance;
    out.drift_slope = m.drift_slope;
    out.tracking_error_sup = m.tracking_error_sup;
    out.steady_envelope = m.steady_envelope;
    out.reference_amplitude = m.reference_amplitude;
    out.warmup_samples = m.warmup_samples;
    out.steady_begin = m.steady_begin;
    return out;
}

invctl_result* wrap(invctl::RunResult run)
{
    auto* r = new invctl_result{std::move(run), {}, {}};
    const auto& run_ref = r->run;
    r->names = invctl::csv_columns(run_ref.variant);
    const size_t n = run_ref.size();
    std::vector<double> t(n), w(n);
    for (size_t i = 0; i < n; ++i) {
        t[i] = run_ref.y.time_at(i);
        w[i] = run_ref.warmup[i] ? 1.0 : 0.0;
    }
    auto values = [](const invctl::TimeSeries& s) { return std::vector<double>(s.values().begin(), s.values().end()); };
    r->columns = {t, values(run_ref.u), values(run_ref.y), values(run_ref.y_ref), values(run_ref.d),
                  values(run_ref.d_forecast), w};
    if (run_ref.variant == invctl::ControllerVariant::model_free_ip)
        r->columns.push_back(values(run_ref.f_forecast));
    return r;
}

} // namespace

extern "C" {

const char* invctl_version(void)
{
    return "0.1.0";
}

const char* invctl_last_error(void)
{
    return last_error.c_str();
}

size_t invctl_fixture_count(void)
{
    return invctl::builtin_scenarios().size();
}

const char* invctl_fixture_id(size_t index)
{
    const auto& all = invctl::builtin_scenarios();
    return index < all.size() ? all[index].id.c_str() : nullptr;
}

const char* invctl_fixture_description(size_t index)
{
    const auto& all = invctl::builtin_scenarios();
    return index < all.size() ? all[index].description.c_str() : nullptr;
}

invctl_status invctl_scenario_from_fixture(const char* id, invctl_scenario** out)
{
    if (!id || !out)
        return null_arg("id and out");
    *out = nullptr;
    auto cfg = invctl::find_builtin(id);
    if (!cfg)
        return fail(INVCTL_ERR_NOT_FOUND, std::string("no built-in scenario named '") + id + "'");
    return guarded([&] { *out = new invctl_scenario{std::move(*cfg)}; });
}

invctl_status invctl_scenario_from_file(const char* path, invctl_scenario** out)
{
    if (!path || !out)
        return null_arg("path and out");
    *out = nullptr;
    return guarded([&] { *out = new invctl_scenario{invctl::load_scenario_file(path)}; });
}

invctl_status invctl_scenario_from_string(const char* text, invctl_scenario** out)
{
    if (!text || !out)
        return null_arg("text and out");
    *out = nullptr;
    return guarded([&] { *out = new invctl_scenario{invctl::parse_scenario(text)}; });
}

invctl_status invctl_scenario_clone(const invctl_scenario* scenario, invctl_scenario** out)
{
    if (!scenario || !out)
        return null_arg("scenario and out");
    return guarded([&] { *out = new invctl_scenario{scenario->config}; });
}

void invctl_scenario_free(invctl_scenario* scenario)
{
    delete scenario;
}

invctl_status invctl_scenario_set(invctl_scenario* scenario, const char* key, const char* value)
{
    if (!scenario || !key || !value)
        return null_arg("scenario, key and value");
    return guarded([&] {
        invctl::ScenarioConfig next = scenario->config;
        invctl::apply_setting(next, key, value);
        try {
            next.validate();
        } catch (const invctl::InvalidArgument& e) {
            throw invctl::ConfigError(std::string(key) + ": " + e.what());
        }
        scenario->config = std::move(next);
    });
}

invctl_status invctl_scenario_set_seed(invctl_scenario* scenario, uint64_t seed)
{
    if (!scenario)
        return null_arg("scenario");
    scenario->config.seed = seed;
    return INVCTL_OK;
}

invctl_status invctl_scenario_set_duration(invctl_scenario* scenario, double duration)
{
    if (!scenario)
        return null_arg("scenario");
    return guarded([&] {
        invctl::ScenarioConfig next = scenario->config;
        next.duration = duration;
        (void)next.steps();
        scenario->config = std::move(next);
    });
}

invctl_status invctl_scenario_validate(const invctl_scenario* scenario)
{
    if (!scenario)
        return null_arg("scenario");
    return guarded([&] {
        try {
            scenario->config.validate();
        } catch (const invctl::InvalidArgument& e) {
            throw invctl::ConfigError(e.what());
        }
    });
}

invctl_status invctl_scenario_to_string(const invctl_scenario* scenario, char* buffer, size_t capacity,
                                        size_t* needed)
{
    if (!scenario)
        return null_arg("scenario");
    std::string text;
    const invctl_status st = guarded([&] { text = invctl::format_scenario(scenario->config); });
    return st == INVCTL_OK ? copy_out(text, buffer, capacity, needed) : st;
}

const char* invctl_scenario_id(const invctl_scenario* scenario)
{
    return scenario ? scenario->config.id.c_str() : nullptr;
}

invctl_status invctl_run(const invctl_scenario* scenario, invctl_result** out)
{
    if (!scenario || !out)
        return null_arg("scenario and out");
    *out = nullptr;
    return guarded([&] { *out = wrap(invctl::run_scenario(scenario->config)); });
}

void invctl_result_free(invctl_result* result)
{
    delete result;
}

size_t invctl_result_length(const invctl_result* result)
{
    return result ? result->run.size() : 0;
}

size_t invctl_result_column_count(const invctl_result* result)
{
    return result ? result->columns.size() : 0;
}

const char* invctl_result_column_name(const invctl_result* result, size_t column)
{
    if (!result || column >= result->names.size())
        return nullptr;
    return result->names[column].c_str();
}

invctl_status invctl_result_column(const invctl_result* result, size_t column, const double** data, size_t* length)
{
    if (!result || !data || !length)
        return null_arg("result, data and length");
    if (column >= result->columns.size())
        return fail(INVCTL_ERR_INVALID_ARGUMENT, "column index " + std::to_string(column) + " out of range");
    *data = result->columns[column].data();
    *length = result->columns[column].size();
    return INVCTL_OK;
}

invctl_status invctl_result_metrics(const invctl_result* result, invctl_metrics* out)
{
    if (!result || !out)
        return null_arg("result and out");
    *out = to_c(result->run.metrics);
    return INVCTL_OK;
}

invctl_status invctl_result_write_csv(const invctl_result* result, const char* path)
{
    if (!result || !path)
        return null_arg("result and path");
    return guarded([&] { invctl::write_csv_file(result->run, path); });
}

invctl_status invctl_result_csv(const invctl_result* result, char* buffer, size_t capacity, size_t* needed)
{
    if (!result)
        return null_arg("result");
    std::string text;
    const invctl_status st = guarded([&] {
        std::ostringstream os;
        invctl::write_csv(result->run, os);
        text = os.str();
    });
    return st == INVCTL_OK ? copy_out(text, buffer, capacity, needed) : st;
}

invctl_status invctl_gain_sweep(const invctl_scenario* scenario, const double* gains, size_t count, double bound,
                                invctl_metrics* out)
{
    if (!scenario || !gains || !out)
        return null_arg("scenario, gains and out");
    return guarded([&] {
        const auto rows = invctl::gain_sweep(scenario->config, std::span<const double>(gains, count), bound);
        for (size_t k = 0; k < rows.size(); ++k)
            out[k] = to_c(rows[k].metrics);
    });
}

invctl_status invctl_bias_drift(double bias, const invctl_plant_params* plant, double duration, double demand_level,
                                invctl_metrics* out)
{
    if (!plant || !out)
        return null_arg("plant and out");
    return guarded([&] {
        invctl::PlantParams p;
        p.yield_k = plant->yield_k;
        p.decay_sigma = plant->decay_sigma;
        p.lead_time = plant->lead_time;
        p.dt = plant->dt;
        p.y0 = plant->y0;
        p.clamp_inventory = false;
        *out = to_c(invctl::bias_drift_experiment(bias, p, duration, demand_level));
    });
}

} // extern "C"
