// Command-line front end. Talks to the simulation core only through the C
// interface in invctl/invctl.h.
//
// Exit codes: 0 success, 1 usage error, 2 config error, 3 runtime error.

#include "invctl/invctl.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int exit_usage = 1;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

struct ScenarioDeleter {
    void operator()(invctl_scenario* s) const { invctl_scenario_free(s); }
};
struct ResultDeleter {
    void operator()(invctl_result* r) const { invctl_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<invctl_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<invctl_result, ResultDeleter>;

struct CliFailure {
    int code;
    std::string message;
};

int exit_code_for(invctl_status st)
{
    switch (st) {
    case INVCTL_OK:
        return 0;
    case INVCTL_ERR_CONFIG:
    case INVCTL_ERR_NOT_FOUND:
        return exit_config;
    default:
        return exit_runtime;
    }
}

void check(invctl_status st, const std::string& context)
{
    if (st != INVCTL_OK)
        throw CliFailure{exit_code_for(st), context + ": " + invctl_last_error()};
}

// A fixture id wins over a file of the same name.
ScenarioPtr load_scenario(const std::string& name)
{
    invctl_scenario* raw = nullptr;
    for (size_t i = 0; i < invctl_fixture_count(); ++i) {
        if (name == invctl_fixture_id(i)) {
            check(invctl_scenario_from_fixture(name.c_str(), &raw), "scenario " + name);
            return ScenarioPtr(raw);
        }
    }
    if (!std::filesystem::exists(name))
        throw CliFailure{exit_config, "scenario '" + name + "' is neither a built-in id nor an existing file"};
    check(invctl_scenario_from_file(name.c_str(), &raw), "scenario " + name);
    return ScenarioPtr(raw);
}

struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<double> duration;
    std::vector<std::string> settings;
};

void apply(invctl_scenario* s, const Overrides& o)
{
    if (o.seed)
        check(invctl_scenario_set_seed(s, *o.seed), "--seed");
    if (o.duration)
        check(invctl_scenario_set_duration(s, *o.duration), "--duration");
    for (const std::string& kv : o.settings) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw CliFailure{exit_usage, "--set expects key=value, got '" + kv + "'"};
        check(invctl_scenario_set(s, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set " + kv);
    }
}

void print_metrics(std::ostream& os, const std::string& label, const invctl_metrics& m)
{
    os << "scenario            " << label << "\n"
       << "tracking_rmse       " << m.tracking_rmse << "\n"
       << "steady_state_error  " << m.steady_state_error << "\n"
       << "steady_envelope     " << m.steady_envelope << "\n"
       << "tracking_error_sup  " << m.tracking_error_sup << "\n"
       << "control_variance    " << m.control_variance << "\n"
       << "bullwhip_ratio      ";
    if (m.bullwhip_defined)
        os << m.bullwhip_ratio << "\n";
    else
        os << "undefined (constant demand)\n";
    os << "drift_slope         " << m.drift_slope << "\n"
       << "reference_amplitude " << m.reference_amplitude << "\n"
       << "warmup_samples      " << m.warmup_samples << "\n"
       << "steady_window_start " << m.steady_begin << "\n";
}

std::string result_csv(const invctl_result* r)
{
    size_t needed = 0;
    check(invctl_result_csv(r, nullptr, 0, &needed), "csv");
    std::string text(needed + 1, '\0');
    check(invctl_result_csv(r, text.data(), text.size(), &needed), "csv");
    text.resize(needed);
    return text;
}

std::string scenario_text(const invctl_scenario* s)
{
    size_t needed = 0;
    check(invctl_scenario_to_string(s, nullptr, 0, &needed), "format");
    std::string text(needed + 1, '\0');
    check(invctl_scenario_to_string(s, text.data(), text.size(), &needed), "format");
    text.resize(needed);
    return text;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Inventory control simulations: Smith predictor P vs. model-free iP"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(invctl_version()));

    std::string scenario;
    Overrides overrides;
    std::string out_path;
    std::string format = "csv";

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario,-s", scenario, "built-in id (S1..S8) or scenario file")->required();
        cmd->add_option("--seed", overrides.seed, "override the scenario seed");
        cmd->add_option("--duration", overrides.duration, "override the run length in days");
        cmd->add_option("--set", overrides.settings, "override any scenario key, key=value (repeatable)");
    };

    CLI::App* run = app.add_subcommand("run", "simulate one scenario and emit its signals");
    add_common(run);
    run->add_option("--out,-o", out_path, "CSV destination (default: stdout)");
    run->add_option("--format,-f", format, "csv or summary")->check(CLI::IsMember({"csv", "summary"}));

    std::vector<double> gains;
    double bound = 0.0;
    CLI::App* sweep = app.add_subcommand("sweep", "re-run a scenario over several proportional gains");
    add_common(sweep);
    sweep->add_option("--gains", gains, "comma-separated K_p values")->required()->delimiter(',');
    sweep->add_option("--bound", bound, "bound M of the injected uniform forecast error")->check(CLI::NonNegativeNumber);
    std::string hold = "inf";
    sweep->add_option("--hold", hold, "days each error draw is held (0: fresh every step, inf: one per run)")
        ->capture_default_str();
    sweep->add_option("--out,-o", out_path, "write the table here instead of stdout");

    double bias = 0.0;
    invctl_plant_params plant{0.95, 0.0, 5.0, 1.0, 100.0};
    double demand_level = 10.0;
    double drift_duration = 200.0;
    CLI::App* drift = app.add_subcommand("bias-drift", "open-loop biased feedforward against constant demand");
    drift->add_option("--bias", bias, "constant supply bias (items/day)")->required();
    drift->add_option("--yield", plant.yield_k, "plant yield k");
    drift->add_option("--decay", plant.decay_sigma, "plant decay rate sigma");
    drift->add_option("--lead-time", plant.lead_time, "lead time L (days)");
    drift->add_option("--dt", plant.dt, "sampling step (days)");
    drift->add_option("--y0", plant.y0, "initial inventory");
    drift->add_option("--demand", demand_level, "constant demand level");
    drift->add_option("--duration", drift_duration, "run length (days)");

    CLI::App* list = app.add_subcommand("list-scenarios", "print the built-in scenarios");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario and print its canonical form");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try {
        if (*list) {
            for (size_t i = 0; i < invctl_fixture_count(); ++i)
                std::cout << invctl_fixture_id(i) << "  " << invctl_fixture_description(i) << "\n";
            return 0;
        }

        if (*drift) {
            invctl_metrics m{};
            check(invctl_bias_drift(bias, &plant, drift_duration, demand_level, &m), "bias-drift");
            print_metrics(std::cout, "bias-drift", m);
            return 0;
        }

        ScenarioPtr s = load_scenario(scenario);
        apply(s.get(), overrides);

        if (*validate) {
            check(invctl_scenario_validate(s.get()), "validate");
            std::cout << scenario_text(s.get());
            return 0;
        }

        if (*sweep) {
            check(invctl_scenario_set(s.get(), "controller.forecast_error_hold", hold.c_str()), "--hold");
            std::vector<invctl_metrics> rows(gains.size());
            check(invctl_gain_sweep(s.get(), gains.data(), gains.size(), bound, rows.data()), "sweep");
            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path, std::ios::trunc);
                if (!file)
                    throw CliFailure{exit_runtime, "cannot open '" + out_path + "' for writing"};
            }
            std::ostream& os = out_path.empty() ? std::cout : file;
            os.precision(10);
            os << "gain,tracking_rmse,steady_state_error,steady_envelope,control_variance,bullwhip_ratio,drift_slope\n";
            for (size_t k = 0; k < gains.size(); ++k) {
                const invctl_metrics& m = rows[k];
                os << gains[k] << ',' << m.tracking_rmse << ',' << m.steady_state_error << ',' << m.steady_envelope
                   << ',' << m.control_variance << ',';
                if (m.bullwhip_defined)
                    os << m.bullwhip_ratio;
                os << ',' << m.drift_slope << '\n';
            }
            return 0;
        }

        invctl_result* raw = nullptr;
        check(invctl_run(s.get(), &raw), "run");
        ResultPtr result(raw);
        if (!out_path.empty() && out_path != "-")
            check(invctl_result_write_csv(result.get(), out_path.c_str()), "write " + out_path);
        if (format == "summary") {
            invctl_metrics m{};
            check(invctl_result_metrics(result.get(), &m), "metrics");
            print_metrics(std::cout, invctl_scenario_id(s.get()), m);
        } else if (out_path.empty() || out_path == "-") {
            std::cout << result_csv(result.get());
        }
        return 0;
    } catch (const CliFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
}
