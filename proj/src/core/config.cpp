#include "invctl/config.hpp"

#include "invctl/errors.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace invctl {

namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double to_double(std::string_view s)
{
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("expected a number, got '" + std::string(s) + "'");
    return v;
}

std::uint64_t to_uint(std::string_view s)
{
    s = trim(s);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
}

bool to_bool(std::string_view s)
{
    s = trim(s);
    if (s == "true" || s == "1" || s == "on" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "off" || s == "no")
        return false;
    throw ConfigError("expected true or false, got '" + std::string(s) + "'");
}

std::vector<std::pair<double, double>> to_pairs(std::string_view s)
{
    std::vector<std::pair<double, double>> out;
    s = trim(s);
    while (!s.empty()) {
        const auto comma = s.find(',');
        const std::string_view item = trim(s.substr(0, comma));
        const auto colon = item.find(':');
        if (colon == std::string_view::npos)
            throw ConfigError("expected t:value, got '" + std::string(item) + "'");
        out.emplace_back(to_double(item.substr(0, colon)), to_double(item.substr(colon + 1)));
        if (comma == std::string_view::npos)
            break;
        s = s.substr(comma + 1);
    }
    if (out.empty())
        throw ConfigError("expected at least one t:value pair");
    return out;
}

std::string num(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"id", [](ScenarioConfig& c, std::string_view v) { c.id = std::string(trim(v)); }},
        {"description", [](ScenarioConfig& c, std::string_view v) { c.description = std::string(trim(v)); }},
        {"seed", [](ScenarioConfig& c, std::string_view v) { c.seed = to_uint(v); }},
        {"duration", [](ScenarioConfig& c, std::string_view v) { c.duration = to_double(v); }},
        {"steady_fraction", [](ScenarioConfig& c, std::string_view v) { c.steady_fraction = to_double(v); }},
        {"plant.yield", [](ScenarioConfig& c, std::string_view v) { c.plant.yield_k = to_double(v); }},
        {"plant.decay", [](ScenarioConfig& c, std::string_view v) { c.plant.decay_sigma = to_double(v); }},
        {"plant.lead_time", [](ScenarioConfig& c, std::string_view v) { c.plant.lead_time = to_double(v); }},
        {"plant.dt", [](ScenarioConfig& c, std::string_view v) { c.plant.dt = to_double(v); }},
        {"plant.y0", [](ScenarioConfig& c, std::string_view v) { c.plant.y0 = to_double(v); }},
        {"plant.clamp_inventory", [](ScenarioConfig& c, std::string_view v) { c.plant.clamp_inventory = to_bool(v); }},
        {"controller.variant",
         [](ScenarioConfig& c, std::string_view v) {
             v = trim(v);
             if (v == "smith_p")
                 c.controller.variant = ControllerVariant::smith_p;
             else if (v == "model_free_ip")
                 c.controller.variant = ControllerVariant::model_free_ip;
             else
                 throw ConfigError("controller.variant must be smith_p or model_free_ip, got '" + std::string(v) + "'");
         }},
        {"controller.yield_model", [](ScenarioConfig& c, std::string_view v) { c.controller.k_model = to_double(v); }},
        {"controller.decay_model",
         [](ScenarioConfig& c, std::string_view v) { c.controller.sigma_model = to_double(v); }},
        {"controller.alpha", [](ScenarioConfig& c, std::string_view v) { c.controller.alpha = to_double(v); }},
        {"controller.gain", [](ScenarioConfig& c, std::string_view v) { c.controller.gain = to_double(v); }},
        {"controller.clamp_u", [](ScenarioConfig& c, std::string_view v) { c.controller.clamp_u = to_bool(v); }},
        {"controller.forecast_source",
         [](ScenarioConfig& c, std::string_view v) {
             v = trim(v);
             if (v == "estimated")
                 c.controller.forecast_source = ForecastSource::estimated;
             else if (v == "exact")
                 c.controller.forecast_source = ForecastSource::exact;
             else
                 throw ConfigError("controller.forecast_source must be estimated or exact");
         }},
        {"controller.forecast_error_hold",
         [](ScenarioConfig& c, std::string_view v) { c.controller.forecast_error_hold = to_double(v); }},
        {"controller.forecast_error_bound",
         [](ScenarioConfig& c, std::string_view v) { c.controller.forecast_error_bound = to_double(v); }},
        {"estimator.window",
         [](ScenarioConfig& c, std::string_view v) { c.estimator.window_samples = static_cast<std::size_t>(to_uint(v)); }},
        {"estimator.order",
         [](ScenarioConfig& c, std::string_view v) { c.estimator.integration_order = static_cast<int>(to_uint(v)); }},
        {"estimator.warmup",
         [](ScenarioConfig&, std::string_view v) {
             if (trim(v) != "hold_last_sample_zero_slope")
                 throw ConfigError("estimator.warmup must be hold_last_sample_zero_slope");
         }},
        {"reference.knots",
         [](ScenarioConfig& c, std::string_view v) {
             std::vector<Reference::Knot> knots;
             for (auto [t, y] : to_pairs(v))
                 knots.push_back({t, y});
             c.reference = Reference(std::move(knots));
         }},
        {"demand.steps",
         [](ScenarioConfig& c, std::string_view v) {
             c.demand.steps.clear();
             for (auto [t, level] : to_pairs(v))
                 c.demand.steps.push_back({t, level});
         }},
        {"demand.noise", [](ScenarioConfig& c, std::string_view v) { c.demand.noise = NoiseSpec::parse(std::string(v)); }},
        {"demand.noise_start", [](ScenarioConfig& c, std::string_view v) { c.demand.noise_start = to_double(v); }},
    };
    return table;
}

const std::set<std::string, std::less<>> required_keys = {
    "duration",       "plant.yield",     "plant.lead_time", "plant.dt",     "plant.y0",
    "controller.variant", "controller.gain", "reference.knots", "demand.steps",
};

} // namespace

const std::vector<std::string>& setting_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters())
            k.push_back(name);
        return k;
    }();
    return keys;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value)
{
    const auto it = setters().find(trim(key));
    if (it == setters().end())
        throw ConfigError("unknown key '" + std::string(trim(key)) + "'");
    try {
        it->second(cfg, value);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(trim(key)) + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string(trim(key)) + ": " + e.what());
    }
}

ScenarioConfig parse_scenario(std::string_view text, std::string_view source)
{
    ScenarioConfig cfg;
    std::set<std::string, std::less<>> seen;
    std::string section;
    std::size_t line_no = 0;
    const std::string where(source);

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string at = where + ":" + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(at + "unterminated section header");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(at + "expected key = value");
        std::string key(trim(line.substr(0, eq)));
        if (!section.empty())
            key = section + "." + key;
        if (!seen.insert(key).second)
            throw ConfigError(at + "duplicate key '" + key + "'");
        try {
            apply_setting(cfg, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(at + e.what());
        }
    }
    for (const auto& key : required_keys)
        if (!seen.contains(key))
            throw ConfigError(where + ": missing required key '" + key + "'");
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

std::string format_scenario(const ScenarioConfig& c)
{
    std::ostringstream os;
    auto pairs = [](const auto& items, auto first, auto second) {
        std::string s;
        for (const auto& it : items) {
            if (!s.empty())
                s += ", ";
            s += num(it.*first) + ":" + num(it.*second);
        }
        return s;
    };
    os << "id = " << c.id << "\n";
    if (!c.description.empty())
        os << "description = " << c.description << "\n";
    os << "seed = " << c.seed << "\n"
       << "duration = " << num(c.duration) << "\n"
       << "steady_fraction = " << num(c.steady_fraction) << "\n"
       << "\n[plant]\n"
       << "yield = " << num(c.plant.yield_k) << "\n"
       << "decay = " << num(c.plant.decay_sigma) << "\n"
       << "lead_time = " << num(c.plant.lead_time) << "\n"
       << "dt = " << num(c.plant.dt) << "\n"
       << "y0 = " << num(c.plant.y0) << "\n"
       << "clamp_inventory = " << (c.plant.clamp_inventory ? "true" : "false") << "\n"
       << "\n[controller]\n"
       << "variant = " << to_string(c.controller.variant) << "\n"
       << "yield_model = " << num(c.controller.k_model) << "\n"
       << "decay_model = " << num(c.controller.sigma_model) << "\n"
       << "alpha = " << num(c.controller.alpha) << "\n"
       << "gain = " << num(c.controller.gain) << "\n"
       << "clamp_u = " << (c.controller.clamp_u ? "true" : "false") << "\n"
       << "forecast_source = " << to_string(c.controller.forecast_source) << "\n"
       << "forecast_error_bound = " << num(c.controller.forecast_error_bound) << "\n"
       << "forecast_error_hold = " << num(c.controller.forecast_error_hold) << "\n"
       << "\n[estimator]\n"
       << "window = " << c.estimator.window_samples << "\n"
       << "order = " << c.estimator.integration_order << "\n"
       << "warmup = hold_last_sample_zero_slope\n"
       << "\n[reference]\n"
       << "knots = " << pairs(c.reference.knots(), &Reference::Knot::t, &Reference::Knot::value) << "\n"
       << "\n[demand]\n"
       << "steps = " << pairs(c.demand.steps, &DemandProgram::Step::t, &DemandProgram::Step::level) << "\n"
       << "noise = " << c.demand.noise.to_string() << "\n"
       << "noise_start = " << num(c.demand.noise_start) << "\n";
    return os.str();
}

} // namespace invctl
