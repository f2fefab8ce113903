#include "aalsim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "aalsim/error.hpp"

namespace aalsim {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s)
{
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError("expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

std::int64_t parse_int(std::string_view s)
{
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("expected an integer, got '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t parse_uint(std::string_view s)
{
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("expected an unsigned integer, got '" + std::string(s) + "'");
    }
    return v;
}

int parse_small_int(std::string_view s)
{
    const std::int64_t v = parse_int(s);
    if (v < -1'000'000'000 || v > 1'000'000'000) {
        throw ConfigError("integer out of range: '" + std::string(s) + "'");
    }
    return static_cast<int>(v);
}

bool parse_bool(std::string_view s)
{
    if (s == "true" || s == "1" || s == "yes" || s == "on") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no" || s == "off") {
        return false;
    }
    throw ConfigError("expected true or false, got '" + std::string(s) + "'");
}

void apply_mutation_rule(MutationConfig& mc, std::string_view s)
{
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) {
        throw ConfigError("mutation must be count:K or fraction:F, got '" + std::string(s) + "'");
    }
    const auto kind = trim(s.substr(0, colon));
    const auto arg = trim(s.substr(colon + 1));
    if (kind == "count") {
        mc.rule = MutationConfig::Rule::FixedCount;
        mc.count = parse_int(arg);
        mc.fraction = 0.0;
    } else if (kind == "fraction") {
        mc.rule = MutationConfig::Rule::Fraction;
        mc.fraction = parse_double(arg);
        mc.count = 0;
    } else {
        throw ConfigError("mutation must be count:K or fraction:F, got '" + std::string(s) + "'");
    }
}

std::string format_mutation_rule(const MutationConfig& mc)
{
    if (mc.rule == MutationConfig::Rule::FixedCount) {
        return "count:" + std::to_string(mc.count);
    }
    return "fraction:" + shortest(mc.fraction);
}

struct KeyDef {
    std::string_view name;
    bool sweepable;
    void (*apply)(RunConfig&, std::string_view);
    std::string (*text)(const RunConfig&);
    CsvValue (*csv)(const RunConfig&);
};

// Every run-level key. Order here is the order format_config writes them.
const std::vector<KeyDef>& run_keys()
{
    static const std::vector<KeyDef> keys = {
        {"mode", false,
            [](RunConfig& c, std::string_view v) {
                if (v == "static") {
                    c.mode = Mode::Static;
                } else if (v == "dynamic") {
                    c.mode = Mode::Dynamic;
                } else {
                    throw ConfigError("mode must be static or dynamic");
                }
            },
            [](const RunConfig& c) { return std::string(c.mode == Mode::Static ? "static" : "dynamic"); },
            [](const RunConfig& c) { return CsvValue{std::string(c.mode == Mode::Static ? "static" : "dynamic")}; }},
        {"n", true, [](RunConfig& c, std::string_view v) { c.n = parse_small_int(v); },
            [](const RunConfig& c) { return std::to_string(c.n); },
            [](const RunConfig& c) { return CsvValue{std::int64_t{c.n}}; }},
        {"client_rate", true, [](RunConfig& c, std::string_view v) { c.rates.client_rate = parse_double(v); },
            [](const RunConfig& c) { return shortest(c.rates.client_rate); },
            [](const RunConfig& c) { return CsvValue{c.rates.client_rate}; }},
        {"provider_rate", true, [](RunConfig& c, std::string_view v) { c.rates.provider_rate = parse_double(v); },
            [](const RunConfig& c) { return shortest(c.rates.provider_rate); },
            [](const RunConfig& c) { return CsvValue{c.rates.provider_rate}; }},
        {"value_lo", true, [](RunConfig& c, std::string_view v) { c.values.lo = parse_small_int(v); },
            [](const RunConfig& c) { return std::to_string(c.values.lo); },
            [](const RunConfig& c) { return CsvValue{std::int64_t{c.values.lo}}; }},
        {"value_hi", true, [](RunConfig& c, std::string_view v) { c.values.hi = parse_small_int(v); },
            [](const RunConfig& c) { return std::to_string(c.values.hi); },
            [](const RunConfig& c) { return CsvValue{std::int64_t{c.values.hi}}; }},
        {"reuse", true,
            [](RunConfig& c, std::string_view v) {
                if (v == "reusable") {
                    c.reuse = ReusePolicy::Reusable;
                } else if (v == "oneshot" || v == "one-shot" || v == "one_shot") {
                    c.reuse = ReusePolicy::OneShot;
                } else {
                    throw ConfigError("reuse must be reusable or oneshot");
                }
            },
            [](const RunConfig& c) { return std::string(c.reuse == ReusePolicy::Reusable ? "reusable" : "oneshot"); },
            [](const RunConfig& c) {
                return CsvValue{std::string(c.reuse == ReusePolicy::Reusable ? "reusable" : "oneshot")};
            }},
        {"distant_help", true, [](RunConfig& c, std::string_view v) { c.match.distant_help = parse_bool(v); },
            [](const RunConfig& c) { return std::string(c.match.distant_help ? "true" : "false"); },
            [](const RunConfig& c) { return CsvValue{std::int64_t{c.match.distant_help ? 1 : 0}}; }},
        {"mutation", true, [](RunConfig& c, std::string_view v) { apply_mutation_rule(c.mutation, v); },
            [](const RunConfig& c) { return format_mutation_rule(c.mutation); },
            [](const RunConfig& c) { return CsvValue{format_mutation_rule(c.mutation)}; }},
        {"p_client", true, [](RunConfig& c, std::string_view v) { c.mutation.p_client = parse_double(v); },
            [](const RunConfig& c) { return shortest(c.mutation.p_client); },
            [](const RunConfig& c) { return CsvValue{c.mutation.p_client}; }},
        {"p_provider", true, [](RunConfig& c, std::string_view v) { c.mutation.p_provider = parse_double(v); },
            [](const RunConfig& c) { return shortest(c.mutation.p_provider); },
            [](const RunConfig& c) { return CsvValue{c.mutation.p_provider}; }},
        {"p_neutral", true, [](RunConfig& c, std::string_view v) { c.mutation.p_neutral = parse_double(v); },
            [](const RunConfig& c) { return shortest(c.mutation.p_neutral); },
            [](const RunConfig& c) { return CsvValue{c.mutation.p_neutral}; }},
        {"warmup", true, [](RunConfig& c, std::string_view v) { c.warmup_steps = parse_int(v); },
            [](const RunConfig& c) { return std::to_string(c.warmup_steps); },
            [](const RunConfig& c) { return CsvValue{c.warmup_steps}; }},
        {"interval", true, [](RunConfig& c, std::string_view v) { c.sample_interval = parse_int(v); },
            [](const RunConfig& c) { return std::to_string(c.sample_interval); },
            [](const RunConfig& c) { return CsvValue{c.sample_interval}; }},
        {"samples", true, [](RunConfig& c, std::string_view v) { c.sample_count = parse_int(v); },
            [](const RunConfig& c) { return std::to_string(c.sample_count); },
            [](const RunConfig& c) { return CsvValue{c.sample_count}; }},
        {"max_steps", true, [](RunConfig& c, std::string_view v) { c.max_steps = parse_int(v); },
            [](const RunConfig& c) { return std::to_string(c.max_steps); },
            [](const RunConfig& c) { return CsvValue{c.max_steps}; }},
    };
    return keys;
}

const KeyDef* find_key(std::string_view name)
{
    const auto& keys = run_keys();
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const KeyDef& k) { return k.name == name; });
    return it == keys.end() ? nullptr : &*it;
}

std::optional<Role> probability_role(std::string_view key)
{
    if (key == "p_client") {
        return Role::Client;
    }
    if (key == "p_provider") {
        return Role::Provider;
    }
    if (key == "p_neutral") {
        return Role::Neutral;
    }
    return std::nullopt;
}

std::string_view probability_key(Role role)
{
    switch (role) {
    case Role::Client: return "p_client";
    case Role::Provider: return "p_provider";
    case Role::Neutral: return "p_neutral";
    }
    return "";
}

void resolve_rest(RunConfig& config, const std::optional<Role>& rest)
{
    if (!rest) {
        return;
    }
    MutationConfig& m = config.mutation;
    switch (*rest) {
    case Role::Client: m.p_client = 1.0 - m.p_provider - m.p_neutral; break;
    case Role::Provider: m.p_provider = 1.0 - m.p_client - m.p_neutral; break;
    case Role::Neutral: m.p_neutral = 1.0 - m.p_client - m.p_provider; break;
    }
}

// Validation that parse_config applies to the base and to each point.
// Mutation probabilities are checked in both modes so that a config never
// carries an unusable mutation block.
struct Check {
    std::vector<std::string_view> keys;
    void (*run)(const RunConfig&);
};

const std::vector<Check>& checks()
{
    static const std::vector<Check> all = {
        {{"n"}, [](const RunConfig& c) {
             if (c.n < 2) {
                 throw ConfigError("n must be at least 2");
             }
         }},
        {{"client_rate", "provider_rate"}, [](const RunConfig& c) { c.rates.validate(); }},
        {{"value_lo", "value_hi"}, [](const RunConfig& c) { c.values.validate(); }},
        {{"mutation", "p_client", "p_provider", "p_neutral"}, [](const RunConfig& c) { c.mutation.validate(); }},
        {{"warmup", "interval", "samples"}, [](const RunConfig& c) {
             if (c.warmup_steps <= 0 || c.sample_interval <= 0 || c.sample_count <= 0) {
                 throw ConfigError("warmup, interval and samples must be positive");
             }
         }},
        {{"max_steps"}, [](const RunConfig& c) {
             if (c.max_steps <= 0) {
                 throw ConfigError("max_steps must be positive");
             }
         }},
    };
    return all;
}

// Returns the first failing check's message and the keys involved.
std::optional<std::pair<std::string, const Check*>> first_violation(const RunConfig& config)
{
    for (const Check& check : checks()) {
        try {
            check.run(config);
        } catch (const ConfigError& e) {
            return std::make_pair(std::string(e.what()), &check);
        }
    }
    return std::nullopt;
}

std::string point_label(const ExperimentSpec& spec, const std::vector<std::string>& values)
{
    std::string label;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        if (a > 0) {
            label += ", ";
        }
        label += spec.axes[a].key + "=" + values[a];
    }
    return label;
}

std::vector<std::string> split_list(std::string_view s)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        const auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (item.empty()) {
            throw ConfigError("empty item in value list");
        }
        out.emplace_back(item);
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

} // namespace

ExperimentSpec parse_config(std::string_view text)
{
    ExperimentSpec spec;
    std::map<std::string, int, std::less<>> seen;

    auto error_at = [](int line, std::string_view key, const std::string& msg) {
        return ConfigError("line " + std::to_string(line) + ": key '" + std::string(key) + "': " + msg);
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": missing key");
        }
        if (value.empty()) {
            throw error_at(line_no, key, "missing value");
        }
        if (!seen.emplace(std::string(key), line_no).second) {
            throw error_at(line_no, key, "duplicate key");
        }

        try {
            if (key == "seed") {
                spec.master_seed = parse_uint(value);
            } else if (key == "replicates") {
                spec.replicates = parse_int(value);
                if (spec.replicates < 1) {
                    throw ConfigError("replicates must be at least 1");
                }
            } else if (key == "output") {
                spec.output = std::string(value);
            } else if (key == "skip_infeasible") {
                spec.skip_infeasible = parse_bool(value);
            } else if (key.starts_with("sweep.")) {
                const auto axis_key = key.substr(6);
                const KeyDef* def = find_key(axis_key);
                if (def == nullptr) {
                    throw ConfigError("unknown sweep parameter '" + std::string(axis_key) + "'");
                }
                if (!def->sweepable) {
                    throw ConfigError("'" + std::string(axis_key) + "' cannot be swept");
                }
                SweepAxis axis{std::string(axis_key), split_list(value)};
                // Type-check each value against a scratch config.
                for (const auto& v : axis.values) {
                    RunConfig scratch;
                    def->apply(scratch, v);
                }
                spec.axes.push_back(std::move(axis));
            } else if (const KeyDef* def = find_key(key)) {
                if (value == "rest") {
                    const auto role = probability_role(key);
                    if (!role) {
                        throw ConfigError("'rest' only applies to p_client, p_provider or p_neutral");
                    }
                    if (spec.rest_probability) {
                        throw ConfigError("only one probability may be 'rest'");
                    }
                    spec.rest_probability = role;
                } else {
                    def->apply(spec.base, value);
                }
            } else {
                throw ConfigError("unknown key");
            }
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            if (msg.starts_with("line ")) {
                throw;
            }
            throw error_at(line_no, key, msg);
        }
    }

    auto line_of = [&seen](std::string_view k) {
        const auto it = seen.find(k);
        return it == seen.end() ? 0 : it->second;
    };

    if (spec.rest_probability) {
        const auto rest_key = probability_key(*spec.rest_probability);
        for (const auto& axis : spec.axes) {
            if (axis.key == rest_key) {
                throw error_at(line_of("sweep." + axis.key), "sweep." + axis.key,
                    "cannot sweep a probability declared as 'rest'");
            }
        }
        resolve_rest(spec.base, spec.rest_probability);
    }

    if (auto bad = first_violation(spec.base)) {
        // Blame the latest line among the keys the failing check depends on.
        std::string_view blamed = bad->second->keys.front();
        int blamed_line = 0;
        for (const auto k : bad->second->keys) {
            if (line_of(k) > blamed_line) {
                blamed_line = line_of(k);
                blamed = k;
            }
        }
        throw error_at(blamed_line, blamed, bad->first);
    }

    if (!spec.skip_infeasible && !spec.axes.empty()) {
        try {
            (void)expand_points(spec);
        } catch (const ConfigError& e) {
            const auto& last = spec.axes.back();
            throw error_at(line_of("sweep." + last.key), "sweep." + last.key, e.what());
        }
    }
    return spec;
}

std::string format_config(const ExperimentSpec& spec)
{
    std::ostringstream out;
    const std::optional<std::string_view> rest_key
        = spec.rest_probability ? std::optional(probability_key(*spec.rest_probability)) : std::nullopt;
    for (const KeyDef& def : run_keys()) {
        out << def.name << " = " << (rest_key && *rest_key == def.name ? std::string("rest") : def.text(spec.base)) << '\n';
    }
    out << "seed = " << spec.master_seed << '\n';
    out << "replicates = " << spec.replicates << '\n';
    out << "skip_infeasible = " << (spec.skip_infeasible ? "true" : "false") << '\n';
    if (!spec.output.empty()) {
        out << "output = " << spec.output << '\n';
    }
    for (const auto& axis : spec.axes) {
        out << "sweep." << axis.key << " = ";
        for (std::size_t i = 0; i < axis.values.size(); ++i) {
            out << (i > 0 ? "," : "") << axis.values[i];
        }
        out << '\n';
    }
    return out.str();
}

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = {"fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
    return names;
}

ExperimentSpec figure_preset(std::string_view name)
{
    static const std::string static_axes = "n = 30\n"
                                           "skip_infeasible = true\n"
                                           "sweep.client_rate = 0.05,0.15,0.3,0.45,0.6\n"
                                           "sweep.provider_rate = 0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8\n";
    static const std::string mutation_probs = "mode = dynamic\n"
                                              "p_neutral = 0.5\n"
                                              "p_provider = rest\n";
    static const std::string p_client_axis = "sweep.p_client = 0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45\n";
    std::string text;
    if (name == "fig4") {
        text = "mode = static\nreuse = oneshot\n" + static_axes;
    } else if (name == "fig5") {
        text = "mode = static\nreuse = reusable\n" + static_axes;
    } else if (name == "fig6") {
        text = "mode = dynamic\n"
               "n = 30\n"
               "mutation = count:1\n"
               "p_client = 0.25\n"
               "p_provider = 0.25\n"
               "p_neutral = 0.5\n"
               "provider_rate = 0.25\n"
               "sweep.client_rate = 0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6\n";
    } else if (name == "fig7") {
        text = mutation_probs + "mutation = count:1\nsweep.n = 10,30\n" + p_client_axis;
    } else if (name == "fig8") {
        text = mutation_probs + "mutation = fraction:0.01\nsweep.n = 10,30\n" + p_client_axis;
    } else if (name == "fig9") {
        text = mutation_probs + "mutation = fraction:0.01\ndistant_help = true\nsweep.n = 10,20,30,40\n" + p_client_axis;
    } else {
        std::string valid;
        for (const auto& n : preset_names()) {
            valid += (valid.empty() ? "" : ", ") + n;
        }
        throw UsageError("unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
    }
    return parse_config(text);
}

std::vector<SweepPoint> expand_points(const ExperimentSpec& spec)
{
    std::size_t total = 1;
    for (const auto& axis : spec.axes) {
        total *= axis.values.size();
    }

    std::vector<SweepPoint> points;
    points.reserve(total);
    std::vector<std::string> values(spec.axes.size());
    for (std::size_t p = 0; p < total; ++p) {
        // Mixed-radix decode with the last axis varying fastest.
        std::size_t rem = p;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const auto& axis = spec.axes[a];
            values[a] = axis.values[rem % axis.values.size()];
            rem /= axis.values.size();
        }

        RunConfig config = spec.base;
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            find_key(spec.axes[a].key)->apply(config, values[a]);
        }
        resolve_rest(config, spec.rest_probability);
        if (auto bad = first_violation(config)) {
            if (spec.skip_infeasible) {
                continue;
            }
            throw ConfigError("point " + std::to_string(p) + " (" + point_label(spec, values) + "): " + bad->first);
        }
        points.push_back(SweepPoint{p, values, std::move(config)});
    }
    return points;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t point_index, std::int64_t replicates, std::int64_t replicate)
{
    return master_seed + static_cast<std::uint64_t>(point_index) * static_cast<std::uint64_t>(replicates)
        + static_cast<std::uint64_t>(replicate);
}

std::vector<std::string> result_columns(const ExperimentSpec& spec)
{
    std::vector<std::string> cols;
    for (const auto& axis : spec.axes) {
        cols.push_back(axis.key);
    }
    cols.insert(cols.end(), {"replicate", "seed"});
    if (spec.base.mode == Mode::Static) {
        cols.insert(cols.end(),
            {"initial_clients", "immediate_satisfaction", "eventual_satisfaction", "steps_to_quiescence", "quiescent"});
    } else {
        cols.insert(cols.end(),
            {"mean_req_rate_all", "mean_req_rate_waiting", "mean_satisfaction", "sd_req_rate_all", "min_req_rate_all",
                "max_req_rate_all", "sd_req_rate_waiting"});
    }
    return cols;
}

std::vector<CsvValue> axis_values(const ExperimentSpec& spec, const RunConfig& config)
{
    std::vector<CsvValue> out;
    for (const auto& axis : spec.axes) {
        out.push_back(find_key(axis.key)->csv(config));
    }
    return out;
}

ExperimentSpec single_point(ExperimentSpec spec)
{
    spec.axes.clear();
    return spec;
}

} // namespace aalsim
