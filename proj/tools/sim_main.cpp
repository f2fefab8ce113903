// sim: command-line front end for the mutual-assistance community simulator.
//
//   sim run <config>       one point (sweep axes ignored), all replicates
//   sim sweep <config>     full Cartesian product of sweep axes
//   sim preset <figN>      built-in figure experiment
//   sim snapshot <config>  per-cell grid dump after --steps steps
//
// Exit codes: 0 success, 1 configuration or usage error, 2 runtime error.
// AALSIM_THREADS sets the number of worker threads.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "aalsim/csv.hpp"
#include "aalsim/error.hpp"
#include "aalsim/experiment.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_runtime = 2;

struct Overrides {
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> replicates;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw aalsim::ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void apply(aalsim::ExperimentSpec& spec, const Overrides& o)
{
    if (!o.out.empty()) {
        spec.output = o.out;
    }
    if (o.seed) {
        spec.master_seed = *o.seed;
    }
    if (o.replicates) {
        if (*o.replicates < 1) {
            throw aalsim::ConfigError("--replicates must be at least 1");
        }
        spec.replicates = *o.replicates;
    }
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

void add_overrides(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--out,-o", o.out, "CSV output path (default: config 'output' or stdout)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--replicates", o.replicates, "replicates per sweep point");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Mutual-assistance community simulator"};
    app.require_subcommand(1);

    Overrides run_opts;
    std::string run_config;
    auto* run = app.add_subcommand("run", "run one configuration (sweep axes ignored)");
    run->add_option("config", run_config, "config file")->required();
    add_overrides(run, run_opts);

    Overrides sweep_opts;
    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "run every point of the configured sweep");
    sweep->add_option("config", sweep_config, "config file")->required();
    add_overrides(sweep, sweep_opts);

    Overrides preset_opts;
    std::string preset_name;
    bool print_config = false;
    auto* preset = app.add_subcommand("preset", "run a built-in figure experiment");
    preset->add_option("name", preset_name, "fig4 | fig5 | fig6 | fig7 | fig8 | fig9")->required();
    preset->add_flag("--print-config", print_config, "print the preset's config text instead of running it");
    add_overrides(preset, preset_opts);

    Overrides snap_opts;
    std::string snap_config;
    std::int64_t snap_steps = 0;
    auto* snapshot = app.add_subcommand("snapshot", "dump the grid after a number of steps");
    snapshot->add_option("config", snap_config, "config file")->required();
    snapshot->add_option("--steps", snap_steps, "steps to simulate before the dump")->check(CLI::NonNegativeNumber);
    add_overrides(snapshot, snap_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        aalsim::ExperimentSpec spec;
        if (*run) {
            spec = aalsim::single_point(aalsim::parse_config(read_file(run_config)));
            apply(spec, run_opts);
        } else if (*sweep) {
            spec = aalsim::parse_config(read_file(sweep_config));
            apply(spec, sweep_opts);
        } else if (*preset) {
            spec = aalsim::figure_preset(preset_name);
            apply(spec, preset_opts);
            if (print_config) {
                std::cout << aalsim::format_config(spec);
                return exit_ok;
            }
        } else {
            spec = aalsim::parse_config(read_file(snap_config));
            apply(spec, snap_opts);
            aalsim::RunConfig config = spec.base;
            config.seed = spec.master_seed;
            aalsim::Stream rng(config.seed);
            aalsim::Community community = aalsim::init_grid(config.n, config.rates, config.values, rng);
            for (std::int64_t t = 0; t < snap_steps; ++t) {
                aalsim::step(community, config, rng);
            }
            write_output(spec.output, aalsim::emit_snapshot(community));
            return exit_ok;
        }

        const aalsim::ResultTable table = aalsim::run_experiment(spec);
        write_output(spec.output, aalsim::emit_csv(table));
        return exit_ok;
    } catch (const aalsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const aalsim::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
