#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aalsim/csv.hpp"
#include "aalsim/simulation.hpp"

namespace aalsim {

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;

    bool operator==(const SweepAxis&) const = default;
};

/// A base run plus the parameter grid to sweep it over.
///
/// Config text is one `key = value` per line, `#` starts a comment.
/// Run keys: mode, n, client_rate, provider_rate, value_lo, value_hi, reuse,
/// distant_help, mutation (count:K or fraction:F), p_client, p_provider,
/// p_neutral (any one of the three may be `rest`), warmup, interval,
/// samples, max_steps. Experiment keys: seed, replicates, output,
/// skip_infeasible. `sweep.<run key> = v1,v2,...` adds an axis.
struct ExperimentSpec {
    RunConfig base;
    std::vector<SweepAxis> axes;
    std::int64_t replicates = 10;
    std::uint64_t master_seed = 1;
    std::string output;
    bool skip_infeasible = false;
    /// Which mutation probability is derived as 1 minus the other two.
    std::optional<Role> rest_probability;

    bool operator==(const ExperimentSpec&) const = default;
};

/// Throws ConfigError with "line L: key 'k': ..." on unknown keys,
/// malformed values, and violated invariants.
ExperimentSpec parse_config(std::string_view text);

/// Config text that parse_config maps back to an equal spec.
std::string format_config(const ExperimentSpec& spec);

/// Names accepted by figure_preset, in order.
const std::vector<std::string>& preset_names();

/// Throws UsageError listing valid names for anything else.
ExperimentSpec figure_preset(std::string_view name);

/// One concrete run of a sweep.
struct SweepPoint {
    std::size_t point_index = 0;
    std::vector<std::string> values;  // one per axis
    RunConfig config;                 // seed not yet assigned
};

/// Cartesian product of the axes, first axis outermost. Infeasible points are
/// dropped when skip_infeasible is set, otherwise they raise ConfigError.
std::vector<SweepPoint> expand_points(const ExperimentSpec& spec);

/// Seed of replicate `replicate` at `point_index`:
/// master_seed + point_index * replicates + replicate (mod 2^64).
std::uint64_t derive_seed(std::uint64_t master_seed, std::size_t point_index, std::int64_t replicates, std::int64_t replicate);

/// CSV fields for the swept parameters of one point, in axis order.
std::vector<CsvValue> axis_values(const ExperimentSpec& spec, const RunConfig& config);

/// Column names for a spec's result table.
std::vector<std::string> result_columns(const ExperimentSpec& spec);

/// Runs every point x replicate in parallel with OpenMP. Rows come out in
/// (point, replicate) order whatever the completion order. `threads` <= 0
/// uses AALSIM_THREADS or the OpenMP default.
ResultTable run_experiment(const ExperimentSpec& spec, int threads = 0);

/// Single-threaded reference for run_experiment; must produce an identical table.
ResultTable run_experiment_serial(const ExperimentSpec& spec);

/// The same spec with its sweep axes removed.
ExperimentSpec single_point(ExperimentSpec spec);

} // namespace aalsim
