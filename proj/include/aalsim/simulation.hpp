#pragma once

#include <cstdint>
#include <vector>

#include "aalsim/community.hpp"
#include "aalsim/matching.hpp"
#include "aalsim/metrics.hpp"
#include "aalsim/random.hpp"
#include "aalsim/service.hpp"

namespace aalsim {

enum class Mode { Static, Dynamic };

/// How many cells mutate per step, and the role a mutated cell takes.
struct MutationConfig {
    enum class Rule { FixedCount, Fraction };

    Rule rule = Rule::FixedCount;
    std::int64_t count = 1;   // FixedCount
    double fraction = 0.0;    // Fraction of n*n, rounded half away from zero
    double p_client = 0.25;
    double p_provider = 0.25;
    double p_neutral = 0.50;

    static MutationConfig fixed(std::int64_t k) { return MutationConfig{Rule::FixedCount, k, 0.0}; }
    static MutationConfig share(double f) { return MutationConfig{Rule::Fraction, 0, f}; }

    void validate() const;
    std::int64_t cells_per_step(int n) const;

    bool operator==(const MutationConfig&) const = default;
};

struct RunConfig {
    int n = 30;
    InitRates rates{0.3, 0.3};
    ValueDistribution values;
    MatchPolicy match;
    ReusePolicy reuse = ReusePolicy::Reusable;
    Mode mode = Mode::Static;
    MutationConfig mutation;
    std::int64_t warmup_steps = 5000;
    std::int64_t sample_interval = 50;
    std::int64_t sample_count = 100;
    std::int64_t max_steps = 100000;
    std::uint64_t seed = 1;

    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

struct Mutation {
    Coord cell;
    Role from = Role::Neutral;
    Role to = Role::Neutral;

    bool operator==(const Mutation&) const = default;
};

struct StepReport {
    std::int64_t pairs_formed = 0;
    std::int64_t services_finished = 0;
    std::int64_t cells_mutated = 0;

    bool operator==(const StepReport&) const = default;
};

/// Picks m free cells without replacement (partial Fisher-Yates over the
/// row-major list of free cells, one below() draw per pick), then for each
/// picked cell in pick order draws u = uniform01() for the target role and
/// one value draw. A cell that draws its current role is left untouched.
/// If fewer than m cells are free, all of them mutate.
std::vector<Mutation> mutate(Community& community, const MutationConfig& mc, const ValueDistribution& values, Stream& rng);

/// One time step: mutation (Dynamic only), match_round, one service_tick
/// per active pair, then finish_service for every pair with no work left.
StepReport step(Community& community, const RunConfig& config, Stream& rng);

/// No active pairs and no pair could be formed.
bool quiescent(const Community& community, const MatchPolicy& policy);

struct StaticResult {
    std::int64_t initial_clients = 0;
    std::int64_t matched_first_round = 0;
    std::int64_t served = 0;
    double immediate_satisfaction = 1.0;
    double eventual_satisfaction = 1.0;
    std::int64_t steps_to_quiescence = 0;
    bool quiescent = true;

    bool operator==(const StaticResult&) const = default;
};

struct DynamicResult {
    std::vector<MetricsSample> samples;
    MetricsSummary summary;
    double mean_req_rate_all = 0.0;
    double mean_req_rate_waiting = 0.0;

    bool operator==(const DynamicResult&) const = default;
};

StaticResult run_static(const RunConfig& config);

/// Warm up for warmup_steps, then sample after every sample_interval steps
/// until sample_count samples are taken.
DynamicResult run_dynamic(const RunConfig& config);

} // namespace aalsim
