#include "aalsim/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "aalsim/error.hpp"

namespace aalsim {

void MutationConfig::validate() const
{
    if (rule == Rule::FixedCount && count < 0) {
        throw ConfigError("mutation count must be non-negative");
    }
    if (rule == Rule::Fraction && !(fraction >= 0.0 && fraction <= 1.0)) {
        throw ConfigError("mutation fraction must lie in [0, 1]");
    }
    if (!(p_client >= 0.0) || !(p_provider >= 0.0) || !(p_neutral >= 0.0)) {
        throw ConfigError("mutation probabilities must be non-negative");
    }
    if (std::abs(p_client + p_provider + p_neutral - 1.0) > 1e-9) {
        throw ConfigError("p_client + p_provider + p_neutral must equal 1");
    }
}

std::int64_t MutationConfig::cells_per_step(int n) const
{
    if (rule == Rule::FixedCount) {
        return count;
    }
    return std::llround(fraction * static_cast<double>(n) * static_cast<double>(n));
}

void RunConfig::validate() const
{
    if (n < 2) {
        throw ConfigError("n must be at least 2");
    }
    rates.validate();
    values.validate();
    if (max_steps <= 0) {
        throw ConfigError("max_steps must be positive");
    }
    if (mode == Mode::Dynamic) {
        mutation.validate();
        if (warmup_steps <= 0 || sample_interval <= 0 || sample_count <= 0) {
            throw ConfigError("warmup, interval and samples must be positive in dynamic mode");
        }
    }
}

std::vector<Mutation> mutate(Community& community, const MutationConfig& mc, const ValueDistribution& values, Stream& rng)
{
    std::vector<Mutation> out;
    const std::int64_t wanted = mc.cells_per_step(community.size());
    if (wanted <= 0) {
        return out;
    }

    std::vector<std::size_t> free_cells;
    const auto cells = community.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!cells[i].work_status()) {
            free_cells.push_back(i);
        }
    }
    const std::size_t m = std::min(static_cast<std::size_t>(wanted), free_cells.size());
    out.reserve(m);

    const double client_cut = mc.p_client;
    const double provider_cut = mc.p_client + mc.p_provider;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(rng.below(free_cells.size() - k));
        std::swap(free_cells[k], free_cells[j]);
        const Coord c = community.coord(free_cells[k]);

        const double u = rng.uniform01();
        const int v = values.draw(rng);
        const Role to = u < client_cut ? Role::Client : (u < provider_cut ? Role::Provider : Role::Neutral);
        const Role from = community.at(c).role;
        if (to != from) {
            community.assign(c, to, v);
        }
        out.push_back(Mutation{c, from, to});
    }
    return out;
}

StepReport step(Community& community, const RunConfig& config, Stream& rng)
{
    StepReport report;
    if (config.mode == Mode::Dynamic) {
        report.cells_mutated = static_cast<std::int64_t>(mutate(community, config.mutation, config.values, rng).size());
    }

    report.pairs_formed = static_cast<std::int64_t>(match_round(community, config.match).size());

    std::vector<ServicePair> done;
    for (const ServicePair& pair : community.pairs()) {
        if (service_tick(pair, community).zero()) {
            done.push_back(pair);
        }
    }
    for (const ServicePair& pair : done) {
        finish_service(pair, community, config.reuse);
    }
    report.services_finished = static_cast<std::int64_t>(done.size());
    return report;
}

bool quiescent(const Community& community, const MatchPolicy& policy)
{
    return community.pairs().empty() && !match_possible(community, policy);
}

StaticResult run_static(const RunConfig& config)
{
    config.validate();
    if (config.mode != Mode::Static) {
        throw ConfigError("run_static needs mode = static");
    }
    Stream rng(config.seed);
    Community community = init_grid(config.n, config.rates, config.values, rng);

    StaticResult result;
    for (const Cell& cell : community.cells()) {
        result.initial_clients += cell.role == Role::Client ? 1 : 0;
    }

    // Static mode never creates clients, so every finished service belongs
    // to an initial client.
    while (!quiescent(community, config.match)) {
        if (result.steps_to_quiescence >= config.max_steps) {
            result.quiescent = false;
            break;
        }
        const StepReport r = step(community, config, rng);
        if (result.steps_to_quiescence == 0) {
            result.matched_first_round = r.pairs_formed;
        }
        result.served += r.services_finished;
        ++result.steps_to_quiescence;
    }

    if (result.initial_clients > 0) {
        const auto k = static_cast<double>(result.initial_clients);
        result.immediate_satisfaction = static_cast<double>(result.matched_first_round) / k;
        result.eventual_satisfaction = static_cast<double>(result.served) / k;
    }
    return result;
}

DynamicResult run_dynamic(const RunConfig& config)
{
    config.validate();
    if (config.mode != Mode::Dynamic) {
        throw ConfigError("run_dynamic needs mode = dynamic");
    }
    Stream rng(config.seed);
    Community community = init_grid(config.n, config.rates, config.values, rng);

    std::int64_t t = 0;
    for (; t < config.warmup_steps; ++t) {
        step(community, config, rng);
    }

    DynamicResult result;
    result.samples.reserve(static_cast<std::size_t>(config.sample_count));
    for (std::int64_t k = 0; k < config.sample_count; ++k) {
        for (std::int64_t i = 0; i < config.sample_interval; ++i, ++t) {
            step(community, config, rng);
        }
        result.samples.push_back(measure(community, t));
    }
    result.summary = aggregate(result.samples);
    result.mean_req_rate_all = result.summary.req_rate_all.mean;
    result.mean_req_rate_waiting = result.summary.req_rate_waiting.mean;
    return result;
}

} // namespace aalsim
