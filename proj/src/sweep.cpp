#include <cstdlib>
#include <exception>
#include <string>

#include <omp.h>

#include "aalsim/error.hpp"
#include "aalsim/experiment.hpp"

namespace aalsim {

namespace {

struct Job {
    const SweepPoint* point;
    std::int64_t replicate;
    std::uint64_t seed;
};

std::vector<Job> plan_jobs(const ExperimentSpec& spec, const std::vector<SweepPoint>& points)
{
    std::vector<Job> jobs;
    jobs.reserve(points.size() * static_cast<std::size_t>(spec.replicates));
    for (const SweepPoint& point : points) {
        for (std::int64_t r = 0; r < spec.replicates; ++r) {
            jobs.push_back(Job{&point, r, derive_seed(spec.master_seed, point.point_index, spec.replicates, r)});
        }
    }
    return jobs;
}

std::vector<CsvValue> run_job(const ExperimentSpec& spec, const Job& job)
{
    RunConfig config = job.point->config;
    config.seed = job.seed;

    std::vector<CsvValue> row = axis_values(spec, config);
    row.emplace_back(job.replicate);
    row.emplace_back(job.seed);
    if (config.mode == Mode::Static) {
        const StaticResult r = run_static(config);
        row.emplace_back(r.initial_clients);
        row.emplace_back(r.immediate_satisfaction);
        row.emplace_back(r.eventual_satisfaction);
        row.emplace_back(r.steps_to_quiescence);
        row.emplace_back(std::int64_t{r.quiescent ? 1 : 0});
    } else {
        const DynamicResult r = run_dynamic(config);
        row.emplace_back(r.mean_req_rate_all);
        row.emplace_back(r.mean_req_rate_waiting);
        row.emplace_back(r.summary.satisfaction.mean);
        row.emplace_back(r.summary.req_rate_all.stddev);
        row.emplace_back(r.summary.req_rate_all.min);
        row.emplace_back(r.summary.req_rate_all.max);
        row.emplace_back(r.summary.req_rate_waiting.stddev);
    }
    return row;
}

[[noreturn]] void rethrow_for_point(const ExperimentSpec& spec, const Job& job, std::exception_ptr error)
{
    std::string label = "point " + std::to_string(job.point->point_index) + " (";
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        label += (a > 0 ? ", " : "") + spec.axes[a].key + "=" + job.point->values[a];
    }
    label += "), replicate " + std::to_string(job.replicate) + ": ";
    try {
        std::rethrow_exception(error);
    } catch (const ConfigError& e) {
        throw ConfigError(label + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(label + e.what());
    }
}

int thread_count(int requested)
{
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("AALSIM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) {
            return v;
        }
    }
    return omp_get_max_threads();
}

} // namespace

ResultTable run_experiment(const ExperimentSpec& spec, int threads)
{
    const std::vector<SweepPoint> points = expand_points(spec);
    const std::vector<Job> jobs = plan_jobs(spec, points);

    ResultTable table;
    table.columns = result_columns(spec);
    table.rows.resize(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());

    const auto count = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(threads))
    for (std::int64_t j = 0; j < count; ++j) {
        const auto i = static_cast<std::size_t>(j);
        try {
            table.rows[i] = run_job(spec, jobs[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }

    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (errors[i]) {
            rethrow_for_point(spec, jobs[i], errors[i]);
        }
    }
    return table;
}

ResultTable run_experiment_serial(const ExperimentSpec& spec)
{
    const std::vector<SweepPoint> points = expand_points(spec);
    const std::vector<Job> jobs = plan_jobs(spec, points);

    ResultTable table;
    table.columns = result_columns(spec);
    table.rows.reserve(jobs.size());
    for (const Job& job : jobs) {
        try {
            table.rows.push_back(run_job(spec, job));
        } catch (...) {
            rethrow_for_point(spec, job, std::current_exception());
        }
    }
    return table;
}

} // namespace aalsim
