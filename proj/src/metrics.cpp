#include "aalsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "aalsim/error.hpp"

namespace aalsim {

MetricsSample measure(const Community& community, std::int64_t step)
{
    MetricsSample s;
    s.step = step;
    std::int64_t waiting = 0;
    for (const Cell& cell : community.cells()) {
        switch (cell.role) {
        case Role::Client:
            ++s.n_client;
            if (cell.work_status()) {
                ++s.n_client_in_service;
            } else {
                ++waiting;
            }
            break;
        case Role::Provider: ++s.n_provider; break;
        case Role::Neutral: ++s.n_neutral; break;
        }
        if (cell.work_status()) {
            ++s.n_in_service;
        }
    }
    const auto total = static_cast<double>(community.cell_count());
    s.req_rate_all = static_cast<double>(s.n_client) / total;
    s.req_rate_waiting = static_cast<double>(waiting) / total;
    s.satisfaction = 1.0 - s.req_rate_all;
    return s;
}

namespace {

template <typename Get>
Dispersion disperse(std::span<const MetricsSample> samples, Get get)
{
    Dispersion d;
    d.min = get(samples.front());
    d.max = d.min;
    double sum = 0.0;
    for (const auto& s : samples) {
        const double v = get(s);
        sum += v;
        d.min = std::min(d.min, v);
        d.max = std::max(d.max, v);
    }
    const auto count = static_cast<double>(samples.size());
    d.mean = std::clamp(sum / count, d.min, d.max);
    double sq = 0.0;
    for (const auto& s : samples) {
        const double dev = get(s) - d.mean;
        sq += dev * dev;
    }
    d.stddev = std::sqrt(sq / count);
    return d;
}

} // namespace

MetricsSummary aggregate(std::span<const MetricsSample> samples)
{
    if (samples.empty()) {
        throw UsageError("aggregate needs at least one sample");
    }
    MetricsSummary out;
    out.count = samples.size();
    out.req_rate_all = disperse(samples, [](const MetricsSample& s) { return s.req_rate_all; });
    out.req_rate_waiting = disperse(samples, [](const MetricsSample& s) { return s.req_rate_waiting; });
    out.satisfaction = disperse(samples, [](const MetricsSample& s) { return s.satisfaction; });
    return out;
}

} // namespace aalsim
