#pragma once

#include <cstdint>
#include <span>

#include "aalsim/community.hpp"

namespace aalsim {

/// Role counts and request rates at one instant. Rates are fractions of
/// all n*n cells.
struct MetricsSample {
    std::int64_t step = 0;
    std::int64_t n_client = 0;
    std::int64_t n_provider = 0;
    std::int64_t n_neutral = 0;
    std::int64_t n_in_service = 0;   // busy cells (clients and providers)
    std::int64_t n_client_in_service = 0;
    double req_rate_all = 0.0;       // clients / n^2
    double req_rate_waiting = 0.0;   // free clients / n^2
    double satisfaction = 1.0;       // 1 - req_rate_all

    bool operator==(const MetricsSample&) const = default;
};

MetricsSample measure(const Community& community, std::int64_t step);

struct Dispersion {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;  // population standard deviation

    bool operator==(const Dispersion&) const = default;
};

struct MetricsSummary {
    std::size_t count = 0;
    Dispersion req_rate_all;
    Dispersion req_rate_waiting;
    Dispersion satisfaction;

    bool operator==(const MetricsSummary&) const = default;
};

/// Throws UsageError on an empty sequence.
MetricsSummary aggregate(std::span<const MetricsSample> samples);

} // namespace aalsim
