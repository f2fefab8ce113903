#pragma once

#include <cstdint>

#include "aalsim/community.hpp"

namespace aalsim {

enum class ReusePolicy { OneShot, Reusable };

/// One step of service: the client's req_value drops by pro_value / 10,
/// clamped at zero. Throws InternalError if the pair is not active.
Work service_tick(const ServicePair& pair, Community& community);

/// Ends a completed service. Both cells are freed, the client turns
/// Neutral, and the provider turns Neutral (OneShot) or stays a Provider
/// with its pro_value (Reusable). The pair is removed from the community.
/// Throws InternalError if the client still has work outstanding.
void finish_service(const ServicePair& pair, Community& community, ReusePolicy reuse);

/// Number of ticks a service needs: ceil(req_value / (pro_value / 10)).
std::int64_t service_duration(Work req_value, int pro_value);

} // namespace aalsim
