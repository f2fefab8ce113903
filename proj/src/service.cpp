#include "aalsim/service.hpp"

#include <algorithm>

#include "aalsim/error.hpp"

namespace aalsim {

namespace {

bool active(const ServicePair& pair, const Community& community)
{
    const Cell& client = community.at(pair.client);
    const Cell& provider = community.at(pair.provider);
    return client.partner == pair.provider && provider.partner == pair.client && client.role == Role::Client
        && provider.role == Role::Provider;
}

} // namespace

Work service_tick(const ServicePair& pair, Community& community)
{
    if (!active(pair, community)) {
        throw InternalError("service_tick on an inactive pair");
    }
    Cell& client = community.at(pair.client);
    const int speed = community.at(pair.provider).pro_value;
    // pro_value units per 10 steps is pro_value tenths per step.
    client.req_value.tenths = std::max<std::int64_t>(0, client.req_value.tenths - speed);
    return client.req_value;
}

void finish_service(const ServicePair& pair, Community& community, ReusePolicy reuse)
{
    if (!active(pair, community)) {
        throw InternalError("finish_service on an inactive pair");
    }
    if (!community.at(pair.client).req_value.zero()) {
        throw InternalError("finish_service with work outstanding");
    }

    auto& pairs = community.pairs();
    const auto it = std::find(pairs.begin(), pairs.end(), pair);
    if (it == pairs.end()) {
        throw InternalError("finish_service on an unregistered pair");
    }
    pairs.erase(it);

    Cell& client = community.at(pair.client);
    Cell& provider = community.at(pair.provider);
    client.partner.reset();
    provider.partner.reset();
    community.assign(pair.client, Role::Neutral, 0);
    if (reuse == ReusePolicy::OneShot) {
        community.assign(pair.provider, Role::Neutral, 0);
    }
}

std::int64_t service_duration(Work req_value, int pro_value)
{
    if (pro_value <= 0) {
        throw InternalError("service_duration needs a positive pro_value");
    }
    return (req_value.tenths + pro_value - 1) / pro_value;
}

} // namespace aalsim
