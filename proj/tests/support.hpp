#pragma once

#include <initializer_list>

#include "aalsim/community.hpp"

namespace aalsim::testing {

struct Placement {
    Coord at;
    Role role;
    int value;
};

inline Community make_grid(int n, std::initializer_list<Placement> cells)
{
    Community c(n);
    for (const auto& p : cells) {
        c.assign(p.at, p.role, p.value);
    }
    return c;
}

/// Links two cells as an active pair without going through matching.
inline void link(Community& c, Coord client, Coord provider, Ring ring = Ring::Adjacent)
{
    c.at(client).partner = provider;
    c.at(provider).partner = client;
    c.pairs().push_back(ServicePair{client, provider, ring});
}

} // namespace aalsim::testing
