#include "aalsim/community.hpp"

#include <cmath>
#include <string>

#include "aalsim/error.hpp"

namespace aalsim {

std::string_view to_string(Role role)
{
    switch (role) {
    case Role::Client: return "client";
    case Role::Provider: return "provider";
    case Role::Neutral: return "neutral";
    }
    return "?";
}

std::string_view to_string(Ring ring)
{
    return ring == Ring::Adjacent ? "adjacent" : "second_close";
}

void InitRates::validate() const
{
    if (!(client_rate >= 0.0) || !(provider_rate >= 0.0)) {
        throw ConfigError("init rates must be non-negative");
    }
    if (client_rate + provider_rate > 1.0 + 1e-12) {
        throw ConfigError("client_rate + provider_rate must not exceed 1");
    }
}

void ValueDistribution::validate() const
{
    if (lo < 1 || hi < lo) {
        throw ConfigError("value distribution needs 1 <= value_lo <= value_hi");
    }
}

int ValueDistribution::draw(Stream& rng) const
{
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Community::Community(int n)
    : n_(n)
{
    if (n < 2) {
        throw ConfigError("grid size must be at least 2");
    }
    cells_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
}

void Community::assign(Coord c, Role role, int value)
{
    Cell& cell = at(c);
    cell.role = role;
    cell.req_value = role == Role::Client ? Work::units(value) : Work{};
    cell.pro_value = role == Role::Provider ? value : 0;
}

void Community::check_invariants() const
{
    auto fail = [](Coord c, const char* what) {
        throw InternalError("cell (" + std::to_string(c.row) + "," + std::to_string(c.col) + "): " + what);
    };

    std::size_t busy = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const Cell& cell = cells_[i];
        const Coord c = coord(i);
        if (cell.role != Role::Client && !cell.req_value.zero()) {
            fail(c, "non-client with req_value");
        }
        if (cell.role != Role::Provider && cell.pro_value != 0) {
            fail(c, "non-provider with pro_value");
        }
        if (cell.req_value.tenths < 0 || cell.pro_value < 0) {
            fail(c, "negative value");
        }
        if (cell.role == Role::Neutral && cell.work_status()) {
            fail(c, "busy neutral");
        }
        if (cell.partner) {
            ++busy;
            const Cell& other = at(*cell.partner);
            if (!other.partner || *other.partner != c) {
                fail(c, "asymmetric partner link");
            }
        }
    }

    if (busy != 2 * pairs_.size()) {
        throw InternalError("busy cell count does not match pair count");
    }
    for (const ServicePair& p : pairs_) {
        const Cell& client = at(p.client);
        const Cell& provider = at(p.provider);
        if (client.role != Role::Client || provider.role != Role::Provider) {
            fail(p.client, "pair endpoints have wrong roles");
        }
        if (client.partner != p.provider || provider.partner != p.client) {
            fail(p.client, "pair endpoints not linked");
        }
        if (!neighbor_slot(p.provider, p.client, p.ring, n_)) {
            fail(p.client, "pair outside contact ring");
        }
    }
}

std::uint64_t Community::digest() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(n_));
    for (const Cell& cell : cells_) {
        mix(static_cast<std::uint64_t>(cell.role));
        mix(static_cast<std::uint64_t>(cell.req_value.tenths));
        mix(static_cast<std::uint64_t>(cell.pro_value));
        mix(cell.partner ? index(*cell.partner) + 1 : 0);
    }
    for (const ServicePair& p : pairs_) {
        mix(index(p.client));
        mix(index(p.provider));
        mix(static_cast<std::uint64_t>(p.ring));
    }
    return h;
}

std::array<Coord, 4> neighbors(Coord c, Ring ring, int n)
{
    const int d = ring == Ring::Adjacent ? 1 : 2;
    auto wrap = [n](int v) { return ((v % n) + n) % n; };
    return {
        Coord{c.row, wrap(c.col + d)},
        Coord{wrap(c.row + d), c.col},
        Coord{c.row, wrap(c.col - d)},
        Coord{wrap(c.row - d), c.col},
    };
}

std::optional<int> neighbor_slot(Coord c, Coord other, Ring ring, int n)
{
    const auto ring_cells = neighbors(c, ring, n);
    for (int k = 0; k < 4; ++k) {
        if (ring_cells[static_cast<std::size_t>(k)] == other) {
            return k;
        }
    }
    return std::nullopt;
}

Community init_grid(int n, const InitRates& rates, const ValueDistribution& values, Stream& rng)
{
    rates.validate();
    values.validate();
    Community community(n);
    const double client_cut = rates.client_rate;
    const double provider_cut = rates.client_rate + rates.provider_rate;
    for (std::size_t i = 0; i < community.cell_count(); ++i) {
        const double u = rng.uniform01();
        const int v = values.draw(rng);
        const Role role = u < client_cut ? Role::Client : (u < provider_cut ? Role::Provider : Role::Neutral);
        community.assign(community.coord(i), role, v);
    }
    return community;
}

} // namespace aalsim
