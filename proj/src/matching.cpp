#include "aalsim/matching.hpp"

#include <limits>

namespace aalsim {

namespace {

bool free_with_role(const Cell& cell, Role role)
{
    return cell.role == role && !cell.work_status();
}

// Strict preference of offer `a` over `b` from the client's point of view.
bool preferred(const Offer& a, const Offer& b, const Community& community)
{
    const int pa = community.at(a.provider).pro_value;
    const int pb = community.at(b.provider).pro_value;
    if (pa != pb) {
        return pa > pb;
    }
    if (a.ring != b.ring) {
        return a.ring < b.ring;
    }
    const int n = community.size();
    const int sa = neighbor_slot(a.client, a.provider, a.ring, n).value_or(4);
    const int sb = neighbor_slot(b.client, b.provider, b.ring, n).value_or(4);
    return sa < sb;
}

void run_phase(Community& community, Ring ring, std::vector<ServicePair>& formed)
{
    const std::vector<Offer> offers = collect_offers(community, ring);
    if (offers.empty()) {
        return;
    }

    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> accepted(community.cell_count(), none);
    for (std::size_t k = 0; k < offers.size(); ++k) {
        std::size_t& slot = accepted[community.index(offers[k].client)];
        if (slot == none || preferred(offers[k], offers[slot], community)) {
            slot = k;
        }
    }

    for (std::size_t i = 0; i < accepted.size(); ++i) {
        if (accepted[i] == none) {
            continue;
        }
        const Offer& offer = offers[accepted[i]];
        community.at(offer.client).partner = offer.provider;
        community.at(offer.provider).partner = offer.client;
        const ServicePair pair{offer.client, offer.provider, offer.ring};
        community.pairs().push_back(pair);
        formed.push_back(pair);
    }
}

} // namespace

std::optional<Coord> select_client_for_provider(Coord provider, const Community& community, Ring ring)
{
    std::optional<Coord> best;
    Work best_req;
    for (const Coord c : neighbors(provider, ring, community.size())) {
        const Cell& cell = community.at(c);
        if (!free_with_role(cell, Role::Client)) {
            continue;
        }
        if (!best || cell.req_value > best_req) {
            best = c;
            best_req = cell.req_value;
        }
    }
    return best;
}

std::optional<Offer> select_provider_for_client(Coord client, std::span<const Offer> offers, const Community& community)
{
    std::optional<Offer> best;
    for (const Offer& offer : offers) {
        if (offer.client != client) {
            continue;
        }
        if (!best || preferred(offer, *best, community)) {
            best = offer;
        }
    }
    return best;
}

std::vector<Offer> collect_offers(const Community& community, Ring ring)
{
    std::vector<Offer> offers;
    const auto cells = community.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!free_with_role(cells[i], Role::Provider)) {
            continue;
        }
        const Coord provider = community.coord(i);
        if (auto client = select_client_for_provider(provider, community, ring)) {
            offers.push_back(Offer{provider, *client, ring});
        }
    }
    return offers;
}

std::vector<ServicePair> match_round(Community& community, const MatchPolicy& policy)
{
    std::vector<ServicePair> formed;
    run_phase(community, Ring::Adjacent, formed);
    if (policy.distant_help) {
        run_phase(community, Ring::SecondClose, formed);
    }
    return formed;
}

bool match_possible(const Community& community, const MatchPolicy& policy)
{
    // Any offer is accepted by its client (possibly in favour of another
    // offer), so a round forms a pair iff some phase has an offer. The
    // adjacent phase only removes cells from the pool, so if it has no
    // offers the second-close phase sees the unchanged state.
    if (!collect_offers(community, Ring::Adjacent).empty()) {
        return true;
    }
    return policy.distant_help && !collect_offers(community, Ring::SecondClose).empty();
}

} // namespace aalsim
