#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aalsim/community.hpp"

namespace aalsim {

/// A free provider's offer of help to one free client in its ring.
struct Offer {
    Coord provider;
    Coord client;
    Ring ring = Ring::Adjacent;

    bool operator==(const Offer&) const = default;
};

/// Ties are resolved by the fixed ring order E, S, W, N (EE, SS, WW, NN);
/// no other rule is implemented.
enum class TieBreak { RingOrder };

struct MatchPolicy {
    bool distant_help = false;
    TieBreak tie_break = TieBreak::RingOrder;

    bool operator==(const MatchPolicy&) const = default;
};

/// Free client in `provider`'s ring with the largest req_value; the earliest
/// ring slot wins a tie.
std::optional<Coord> select_client_for_provider(Coord provider, const Community& community, Ring ring);

/// Offer targeting `client` whose provider has the largest pro_value; ties go
/// to the provider that comes first in the client's own ring order.
std::optional<Offer> select_provider_for_client(Coord client, std::span<const Offer> offers, const Community& community);

/// Phase one of a round: one offer per free provider, scanned row-major.
std::vector<Offer> collect_offers(const Community& community, Ring ring);

/// One synchronous round: offer, accept, confirm on the adjacent ring, then
/// again on the second-close ring among still-free cells if distant help is
/// on. Confirmed pairs are appended to community.pairs() and returned.
std::vector<ServicePair> match_round(Community& community, const MatchPolicy& policy);

/// True if match_round would form at least one pair. Does not modify state.
bool match_possible(const Community& community, const MatchPolicy& policy);

} // namespace aalsim
