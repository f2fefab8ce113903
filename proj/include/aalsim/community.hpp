#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aalsim/random.hpp"

namespace aalsim {

enum class Role : std::uint8_t { Client, Provider, Neutral };
enum class Ring : std::uint8_t { Adjacent, SecondClose };

std::string_view to_string(Role role);
std::string_view to_string(Ring ring);

/// Grid position, (row, col), 0-based.
struct Coord {
    int row = 0;
    int col = 0;

    auto operator<=>(const Coord&) const = default;
};

/// Amount of work, stored exactly in tenths of a unit so that repeated
/// pro_value/10 decrements never accumulate rounding error.
struct Work {
    std::int64_t tenths = 0;

    static constexpr Work units(std::int64_t u) { return Work{u * 10}; }
    constexpr double value() const { return static_cast<double>(tenths) / 10.0; }
    constexpr bool zero() const { return tenths == 0; }

    auto operator<=>(const Work&) const = default;
};

struct Cell {
    Role role = Role::Neutral;
    Work req_value;            // outstanding work; zero unless Client
    int pro_value = 0;         // work units per 10 steps; zero unless Provider
    std::optional<Coord> partner;

    bool work_status() const { return partner.has_value(); }

    bool operator==(const Cell&) const = default;
};

struct ServicePair {
    Coord client;
    Coord provider;
    Ring ring = Ring::Adjacent;

    bool operator==(const ServicePair&) const = default;
};

struct InitRates {
    double client_rate = 0.0;
    double provider_rate = 0.0;

    /// Throws ConfigError unless both rates are non-negative and sum to at most 1.
    void validate() const;
    bool operator==(const InitRates&) const = default;
};

/// Uniform integer distribution over {lo, ..., hi} for req_value and pro_value.
struct ValueDistribution {
    int lo = 1;
    int hi = 10;

    void validate() const;
    int draw(Stream& rng) const;
    bool operator==(const ValueDistribution&) const = default;
};

/// n x n toroidal grid of cells plus the active service pairs.
class Community {
public:
    explicit Community(int n);

    int size() const { return n_; }
    std::size_t cell_count() const { return cells_.size(); }

    Cell& at(Coord c) { return cells_[index(c)]; }
    const Cell& at(Coord c) const { return cells_[index(c)]; }

    std::span<const Cell> cells() const { return cells_; }

    std::vector<ServicePair>& pairs() { return pairs_; }
    const std::vector<ServicePair>& pairs() const { return pairs_; }

    std::size_t index(Coord c) const
    {
        return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c.col);
    }
    Coord coord(std::size_t i) const
    {
        return Coord{static_cast<int>(i / static_cast<std::size_t>(n_)), static_cast<int>(i % static_cast<std::size_t>(n_))};
    }

    /// Set a cell's role, zeroing the value that does not apply to it.
    void assign(Coord c, Role role, int value);

    /// Checks every structural invariant; throws InternalError naming the first violation.
    void check_invariants() const;

    /// FNV-1a digest of the full state, for determinism checks.
    std::uint64_t digest() const;

    bool operator==(const Community&) const = default;

private:
    int n_;
    std::vector<Cell> cells_;
    std::vector<ServicePair> pairs_;
};

/// Ring neighbors in the fixed order E, S, W, N (or EE, SS, WW, NN), wrapped toroidally.
std::array<Coord, 4> neighbors(Coord c, Ring ring, int n);

/// Position of `other` in neighbors(c, ring, n), if present (first match).
std::optional<int> neighbor_slot(Coord c, Coord other, Ring ring, int n);

/// Fill an n x n grid cell by cell in row-major order. Each cell consumes
/// exactly two draws: u = uniform01() picks the role (Client if u < client_rate,
/// Provider if u < client_rate + provider_rate, else Neutral), then one value
/// draw that becomes req_value or pro_value, or is discarded for Neutral.
Community init_grid(int n, const InitRates& rates, const ValueDistribution& values, Stream& rng);

} // namespace aalsim
