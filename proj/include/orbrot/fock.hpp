// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Occupation-number configurations and fermionic operator action.
 *
 * Mode ordering (frozen): spin-up orbitals occupy modes 0..n_orb-1 and
 * spin-down orbitals occupy modes n_orb..2*n_orb-1. A configuration is
 *
 *     |n> = (c+_0)^{n_0} (c+_1)^{n_1} ... (c+_{M-1})^{n_{M-1}} |0>,
 *
 * so c_j and c+_j pick up the Jordan-Wigner sign (-1)^{sum_{k<j} n_k}.
 * Bit j of Configuration::bits is the occupancy of mode j.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace orbrot {

using Bits = std::uint64_t;

inline constexpr int kMaxModes = 64;
inline constexpr std::size_t kDefaultEnumerationLimit = std::size_t{1} << 22;

enum class Spin : int { Up = 0, Down = 1 };

/// Mode index of spatial orbital `orb` with spin `s`.
constexpr int mode_index(int orb, Spin s, int n_orb) noexcept {
    return s == Spin::Up ? orb : n_orb + orb;
}

struct Configuration {
    Bits bits = 0;

    [[nodiscard]] constexpr bool occupied(int mode) const noexcept {
        return (bits >> mode) & Bits{1};
    }
    [[nodiscard]] int count() const noexcept;

    constexpr auto operator<=>(const Configuration&) const = default;
};

/// Occupancy string, mode 0 first (e.g. "1100").
std::string to_string(Configuration c, int n_modes);
/// Inverse of to_string; throws std::invalid_argument on bad characters.
Configuration from_string(const std::string& s);

struct Sector {
    int n_orb = 0;
    int n_up = 0;
    int n_down = 0;

    [[nodiscard]] int n_modes() const noexcept { return 2 * n_orb; }
    [[nodiscard]] int n_elec() const noexcept { return n_up + n_down; }
    /// C(n_orb, n_up) * C(n_orb, n_down).
    [[nodiscard]] std::size_t dimension() const;
    /// Throws std::invalid_argument if counts are out of range.
    void validate() const;
    /// Population check per spin species.
    [[nodiscard]] bool contains(Configuration c) const noexcept;
    /// Lowest orbitals of each species filled.
    [[nodiscard]] Configuration reference() const noexcept;

    bool operator==(const Sector&) const = default;
};

/// Mask of the modes belonging to one spin species.
Bits spin_mask(Spin s, int n_orb) noexcept;

std::uint64_t binomial(int n, int k) noexcept;

struct Excitation {
    Configuration config;
    int phase = 1;
};

/// c_mode |config>. Empty if the mode is unoccupied.
std::optional<Excitation> annihilate(Configuration c, int mode, int n_modes);
/// c+_mode |config>. Empty if the mode is occupied.
std::optional<Excitation> create(Configuration c, int mode, int n_modes);

/// c+_p c_q |config>.
std::optional<Excitation> excite_one(Configuration c, int p, int q, int n_modes);

/// c+_p c+_q c_s c_r |config>, applied right to left.
std::optional<Excitation> excite_two(Configuration c, int p, int q, int s, int r,
                                     int n_modes);

/**
 * All configurations of a sector in canonical order (ascending value of the
 * packed bit word), with O(n_elec) reverse lookup by combinatorial ranking.
 */
class SectorBasis {
public:
    explicit SectorBasis(Sector sector,
                         std::size_t limit = kDefaultEnumerationLimit);

    [[nodiscard]] const Sector& sector() const noexcept { return sector_; }
    [[nodiscard]] std::size_t size() const noexcept { return configs_.size(); }
    [[nodiscard]] const std::vector<Configuration>& configs() const noexcept {
        return configs_;
    }
    [[nodiscard]] Configuration operator[](std::size_t i) const { return configs_[i]; }

    /// Dense index of `c`, or empty if `c` is not in the sector.
    [[nodiscard]] std::optional<std::size_t> index_of(Configuration c) const;

private:
    [[nodiscard]] std::uint64_t rank_string(Bits s) const;

    Sector sector_;
    std::uint64_t n_up_strings_ = 0;
    std::vector<Configuration> configs_;
    std::vector<std::vector<std::uint64_t>> binom_;
};

/// enumerate_sector: the canonical ordered configuration list.
std::vector<Configuration> enumerate_sector(
    Sector sector, std::size_t limit = kDefaultEnumerationLimit);

} // namespace orbrot

template <>
struct std::hash<orbrot::Configuration> {
    std::size_t operator()(const orbrot::Configuration& c) const noexcept {
        // splitmix64 finaliser
        std::uint64_t z = c.bits + 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(z ^ (z >> 31));
    }
};
