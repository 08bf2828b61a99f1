// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/fock.hpp"

#include "orbrot/errors.hpp"

#include <bit>
#include <stdexcept>

namespace orbrot {

namespace {

void check_mode(int mode, int n_modes) {
    if (n_modes < 0 || n_modes > kMaxModes)
        throw std::out_of_range("mode count " + std::to_string(n_modes) +
                                " outside [0, 64]");
    if (mode < 0 || mode >= n_modes)
        throw std::out_of_range("mode index " + std::to_string(mode) +
                                " outside [0, " + std::to_string(n_modes) + ")");
}

// Parity of the occupied modes strictly below `mode`.
int parity_below(Bits bits, int mode) noexcept {
    const Bits below = mode == 0 ? Bits{0} : (~Bits{0} >> (64 - mode));
    return std::popcount(bits & below) & 1;
}

// Next integer with the same popcount (Gosper's hack).
Bits next_combination(Bits v) noexcept {
    const Bits t = v | (v - 1);
    return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

std::vector<Bits> strings_with_weight(int n, int k) {
    std::vector<Bits> out;
    out.reserve(binomial(n, k));
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    const Bits limit = Bits{1} << n;
    for (Bits v = (Bits{1} << k) - 1; v < limit; v = next_combination(v))
        out.push_back(v);
    return out;
}

} // namespace

int Configuration::count() const noexcept { return std::popcount(bits); }

std::string to_string(Configuration c, int n_modes) {
    std::string s(static_cast<std::size_t>(n_modes), '0');
    for (int i = 0; i < n_modes; ++i)
        if (c.occupied(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

Configuration from_string(const std::string& s) {
    if (s.size() > kMaxModes) throw std::invalid_argument("occupancy string too long");
    Configuration c;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '1')
            c.bits |= Bits{1} << i;
        else if (s[i] != '0')
            throw std::invalid_argument("occupancy string must contain only 0/1: " + s);
    }
    return c;
}

std::uint64_t binomial(int n, int k) noexcept {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
    return r;
}

std::size_t Sector::dimension() const {
    return static_cast<std::size_t>(binomial(n_orb, n_up) * binomial(n_orb, n_down));
}

void Sector::validate() const {
    if (n_orb < 1 || 2 * n_orb > kMaxModes)
        throw std::invalid_argument("sector n_orb must be in [1, 32], got " +
                                    std::to_string(n_orb));
    if (n_up < 0 || n_up > n_orb || n_down < 0 || n_down > n_orb)
        throw std::invalid_argument("sector electron counts out of range: n_up=" +
                                    std::to_string(n_up) + " n_down=" +
                                    std::to_string(n_down));
}

Bits spin_mask(Spin s, int n_orb) noexcept {
    const Bits block = n_orb >= 64 ? ~Bits{0} : ((Bits{1} << n_orb) - 1);
    return s == Spin::Up ? block : block << n_orb;
}

bool Sector::contains(Configuration c) const noexcept {
    if (2 * n_orb < 64 && (c.bits >> (2 * n_orb)) != 0) return false;
    return std::popcount(c.bits & spin_mask(Spin::Up, n_orb)) == n_up &&
           std::popcount(c.bits & spin_mask(Spin::Down, n_orb)) == n_down;
}

Configuration Sector::reference() const noexcept {
    const Bits up = (Bits{1} << n_up) - 1;
    const Bits dn = (Bits{1} << n_down) - 1;
    return Configuration{up | (dn << n_orb)};
}

std::optional<Excitation> annihilate(Configuration c, int mode, int n_modes) {
    check_mode(mode, n_modes);
    if (!c.occupied(mode)) return std::nullopt;
    const int sign = parity_below(c.bits, mode) ? -1 : 1;
    return Excitation{Configuration{c.bits & ~(Bits{1} << mode)}, sign};
}

std::optional<Excitation> create(Configuration c, int mode, int n_modes) {
    check_mode(mode, n_modes);
    if (c.occupied(mode)) return std::nullopt;
    const int sign = parity_below(c.bits, mode) ? -1 : 1;
    return Excitation{Configuration{c.bits | (Bits{1} << mode)}, sign};
}

std::optional<Excitation> excite_one(Configuration c, int p, int q, int n_modes) {
    check_mode(p, n_modes);
    check_mode(q, n_modes);
    auto a = annihilate(c, q, n_modes);
    if (!a) return std::nullopt;
    auto b = create(a->config, p, n_modes);
    if (!b) return std::nullopt;
    return Excitation{b->config, a->phase * b->phase};
}

std::optional<Excitation> excite_two(Configuration c, int p, int q, int s, int r,
                                     int n_modes) {
    check_mode(p, n_modes);
    check_mode(q, n_modes);
    check_mode(s, n_modes);
    check_mode(r, n_modes);
    auto x = annihilate(c, r, n_modes);
    if (!x) return std::nullopt;
    int phase = x->phase;
    x = annihilate(x->config, s, n_modes);
    if (!x) return std::nullopt;
    phase *= x->phase;
    x = create(x->config, q, n_modes);
    if (!x) return std::nullopt;
    phase *= x->phase;
    x = create(x->config, p, n_modes);
    if (!x) return std::nullopt;
    return Excitation{x->config, phase * x->phase};
}

SectorBasis::SectorBasis(Sector sector, std::size_t limit) : sector_(sector) {
    sector_.validate();
    const std::size_t dim = sector_.dimension();
    if (dim > limit)
        throw CapacityError("sector dimension " + std::to_string(dim) +
                            " exceeds enumeration limit " + std::to_string(limit));
    const int n = sector_.n_orb;
    binom_.assign(static_cast<std::size_t>(n + 1),
                  std::vector<std::uint64_t>(static_cast<std::size_t>(n + 2), 0));
    for (int i = 0; i <= n; ++i)
        for (int k = 0; k <= n + 1; ++k)
            binom_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = binomial(i, k);

    const auto ups = strings_with_weight(n, sector_.n_up);
    const auto dns = strings_with_weight(n, sector_.n_down);
    n_up_strings_ = ups.size();
    configs_.reserve(dim);
    for (Bits d : dns)
        for (Bits u : ups) configs_.push_back(Configuration{u | (d << n)});
}

std::uint64_t SectorBasis::rank_string(Bits s) const {
    // Colex rank: ascending integer order among strings of equal weight.
    std::uint64_t r = 0;
    int k = 1;
    while (s) {
        const int pos = std::countr_zero(s);
        r += binom_[static_cast<std::size_t>(pos)][static_cast<std::size_t>(k)];
        s &= s - 1;
        ++k;
    }
    return r;
}

std::optional<std::size_t> SectorBasis::index_of(Configuration c) const {
    if (!sector_.contains(c)) return std::nullopt;
    const int n = sector_.n_orb;
    const Bits up = c.bits & spin_mask(Spin::Up, n);
    const Bits dn = (c.bits & spin_mask(Spin::Down, n)) >> n;
    return static_cast<std::size_t>(rank_string(dn) * n_up_strings_ + rank_string(up));
}

std::vector<Configuration> enumerate_sector(Sector sector, std::size_t limit) {
    return SectorBasis(sector, limit).configs();
}

} // namespace orbrot
