// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file local_hamiltonian.hpp
 * @brief Row-wise Hamiltonian action by Slater-Condon rules.
 *
 * For a configuration n, enumerates every n' with <n'|H|n> != 0 (diagonal,
 * same-spin singles, same- and opposite-spin doubles). Used by the local
 * energy and by the exact-enumeration estimators.
 */

#pragma once

#include <Eigen/Sparse>

#include <bit>
#include <vector>

#include "orbrot/fock.hpp"
#include "orbrot/integrals.hpp"

namespace orbrot {

class LocalHamiltonian {
public:
    explicit LocalHamiltonian(IntegralSet ints);

    [[nodiscard]] const IntegralSet& integrals() const noexcept { return ints_; }
    [[nodiscard]] int n_orb() const noexcept { return ints_.n_orb; }

    [[nodiscard]] double diagonal(Configuration c) const;

    /// Calls f(n', <n'|H|n>) for every connected n' != n with a nonzero element,
    /// then f(n, <n|H|n>).
    template <typename F>
    void for_each_connected(Configuration c, F&& f) const;

    /// Sparse sector matrix built row by row from for_each_connected.
    [[nodiscard]] Eigen::SparseMatrix<double> sector_matrix(const SectorBasis& basis) const;

private:
    [[nodiscard]] double g(int p, int q, int r, int s) const noexcept {
        return ints_.g[ints_.gindex(p, q, r, s)];
    }

    IntegralSet ints_;
};

namespace detail {

inline void bit_list(Bits b, int offset, std::vector<int>& out) {
    out.clear();
    while (b) {
        out.push_back(std::countr_zero(b) - offset);
        b &= b - 1;
    }
}

} // namespace detail

template <typename F>
void LocalHamiltonian::for_each_connected(Configuration c, F&& f) const {
    const int n = ints_.n_orb;
    const int modes = 2 * n;
    thread_local std::vector<int> occ[2], vir[2];
    for (int s = 0; s < 2; ++s) {
        const Bits mask = spin_mask(static_cast<Spin>(s), n);
        detail::bit_list(c.bits & mask, s * n, occ[s]);
        detail::bit_list(~c.bits & mask, s * n, vir[s]);
    }

    // singles i -> a within one spin species
    for (int s = 0; s < 2; ++s) {
        const auto sp = static_cast<Spin>(s);
        for (int i : occ[s])
            for (int a : vir[s]) {
                double v = ints_.h(a, i);
                for (int t = 0; t < 2; ++t)
                    for (int j : occ[t]) {
                        v += g(a, j, i, j);
                        if (t == s) v -= g(a, j, j, i);
                    }
                if (v == 0.0) continue;
                const auto e = excite_one(c, mode_index(a, sp, n), mode_index(i, sp, n), modes);
                f(e->config, e->phase * v);
            }
    }
    // same-spin doubles i<j -> a<b
    for (int s = 0; s < 2; ++s) {
        const auto sp = static_cast<Spin>(s);
        const auto& o = occ[s];
        const auto& u = vir[s];
        for (std::size_t x = 0; x < o.size(); ++x)
            for (std::size_t y = x + 1; y < o.size(); ++y)
                for (std::size_t z = 0; z < u.size(); ++z)
                    for (std::size_t w = z + 1; w < u.size(); ++w) {
                        const int i = o[x], j = o[y], a = u[z], b = u[w];
                        const double v = g(a, b, i, j) - g(a, b, j, i);
                        if (v == 0.0) continue;
                        const auto e = excite_two(c, mode_index(a, sp, n), mode_index(b, sp, n),
                                                  mode_index(j, sp, n), mode_index(i, sp, n),
                                                  modes);
                        f(e->config, e->phase * v);
                    }
    }
    // opposite-spin doubles (i up, j down) -> (a up, b down)
    for (int i : occ[0])
        for (int j : occ[1])
            for (int a : vir[0])
                for (int b : vir[1]) {
                    const double v = g(a, b, i, j);
                    if (v == 0.0) continue;
                    const auto e = excite_two(c, mode_index(a, Spin::Up, n),
                                              mode_index(b, Spin::Down, n),
                                              mode_index(j, Spin::Down, n),
                                              mode_index(i, Spin::Up, n), modes);
                    f(e->config, e->phase * v);
                }
    f(c, diagonal(c));
}

} // namespace orbrot
