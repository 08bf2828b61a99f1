// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rdm.hpp
 * @brief Spin-resolved one- and two-body reduced density matrices.
 *
 * Storage follows the integral index order so that contractions are plain
 * elementwise sums:
 *
 *   one[s](p, q)          = <c+_{p s} c_{q s}>
 *   two[2s+s'][p,q,r,t]   = <c+_{p s} c+_{q s'} c_{t s'} c_{r s}>
 *
 * giving E = core + sum h_pq G1_pq + 1/2 sum g_pqrt G2_pqrt with G1, G2 the
 * spin-summed blocks.
 */

#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

#include "orbrot/integrals.hpp"

namespace orbrot {

struct RdmSet {
    int n_orb = 0;
    std::array<Eigen::MatrixXd, 2> one;
    std::array<std::vector<double>, 4> two;

    RdmSet() = default;
    explicit RdmSet(int n);

    [[nodiscard]] std::size_t index(int p, int q, int r, int s) const noexcept {
        const auto n = static_cast<std::size_t>(n_orb);
        return ((static_cast<std::size_t>(p) * n + static_cast<std::size_t>(q)) * n +
                static_cast<std::size_t>(r)) * n + static_cast<std::size_t>(s);
    }
    [[nodiscard]] static constexpr int pair(Spin a, Spin b) noexcept {
        return 2 * static_cast<int>(a) + static_cast<int>(b);
    }

    [[nodiscard]] Eigen::MatrixXd one_total() const { return one[0] + one[1]; }
    [[nodiscard]] std::vector<double> two_total() const;

    /// core + sum h G1 + 1/2 sum g G2.
    [[nodiscard]] double energy(const IntegralSet& ints) const;

    RdmSet& operator+=(const RdmSet& other);
    RdmSet& operator*=(double factor);
};

} // namespace orbrot
