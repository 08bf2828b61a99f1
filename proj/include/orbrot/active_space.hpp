// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file active_space.hpp
 * @brief Active orbital windows with doubly occupied and empty inactive orbitals.
 *
 * With inactive-occupied orbitals P, Q (always doubly occupied) and active
 * orbitals t, u, v, w, the energy of |core> (x) |psi_active> is
 *
 *   E = core + sum_P 2 h_PP + sum_PQ (2 g_PQPQ - g_PQQP)
 *     + sum_tv [h_tv + sum_Q (2 g_tQvQ - g_tQQv)] D_tv + 1/2 sum g_tuvw D_tuvw,
 *
 * with g_pqrs = <pq|rs>. The effective active IntegralSet absorbs the first
 * line into its core constant and the bracket into its one-body matrix.
 */

#pragma once

#include <vector>

#include "orbrot/fock.hpp"
#include "orbrot/integrals.hpp"
#include "orbrot/rdm.hpp"

namespace orbrot {

struct ActiveSpaceSpec {
    std::vector<int> inactive_occupied;
    std::vector<int> active;
    std::vector<int> inactive_virtual;

    [[nodiscard]] int n_orb() const noexcept {
        return static_cast<int>(inactive_occupied.size() + active.size() + inactive_virtual.size());
    }
};

/// Every orbital active.
[[nodiscard]] ActiveSpaceSpec full_active_space(int n_orb);

/// Window of `n_active` orbitals with the lowest `n_core` orbitals inactive-occupied.
[[nodiscard]] ActiveSpaceSpec window_active_space(int n_orb, int n_core, int n_active);

/// Active-space sector. Throws std::invalid_argument if the lists do not
/// partition 0..n_orb-1 or the active electron counts are out of range.
[[nodiscard]] Sector validate_spec(const ActiveSpaceSpec& spec, const Sector& sector);

[[nodiscard]] IntegralSet effective_active_integrals(const IntegralSet& ints,
                                                     const ActiveSpaceSpec& spec);

/// Direct evaluation of the energy expression above from active RDMs.
[[nodiscard]] double active_energy_from_rdms(const IntegralSet& ints, const ActiveSpaceSpec& spec,
                                             const RdmSet& active);

/// Full-orbital RDMs of |core> (x) |psi_active> assembled from the active RDMs.
[[nodiscard]] RdmSet embed_rdms(const RdmSet& active, const ActiveSpaceSpec& spec);

} // namespace orbrot
