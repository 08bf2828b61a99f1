// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file integrals.hpp
 * @brief Hamiltonian coefficient tensors over spatial orbitals.
 *
 * The Hamiltonian is
 *
 *   H = core + sum_{pq,s} h_pq c+_{ps} c_{qs}
 *         + 1/2 sum_{pqrs} sum_{s,s'} g_pqrs c+_{ps} c+_{qs'} c_{ss'} c_{rs}
 *
 * i.e. g is stored in physicists' order: g_pqrs = <pq|rs> = (pr|qs) in
 * chemists' notation. FCIDUMP records are converted at the parse boundary.
 */

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "orbrot/fock.hpp"

namespace orbrot {

struct IntegralSet {
    int n_orb = 0;
    double core = 0.0;
    Eigen::MatrixXd h;      ///< one-body, n_orb x n_orb
    std::vector<double> g;  ///< two-body, n_orb^4, index ((p*n+q)*n+r)*n+s

    IntegralSet() = default;
    /// Zero Hamiltonian over `n` orbitals.
    explicit IntegralSet(int n);

    [[nodiscard]] std::size_t gindex(int p, int q, int r, int s) const noexcept {
        const auto n = static_cast<std::size_t>(n_orb);
        return ((static_cast<std::size_t>(p) * n + static_cast<std::size_t>(q)) * n +
                static_cast<std::size_t>(r)) * n + static_cast<std::size_t>(s);
    }
    [[nodiscard]] double two(int p, int q, int r, int s) const noexcept {
        return g[gindex(p, q, r, s)];
    }
    double& two(int p, int q, int r, int s) noexcept { return g[gindex(p, q, r, s)]; }

    /// Sets <pq|rs> and all images under the real-orbital permutation group.
    void set_symmetric(int p, int q, int r, int s, double value);

    /// Largest violation of h = h^T and of the eight-fold symmetry of g.
    [[nodiscard]] double symmetry_violation() const;
    /// Throws std::invalid_argument if symmetry_violation() > tol * scale.
    void validate(double tol = 1e-12) const;

    /// Number of g elements with |g| > threshold.
    [[nodiscard]] std::size_t count_two_body_nonzero(double threshold = 0.0) const;
};

struct HubbardSpec {
    int sites = 2;
    double t = 1.0;
    double U = 0.0;
    bool periodic = true;
};

/// Nearest-neighbour ring (or chain) with on-site repulsion; core = 0.
IntegralSet hubbard_ring(const HubbardSpec& spec);

/**
 * General four-index transform
 *   out_pqrs = sum_ijkl g_ijkl A_ip B_jq C_kr D_ls
 * via four sequential one-index contractions, O(n^5).
 */
std::vector<double> four_index_transform(const std::vector<double>& g, int n,
                                         const Eigen::MatrixXd& A,
                                         const Eigen::MatrixXd& B,
                                         const Eigen::MatrixXd& C,
                                         const Eigen::MatrixXd& D);

/// h' = Phi^T h Phi, g' = g contracted with Phi on every index. Core unchanged.
/// Throws std::invalid_argument unless Phi^T Phi = I to 1e-10.
IntegralSet rotate_integrals(const IntegralSet& ints, const Eigen::MatrixXd& phi);

// ---------------------------------------------------------------------------
// FCIDUMP
// ---------------------------------------------------------------------------

struct FcidumpData {
    IntegralSet integrals;
    Sector sector;
};

/**
 * Parses a namelist header (NORB, NELEC, MS2 required; ORBSYM, ISYM and other
 * keys ignored) followed by "value i j k l" records with 1-based indices:
 * chemists' (ij|kl) for all-positive indices, h_ij for k=l=0, core for all
 * zero. Records "e i 0 0 0" (orbital energies) are skipped.
 * Throws ParseError on malformed input, out-of-range indices, or records
 * that disagree about the same symmetry-unique element.
 */
FcidumpData parse_fcidump(std::istream& in);
FcidumpData load_fcidump(const std::string& path);

/// Writes symmetry-unique records at 17 significant digits.
void write_fcidump(std::ostream& out, const IntegralSet& ints, const Sector& sector);
void save_fcidump(const std::string& path, const IntegralSet& ints, const Sector& sector);

} // namespace orbrot
