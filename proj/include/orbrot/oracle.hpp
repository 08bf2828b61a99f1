// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file oracle.hpp
 * @brief Exact sector diagonalisation and exact RDMs.
 *
 * Matrix elements are produced by applying every nonzero operator string of
 * the Hamiltonian to each basis configuration; no Slater-Condon shortcuts.
 * This keeps the oracle independent of the estimator code paths it checks.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>

#include "orbrot/fock.hpp"
#include "orbrot/integrals.hpp"
#include "orbrot/rdm.hpp"

namespace orbrot {

inline constexpr std::size_t kDefaultNonzeroLimit = 2'000'000;
inline constexpr Eigen::Index kDenseEigenLimit = 4096;

struct SectorMatrix {
    SectorBasis basis;
    Eigen::SparseMatrix<double> matrix;

    [[nodiscard]] Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
};

SectorMatrix build_sector_hamiltonian(const IntegralSet& ints, const Sector& sector,
                                      std::size_t nonzero_limit = kDefaultNonzeroLimit);

struct Eigenpair {
    double energy = 0.0;
    Eigen::VectorXd vector;
};

/**
 * Lowest eigenpair. Dense solve up to kDenseEigenLimit, Lanczos with full
 * reorthogonalisation from a fixed start vector otherwise. The returned
 * vector has unit norm and its first significant component is positive.
 */
Eigenpair ground_state(const SectorMatrix& h);

/// Sorted spectrum (dense solve; small sectors only).
Eigen::VectorXd sector_spectrum(const SectorMatrix& h);

struct LanczosOptions {
    int max_iterations = 400;
    double tolerance = 1e-11;
    std::uint64_t seed = 20240611;
};
Eigenpair lanczos_ground_state(const Eigen::SparseMatrix<double>& h,
                               const LanczosOptions& opts = {});

/// Exact RDMs of a normalised real sector vector.
RdmSet exact_rdms(const Eigen::VectorXd& vector, const SectorBasis& basis);

/// E0 of the sector for the given integrals.
double oracle_energy(const IntegralSet& ints, const Sector& sector);

} // namespace orbrot
