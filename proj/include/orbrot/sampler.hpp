// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file sampler.hpp
 * @brief Metropolis sampling of |psi|^2 within a sector, and exact enumeration.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "orbrot/ansatz.hpp"
#include "orbrot/fock.hpp"
#include "orbrot/rng.hpp"

namespace orbrot {

inline constexpr double kDefaultDoubleHopFraction = 0.1;

struct ChainState {
    Configuration current;
    Complex log_psi;
    Rng rng;
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;

    [[nodiscard]] double acceptance() const noexcept {
        return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
    }
};

/// One symmetric move: a single occupied-to-empty hop within one spin species
/// (species chosen with probability proportional to its electron count), or
/// with probability `double_hop_fraction` two such hops in succession.
/// Returns the input when no hop exists.
[[nodiscard]] Configuration propose_move(Configuration c, const Sector& sector, Rng& rng,
                                         double double_hop_fraction = kDefaultDoubleHopFraction);

/// Uniformly random configuration of the sector.
[[nodiscard]] Configuration random_configuration(const Sector& sector, Rng& rng);

struct SampleBatch {
    std::vector<Configuration> samples;  ///< one per recorded sweep, in chain-major order
    std::vector<int> chain;
    std::vector<int> sweep;
    std::vector<double> acceptance;      ///< per chain

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
};

struct ChainOptions {
    int n_sweeps = 1000;             ///< recorded sweeps; one sweep = 2*n_orb proposals
    int burn_in = -1;                ///< negative selects 10% of n_sweeps
    std::uint64_t seed = 1;
    double double_hop_fraction = kDefaultDoubleHopFraction;
    int max_init_attempts = 1000;
};

/// Single chain on stream `chain_id`. Throws NodeError if no configuration
/// with nonzero amplitude is found for the starting point.
[[nodiscard]] SampleBatch run_chain(const Ansatz& ansatz, const ParamVector& params,
                                    const ChainOptions& opts, int chain_id = 0);

/// Independent chains (streams 0..n_chains-1) merged in chain order; the
/// result does not depend on `threads`.
[[nodiscard]] SampleBatch run_chains(const Ansatz& ansatz, const ParamVector& params,
                                     const ChainOptions& opts, int n_chains, int threads = 1);

struct ExactDistribution {
    SectorBasis basis;
    Eigen::VectorXcd amplitudes;     ///< normalized psi over the basis
    Eigen::VectorXd probabilities;   ///< |psi|^2, sums to 1
};

[[nodiscard]] ExactDistribution exact_distribution(
    const Ansatz& ansatz, const ParamVector& params,
    std::size_t limit = kDefaultEnumerationLimit);

/// Integrated autocorrelation time with the automatic windowing rule (c = 5).
[[nodiscard]] double autocorrelation_time(const std::vector<double>& series);

/// Standard error of the mean from non-overlapping batch means.
[[nodiscard]] double batch_means_error(const std::vector<double>& series, int n_batches = 20);

} // namespace orbrot
