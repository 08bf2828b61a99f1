// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file estimators.hpp
 * @brief Local energies, energy/force, RDM and metric estimators.
 *
 * Both modes reduce to a weighted set of distinct configurations: exact mode
 * weights every sector configuration by |psi|^2 / Z, sampled mode by its
 * multiplicity in the batch. All averages below are over that set.
 */

#pragma once

#include <Eigen/Dense>

#include <unordered_map>
#include <vector>

#include "orbrot/ansatz.hpp"
#include "orbrot/local_hamiltonian.hpp"
#include "orbrot/rdm.hpp"
#include "orbrot/sampler.hpp"

namespace orbrot {

/// E_loc(n) = sum_n' <n|H|n'> psi(n') / psi(n). Throws NodeError if psi(n) = 0.
[[nodiscard]] Complex local_energy(const Ansatz& ansatz, const ParamVector& params,
                                   const LocalHamiltonian& ham, Configuration c);

struct Evaluation {
    std::vector<Configuration> configs;  ///< distinct configurations with nonzero weight
    Eigen::VectorXd weights;             ///< sums to 1
    Eigen::VectorXcd log_psi;
    Eigen::VectorXcd e_loc;
    Eigen::MatrixXcd O;                  ///< log-derivatives, one row per configuration
    std::vector<int> sequence;           ///< sampled mode: sample order as indices into configs
    bool exact = false;

    /// log psi of every configuration evaluated so far, including connected ones.
    std::unordered_map<Configuration, Complex> cache;
};

/// Exact enumeration over `basis` (which must be the ansatz sector).
[[nodiscard]] Evaluation evaluate_exact(const Ansatz& ansatz, const ParamVector& params,
                                        const LocalHamiltonian& ham, const SectorBasis& basis);

/// Sampled mode from a batch.
[[nodiscard]] Evaluation evaluate_samples(const Ansatz& ansatz, const ParamVector& params,
                                          const LocalHamiltonian& ham, const SampleBatch& batch);

struct EnergyForce {
    double energy = 0.0;
    double variance = 0.0;  ///< weighted variance of E_loc
    double error = 0.0;     ///< batch-means standard error; zero in exact mode
    Eigen::VectorXd force;  ///< F_k = 2 Re[<O_k* E_loc> - <O_k*><E_loc>]
};

/// Throws std::invalid_argument on an empty evaluation.
[[nodiscard]] EnergyForce estimate_energy_force(const Evaluation& eval);

/// Spin-resolved 1- and 2-RDMs from local estimators. Evaluates and caches
/// psi on connected configurations not yet seen.
[[nodiscard]] RdmSet estimate_rdms(const Ansatz& ansatz, const ParamVector& params,
                                   Evaluation& eval);

struct MetricTensor {
    Eigen::MatrixXd S;   ///< S = 2 Re[<O* O^T> - <O*><O^T>]
    double shift = 0.0;  ///< diagonal regularization applied when solving
};

[[nodiscard]] MetricTensor estimate_metric(const Evaluation& eval, double shift = 0.0);

/// Real factor X with S = X^T X: rows sqrt(2 w) [Re; Im] of the centred O.
[[nodiscard]] Eigen::MatrixXd metric_factor(const Evaluation& eval);

} // namespace orbrot
