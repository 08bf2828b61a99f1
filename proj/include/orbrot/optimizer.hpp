// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file optimizer.hpp
 * @brief Joint stochastic-reconfiguration loop over network parameters and orbitals.
 *
 * Each step rebuilds the rotated Hamiltonian from the reference integrals at
 * the current kappa, estimates energy, force, metric and RDMs, then moves
 * theta along the SR direction and kappa along the plain gradient.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orbrot/active_space.hpp"
#include "orbrot/ansatz.hpp"
#include "orbrot/integrals.hpp"
#include "orbrot/rdm.hpp"
#include "orbrot/rotation.hpp"

namespace orbrot {

struct OptimizerConfig {
    double eta = 0.02;
    double eta_kappa = -1.0;  ///< negative: same as eta
    double shift = 1e-3;
    double decay = 1.0;       ///< step size at step k is eta * decay^k
    int steps = 200;

    bool exact = true;        ///< enumerate the sector instead of sampling
    int sweeps = 1000;        ///< recorded sweeps per chain in sampled mode
    int chains = 4;
    int threads = 1;
    int burn_in = -1;
    double double_hop_fraction = 0.1;

    bool kappa_enabled = false;
    bool theta_enabled = true;
    bool plain_gradient = false;  ///< replace the SR solve by -eta F
    /// Circuit runs only: accept a step only if the energy does not rise,
    /// growing the step by 1.2 after success and halving it after a rejection.
    bool adaptive_step = false;
    std::uint64_t seed = 1;

    int window = 50;
    double tolerance = 1e-7;

    std::string checkpoint_path;  ///< empty: no checkpoints
    int checkpoint_every = 0;     ///< 0: only at the end

    /// Throws ConfigError on out-of-range values.
    void validate() const;
    [[nodiscard]] double kappa_step() const noexcept { return eta_kappa < 0.0 ? eta : eta_kappa; }
};

struct StepRecord {
    int step = 0;
    double energy = 0.0;
    double variance = 0.0;
    double error = 0.0;
    double force_theta = 0.0;  ///< Euclidean norm
    double force_kappa = 0.0;
    double acceptance = 1.0;
    double wall_time = 0.0;    ///< seconds since the run started
};

struct Trajectory {
    std::vector<StepRecord> records;
    ParamVector params;
    Eigen::VectorXd kappa;
    bool converged = false;

    [[nodiscard]] double final_energy() const { return records.empty() ? 0.0 : records.back().energy; }
};

/// Reference Hamiltonian plus an optional active window.
class HamiltonianModel {
public:
    HamiltonianModel(IntegralSet reference, Sector sector,
                     std::optional<ActiveSpaceSpec> active = std::nullopt);

    [[nodiscard]] const IntegralSet& reference() const noexcept { return reference_; }
    [[nodiscard]] const Sector& sector() const noexcept { return sector_; }
    /// Sector the ansatz lives in: the active sector when a window is set.
    [[nodiscard]] const Sector& variational_sector() const noexcept { return variational_; }
    [[nodiscard]] const std::optional<ActiveSpaceSpec>& active_space() const noexcept { return active_; }
    [[nodiscard]] int n_orb() const noexcept { return reference_.n_orb; }

    /// Integrals seen by the ansatz at the given rotation.
    [[nodiscard]] IntegralSet working_integrals(const OrbitalRotation& rotation) const;
    [[nodiscard]] IntegralSet working_integrals() const;
    /// Full-orbital RDMs from RDMs of the variational state.
    [[nodiscard]] RdmSet full_rdms(const RdmSet& variational) const;
    /// Enumerated variational sector. Throws CapacityError above the limit.
    [[nodiscard]] const SectorBasis& basis() const;

private:
    IntegralSet reference_;
    Sector sector_;
    Sector variational_;
    std::optional<ActiveSpaceSpec> active_;
    mutable std::shared_ptr<SectorBasis> basis_;
};

/// Solves (S + shift I) d = -eta F. The shift grows tenfold up to three
/// times when the Cholesky factorization fails.
[[nodiscard]] Eigen::VectorXd sr_solve(const Eigen::MatrixXd& S, const Eigen::VectorXd& F,
                                       double eta, double shift);

/// Same solve with S = X^T X, through the smaller (X X^T + shift I) system.
[[nodiscard]] Eigen::VectorXd sr_solve_factored(const Eigen::MatrixXd& X, const Eigen::VectorXd& F,
                                                double eta, double shift);

struct OptimizationState {
    ParamVector theta;
    Eigen::VectorXd kappa;
};

struct StepResult {
    OptimizationState next;
    StepRecord record;
};

[[nodiscard]] StepResult vmc_step(const Ansatz& ansatz, const OptimizationState& state,
                                  const HamiltonianModel& model, const OptimizerConfig& config,
                                  int step);

using StepCallback = std::function<void(const StepRecord&)>;

/// Runs until `steps` updates are done or the energy window criterion fires.
/// The trajectory holds one record per update plus the final evaluation.
[[nodiscard]] Trajectory run_optimization(const Ansatz& ansatz, const OptimizationState& initial,
                                          const HamiltonianModel& model,
                                          const OptimizerConfig& config,
                                          const StepCallback& on_step = {});

[[nodiscard]] Trajectory run_optimization(const Ansatz& ansatz, const HamiltonianModel& model,
                                          const OptimizerConfig& config,
                                          const StepCallback& on_step = {});

/// Window test used by run_optimization, exposed for reuse.
[[nodiscard]] bool energy_window_converged(const std::vector<StepRecord>& records, int window,
                                           double tolerance, bool exact);

} // namespace orbrot
