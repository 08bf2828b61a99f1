// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file vqe.hpp
 * @brief Cascade circuit statevector simulation and the joint angle/orbital loop.
 *
 * Qubit i carries spin-orbital mode i, and amplitude index b has bit i set
 * when qubit i is |1>, so a computational basis state is a Configuration
 * word. A layer applies R_y on every qubit followed by CNOT(i, i+1) for
 * i = 0..n-2. Angles are stored layer-major: index l * n_qubits + q.
 *
 * R_y and CNOT have real matrices, so the state is kept as a real vector.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "orbrot/estimators.hpp"
#include "orbrot/fock.hpp"
#include "orbrot/integrals.hpp"
#include "orbrot/local_hamiltonian.hpp"
#include "orbrot/optimizer.hpp"
#include "orbrot/rdm.hpp"
#include "orbrot/rotation.hpp"

namespace orbrot {

inline constexpr int kMaxQubits = 16;

using Statevector = Eigen::VectorXd;

struct CascadeParams {
    int n_qubits = 0;
    int layers = 0;
    Eigen::VectorXd angles;

    [[nodiscard]] static constexpr int angle_count(int n_qubits, int layers) noexcept {
        return n_qubits * layers;
    }
    /// Throws std::invalid_argument on bad sizes.
    void validate() const;
};

[[nodiscard]] CascadeParams zero_cascade(int n_qubits, int layers);
/// Every angle uniform in [0, 2 pi).
[[nodiscard]] CascadeParams random_cascade(int n_qubits, int layers, std::uint64_t seed);

void apply_ry(Statevector& psi, int qubit, double theta);
void apply_cnot(Statevector& psi, int control, int target);

/// Circuit applied to |0...0>.
[[nodiscard]] Statevector apply_cascade(const CascadeParams& params);

/// d psi / d angle_k for every angle, plus psi itself.
struct CircuitDerivatives {
    Statevector psi;
    std::vector<Statevector> d;
};
[[nodiscard]] CircuitDerivatives cascade_derivatives(const CascadeParams& params);

/// Hermitian Pauli string: X on bits of x only, Z on bits of z only, Y on both.
struct PauliTerm {
    double coeff = 0.0;
    Bits x = 0;
    Bits z = 0;
};

struct PauliHamiltonian {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;

    [[nodiscard]] Eigen::MatrixXcd dense() const;
};

/// Label such as "X0 Y1 Z3", or "I" for the identity.
[[nodiscard]] std::string pauli_label(const PauliTerm& term);

[[nodiscard]] PauliHamiltonian jw_hamiltonian(const IntegralSet& ints, double threshold = 1e-12);

/// <psi|H|psi>. Throws std::invalid_argument unless psi is normalized.
[[nodiscard]] double expectation(const Statevector& psi, const PauliHamiltonian& ham);

/// H psi over the whole Fock space.
[[nodiscard]] Statevector apply_hamiltonian(const LocalHamiltonian& ham, const Statevector& psi);

/// Spin-resolved RDMs of a Fock-space state; blocks of every particle number contribute.
[[nodiscard]] RdmSet statevector_rdms(const Statevector& psi, int n_orb);

/// dE/dkappa from H psi without forming RDMs: the orbital gradient
/// <psi|[H, E_pq - E_qp]|psi> contracted with Phi^T dPhi/dkappa_k.
/// `hpsi` must be H psi for the Hamiltonian rotated by `rotation`.
[[nodiscard]] Eigen::VectorXd statevector_kappa_force(const OrbitalRotation& rotation,
                                                      const Statevector& psi,
                                                      const Statevector& hpsi);

/// Probability of the configurations inside `sector`.
[[nodiscard]] double sector_weight(const Statevector& psi, const Sector& sector);

/// Energy gradient from the two-point shift rule at +-pi/2.
[[nodiscard]] Eigen::VectorXd circuit_gradient(const CascadeParams& params,
                                               const PauliHamiltonian& ham);
[[nodiscard]] Eigen::VectorXd circuit_gradient(const CascadeParams& params,
                                               const LocalHamiltonian& ham);

/// g_ij = Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>].
[[nodiscard]] MetricTensor qng_metric(const CascadeParams& params);

struct VqeResult {
    Trajectory trajectory;  ///< params holds the final angles
    CascadeParams params;
    double sector_weight = 0.0;
    int iterations = 0;
};

/// Natural-gradient descent on the angles with plain-gradient descent on kappa.
/// Uses eta, eta_kappa, shift, decay, steps, window, tolerance, kappa_enabled,
/// theta_enabled and plain_gradient from the config.
[[nodiscard]] VqeResult vqe_run(const IntegralSet& reference, const Sector& target,
                                const CascadeParams& init, const OptimizerConfig& config,
                                const Eigen::VectorXd& kappa0 = {});

struct RestartRow {
    int init_id = 0;
    std::uint64_t seed = 0;
    double error_rotated = 0.0;
    double error_fixed = 0.0;
    int iterations_rotated = 0;
    int iterations_fixed = 0;
    double weight_rotated = 0.0;
    double weight_fixed = 0.0;
};

/// Paired runs from identical random angles, with and without rotations.
[[nodiscard]] std::vector<RestartRow> restart_study(const IntegralSet& reference,
                                                    const Sector& target, double exact_energy,
                                                    int layers, int n_inits, std::uint64_t seed,
                                                    const OptimizerConfig& config, int threads = 1);

struct CumulativePoint {
    double threshold = 0.0;
    double fraction_rotated = 0.0;
    double fraction_fixed = 0.0;
};

/// Fraction of runs with error <= threshold, for each threshold.
[[nodiscard]] std::vector<CumulativePoint> cumulative_fraction(const std::vector<RestartRow>& rows,
                                                               const std::vector<double>& thresholds);

void write_restart_csv(std::ostream& out, const std::vector<RestartRow>& rows);
void write_cumulative_csv(std::ostream& out, const std::vector<CumulativePoint>& points);

} // namespace orbrot
