// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rotation.hpp
 * @brief Real orbital rotations Phi = exp(kappa) and their derivatives.
 *
 * kappa is antisymmetric and stored as its n(n-1)/2 strictly lower
 * triangular entries, ordered (1,0), (2,0), (2,1), (3,0), ... The free
 * parameter x at (p,q), p > q, sets kappa_pq = x and kappa_qp = -x.
 * The same rotation acts on both spin species.
 */

#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "orbrot/integrals.hpp"
#include "orbrot/rdm.hpp"

namespace orbrot {

/// Matrix exponential by scaling and squaring with [m/m] Pade approximants
/// (m in {3,5,7,9,13}). Throws std::invalid_argument on non-finite input.
Eigen::MatrixXd expm(const Eigen::MatrixXd& A);

/// Frechet derivative L(A, E) = d/dt exp(A + tE) at t = 0, read off the
/// upper-right block of exp([[A, E], [0, A]]).
Eigen::MatrixXd expm_frechet(const Eigen::MatrixXd& A, const Eigen::MatrixXd& E);

[[nodiscard]] constexpr int kappa_param_count(int n_orb) noexcept {
    return n_orb * (n_orb - 1) / 2;
}
/// Parameter slot of (p, q) with p > q.
[[nodiscard]] constexpr int kappa_param_index(int p, int q) noexcept {
    return p * (p - 1) / 2 + q;
}
/// Inverse of kappa_param_index.
std::pair<int, int> kappa_param_pair(int index);

/// Antisymmetric matrix from the free parameters.
Eigen::MatrixXd kappa_matrix(const Eigen::VectorXd& params, int n_orb);
/// Unit generator of parameter `index`: e_p e_q^T - e_q e_p^T.
Eigen::MatrixXd kappa_generator(int index, int n_orb);

/// Phi = exp(kappa(params)).
Eigen::MatrixXd expm_antisymmetric(const Eigen::VectorXd& params, int n_orb);

/// dPhi along the unit generator of `index`.
Eigen::MatrixXd expm_directional_derivative(const Eigen::VectorXd& params, int n_orb,
                                            int index);

class OrbitalRotation {
public:
    OrbitalRotation() = default;
    explicit OrbitalRotation(int n_orb);
    OrbitalRotation(int n_orb, Eigen::VectorXd params);

    [[nodiscard]] int n_orb() const noexcept { return n_orb_; }
    [[nodiscard]] const Eigen::VectorXd& params() const noexcept { return params_; }
    [[nodiscard]] const Eigen::MatrixXd& phi() const noexcept { return phi_; }
    [[nodiscard]] Eigen::MatrixXd kappa() const { return kappa_matrix(params_, n_orb_); }

    void set_params(Eigen::VectorXd params);

private:
    int n_orb_ = 0;
    Eigen::VectorXd params_;
    Eigen::MatrixXd phi_;
};

struct IntegralDerivative {
    Eigen::MatrixXd dh;
    std::vector<double> dg;
};

/// Product-rule derivatives of the rotated integrals along parameter `index`.
IntegralDerivative integral_derivatives(const IntegralSet& reference,
                                        const OrbitalRotation& rotation, int index);

/// Contraction of derivative integrals with an RDM set (no core term).
double contract_derivative(const IntegralDerivative& d, const RdmSet& rdms);

/**
 * Orbital force: dL/dkappa for every free parameter, where L is the energy
 * of the bare state (described by `rdms`) under the integrals
 * rotate_integrals(reference, rotation.phi()).
 */
Eigen::VectorXd kappa_force(const IntegralSet& reference, const OrbitalRotation& rotation,
                            const RdmSet& rdms);

} // namespace orbrot
