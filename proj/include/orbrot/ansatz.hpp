// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ansatz.hpp
 * @brief Variational amplitude families evaluated in the log domain.
 *
 * Inputs are occupation bitstrings over V = 2*n_orb modes, encoded as
 * x_i = 2 n_i - 1. Parameters are a flat real vector; complex parameters
 * (RBM) are stored as interleaved (real, imaginary) pairs, so the
 * log-derivative with respect to an imaginary slot is i times the holomorphic
 * derivative.
 *
 * Layouts (row-major blocks, H = alpha * V hidden units, N electrons):
 *   FFN             [W1 H*V | b1 H | w2 H | b2 1 | scale 1 if trainable]
 *                   psi = scale * tanh(w2 . relu(W1 x + b1) + b2)
 *   RBM             complex [a V | b H | W H*V]
 *                   log psi = a . x + sum_j log cosh(b_j + W_j . x)
 *   SlaterNNJastrow [Xi V*N | W1 H*V | b1 H | w2 H]
 *                   psi = det(Xi[occupied rows]) * exp(w2 . tanh(W1 x + b1))
 *   NNBackflow      per mode m: [W1 H*V | b1 H | W2 N*H | b2 N]
 *                   Xi(n)[m, :] = W2 tanh(W1 x + b1) + b2, psi = det(Xi(n)[occupied rows])
 *   Table           one real amplitude per sector configuration (test helper)
 *
 * Determinant rows are taken in ascending mode order, which matches the
 * Jordan-Wigner ordering of the occupation basis.
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

#include "orbrot/fock.hpp"

namespace orbrot {

using Complex = std::complex<double>;
using ParamVector = Eigen::VectorXd;

enum class Family { FFN, RBM, SlaterNNJastrow, NNBackflow, Table };

[[nodiscard]] std::string_view family_name(Family f) noexcept;
/// Throws std::invalid_argument for an unknown name.
[[nodiscard]] Family family_from_name(std::string_view name);

struct AnsatzConfig {
    Family family = Family::RBM;
    int alpha = 16;
    Sector sector;
    double scale = 0.01;
    std::uint64_t seed = 1;
    bool trainable_output_scale = false;  ///< FFN only

    void validate() const;
};

/// Log-modulus sentinel for a zero amplitude.
inline constexpr double kNodeLogModulus = -std::numeric_limits<double>::infinity();

[[nodiscard]] inline bool is_node(Complex log_psi) noexcept {
    return log_psi.real() == kNodeLogModulus;
}

class Ansatz {
public:
    explicit Ansatz(AnsatzConfig config);
    virtual ~Ansatz() = default;
    Ansatz(const Ansatz&) = delete;
    Ansatz& operator=(const Ansatz&) = delete;

    [[nodiscard]] const AnsatzConfig& config() const noexcept { return config_; }
    [[nodiscard]] Family family() const noexcept { return config_.family; }
    [[nodiscard]] const Sector& sector() const noexcept { return config_.sector; }
    [[nodiscard]] int n_modes() const noexcept { return config_.sector.n_modes(); }

    [[nodiscard]] virtual Eigen::Index n_params() const = 0;

    /// log psi(n); real part is kNodeLogModulus at a zero amplitude.
    [[nodiscard]] virtual Complex log_amplitude(Configuration c, const ParamVector& p) const = 0;

    /// Fills `out` with O_k = d log psi / d p_k and returns log psi.
    /// Throws NodeError when psi(n) = 0.
    virtual Complex log_derivatives(Configuration c, const ParamVector& p,
                                    Eigen::VectorXcd& out) const = 0;

    /// Draws parameters from the configured seed and scale.
    [[nodiscard]] virtual ParamVector init_params() const = 0;

protected:
    void check(Configuration c, const ParamVector& p) const;
    [[nodiscard]] Eigen::VectorXd encode(Configuration c) const;

    AnsatzConfig config_;
};

[[nodiscard]] Eigen::Index parameter_count(const AnsatzConfig& config);
[[nodiscard]] std::unique_ptr<Ansatz> make_ansatz(const AnsatzConfig& config);

/// Plain amplitude table over the sector basis. init_params gives a uniform state.
[[nodiscard]] std::unique_ptr<Ansatz> make_table_ansatz(const Sector& sector);

struct Checkpoint {
    AnsatzConfig config;
    ParamVector params;
    Eigen::VectorXd kappa;
};

void write_checkpoint(std::ostream& out, const Checkpoint& cp);
[[nodiscard]] Checkpoint read_checkpoint(std::istream& in);
/// Writes to a temporary file in the same directory and renames it into place.
void save_checkpoint(const std::string& path, const Checkpoint& cp);
[[nodiscard]] Checkpoint load_checkpoint(const std::string& path);

} // namespace orbrot
