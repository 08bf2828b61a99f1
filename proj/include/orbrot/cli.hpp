// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Config-driven experiment drivers and report writers behind the `orbrot` tool.
 *
 * Configs are YAML documents with a fixed set of blocks (system, ansatz,
 * optimizer, active_space, vqe, scan, restart_study, rotate). Unknown keys
 * are rejected with the full key path in the message.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orbrot/active_space.hpp"
#include "orbrot/ansatz.hpp"
#include "orbrot/integrals.hpp"
#include "orbrot/optimizer.hpp"

namespace orbrot::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitCapacity = 3,
    kExitConvergence = 4,
};

inline const std::vector<std::string> kCommands = {"exact", "vmc",    "vqe",        "scan",
                                                   "restart-study", "rotate", "diagnostics"};

struct SystemConfig {
    std::filesystem::path fcidump;       ///< empty when a Hubbard spec is given
    std::optional<HubbardSpec> hubbard;
    std::optional<Sector> sector;        ///< required for Hubbard, optional check for FCIDUMP
};

struct ExperimentConfig {
    std::string command;
    std::uint64_t seed = 1;
    int threads = 1;
    std::filesystem::path output = "orbrot-output";
    bool compute_oracle = true;

    SystemConfig system;

    AnsatzConfig ansatz;
    bool ansatz_seed_set = false;
    OptimizerConfig optimizer;
    bool optimizer_seed_set = false;
    std::optional<ActiveSpaceSpec> active_space;

    int vqe_layers = 3;
    int vqe_restarts = 8;

    std::vector<std::filesystem::path> scan_fcidumps;
    std::string scan_method = "vmc";

    int restart_layers = 2;
    int restart_inits = 32;
    std::vector<double> restart_thresholds;

    std::vector<double> rotate_kappa;
    std::optional<double> rotate_random_scale;

    std::string source_text;  ///< raw config text, hashed into the summary
};

/// Throws ConfigError naming the offending key. Relative paths resolve against `base_dir`.
[[nodiscard]] ExperimentConfig parse_config(const std::string& text,
                                            const std::filesystem::path& base_dir);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);

struct Overrides {
    std::optional<std::string> command;
    std::optional<std::filesystem::path> output;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool exact_mode = false;
};

/// Applies CLI flags and fills seeds that were not set explicitly from the global seed.
void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

/// Runs the experiment and writes its reports. Throws on failure.
void run_experiment(const ExperimentConfig& config);

/// Exit status for an exception escaping run_experiment.
[[nodiscard]] int exit_code_for(const std::exception& e) noexcept;

/// Lower-case hex SHA-256.
[[nodiscard]] std::string sha256_hex(const std::string& bytes);
[[nodiscard]] std::string sha256_file(const std::filesystem::path& path);

/// step,energy,variance,error,force_theta,force_kappa,acceptance at 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
/// Row-major matrix as CSV without a header.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

/// Entry point of the command-line tool.
int main_entry(int argc, char** argv);

} // namespace orbrot::cli
