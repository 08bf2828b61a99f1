// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file errors.hpp
 * @brief Exception types shared across the library.
 *
 * The CLI maps each category to a distinct exit status.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace orbrot {

/// Invalid or inconsistent user configuration (config files, specs).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A request exceeds a configured size limit (enumeration, matrix build).
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative procedure failed to reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The ansatz has a node (zero amplitude or singular determinant) here.
struct NodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (FCIDUMP, checkpoint).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace orbrot
