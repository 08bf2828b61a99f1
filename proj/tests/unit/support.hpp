// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <fstream>
#include <random>
#include <string>

#include "json.hpp"

#include "orbrot/integrals.hpp"
#include "orbrot/rotation.hpp"

namespace orbrot::testing {

inline std::string fixture(const std::string& name) {
    return std::string(ORBROT_FIXTURE_DIR) + "/" + name;
}

/// Reference value stored for a fixture in the manifest (e.g. "e_fci").
inline double manifest_value(const std::string& key, const std::string& field) {
    std::ifstream in(fixture("manifest.json"));
    const auto doc = nlohmann::json::parse(in);
    return doc.at("fixtures").at(key).at(field).get<double>();
}

inline Eigen::VectorXd random_vector(int n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, scale);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

inline Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed, double scale = 0.7) {
    return expm_antisymmetric(random_vector(kappa_param_count(n), seed, scale), n);
}

/// Random real integrals with the full permutational symmetry.
inline IntegralSet random_integrals(int n, std::uint64_t seed, double scale = 0.3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, scale);
    IntegralSet ints(n);
    ints.core = nd(rng);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q) ints.h(p, q) = ints.h(q, p) = nd(rng);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s) ints.set_symmetric(p, q, r, s, nd(rng));
    return ints;
}

} // namespace orbrot::testing
