// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>

#include "orbrot/errors.hpp"
#include "orbrot/oracle.hpp"
#include "support.hpp"

using namespace orbrot;
using orbrot::testing::fixture;

TEST_CASE("two-site Hubbard matrix") {
    const double U = 3.0;
    const auto M = build_sector_hamiltonian(hubbard_ring({2, 1.0, U, true}), {2, 1, 1}).dense();
    CHECK((M - M.transpose()).norm() == 0.0);
    // basis: up strings inner, down strings outer
    const Eigen::Vector4d diag(U, 0.0, 0.0, U);
    CHECK((M.diagonal() - diag).norm() == 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(std::abs(M(i, j)) == doctest::Approx((i + j == 3) ? 0.0 : 1.0));
}

TEST_CASE("core-only matrix and capacity") {
    IntegralSet I(3);
    I.core = 1.25;
    const auto M = build_sector_hamiltonian(I, {3, 1, 2}).dense();
    CHECK((M - 1.25 * Eigen::MatrixXd::Identity(M.rows(), M.cols())).norm() == 0.0);
    CHECK_THROWS_AS(build_sector_hamiltonian(hubbard_ring({8, 1, 4, true}), {8, 4, 4}, 100),
                    CapacityError);
}

TEST_CASE("ground state: closed forms, residual, sign convention") {
    for (double U : {0.0, 4.0, 11.0}) {
        const double e = oracle_energy(hubbard_ring({2, 1.0, U, true}), {2, 1, 1});
        CHECK(std::abs(e - (U / 2 - std::sqrt(U * U / 4 + 4.0))) < 1e-12);
    }
    CHECK(std::abs(oracle_energy(hubbard_ring({6, 1.0, 0.0, true}), {6, 3, 3}) + 8.0) < 1e-10);

    const auto M = build_sector_hamiltonian(load_fcidump(fixture("hf_1.21.fcidump")).integrals,
                                            {6, 5, 5});
    const auto gs = ground_state(M);
    CHECK((M.matrix * gs.vector - gs.energy * gs.vector).norm() < 1e-9);
    CHECK(gs.vector.norm() == doctest::Approx(1.0));
    Eigen::Index first = 0;
    while (std::abs(gs.vector[first]) < 1e-12) ++first;
    CHECK(gs.vector[first] > 0);
}

TEST_CASE("Lanczos matches the dense solver") {
    const auto M = build_sector_hamiltonian(hubbard_ring({7, 1.0, 4.0, true}), {7, 3, 3});
    REQUIRE(M.basis.size() == 1225);
    const auto dense = ground_state(M);
    const auto lz = lanczos_ground_state(M.matrix);
    CHECK(std::abs(dense.energy - lz.energy) < 1e-10);
    CHECK(std::abs(std::abs(dense.vector.dot(lz.vector)) - 1.0) < 1e-8);
    // above the dense limit the iterative path is taken automatically
    const auto big = build_sector_hamiltonian(hubbard_ring({8, 1.0, 4.0, true}), {8, 4, 4});
    const auto g = ground_state(big);
    CHECK((big.matrix * g.vector - g.energy * g.vector).norm() < 1e-9);
}

TEST_CASE("fixtures: stored FCI energies and energy recontraction") {
    for (const char* key : {"h2_0.735", "h4_gamma025", "h4_gamma090", "hf_1.21", "bh_1.23"}) {
        const auto d = load_fcidump(fixture(std::string(key) + ".fcidump"));
        const auto gs = ground_state(build_sector_hamiltonian(d.integrals, d.sector));
        CHECK(std::abs(gs.energy - orbrot::testing::manifest_value(key, "e_fci")) < 1e-8);
        const auto rdm = exact_rdms(gs.vector, SectorBasis(d.sector));
        CHECK(std::abs(rdm.energy(d.integrals) - gs.energy) < 1e-9);
        CHECK(rdm.one[0].trace() == doctest::Approx(d.sector.n_up));
        CHECK(rdm.one[1].trace() == doctest::Approx(d.sector.n_down));
    }
}

TEST_CASE("RDM partial traces") {
    const auto d = load_fcidump(fixture("h4_gamma025.fcidump"));
    const Sector s{4, 2, 1};
    const auto gs = ground_state(build_sector_hamiltonian(d.integrals, s));
    const auto r = exact_rdms(gs.vector, SectorBasis(s));
    const int n = 4;
    const int count[2] = {s.n_up, s.n_down};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const auto& t = r.two[static_cast<std::size_t>(2 * a + b)];
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    double tr = 0;
                    for (int x = 0; x < n; ++x) tr += t[r.index(p, x, q, x)];
                    CHECK(std::abs(tr - r.one[a](p, q) * (count[b] - (a == b))) < 1e-10);
                }
        }
}

TEST_CASE("two-site singlet double occupancy") {
    const double U = 4.0;
    const auto M = build_sector_hamiltonian(hubbard_ring({2, 1.0, U, true}), {2, 1, 1});
    const auto gs = ground_state(M);
    const auto r = exact_rdms(gs.vector, M.basis);
    const double docc = 0.25 - (U / 8) / std::sqrt(U * U / 4 + 4.0);
    CHECK(r.two[1][r.index(0, 0, 0, 0)] == doctest::Approx(docc).epsilon(1e-12));
    CHECK(r.two[2][r.index(1, 1, 1, 1)] == doctest::Approx(docc).epsilon(1e-12));
}
