// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <limits>

#include "orbrot/oracle.hpp"
#include "orbrot/rotation.hpp"
#include "support.hpp"

using namespace orbrot;
using orbrot::testing::fixture;
using orbrot::testing::random_vector;

TEST_CASE("parameter layout") {
    CHECK(kappa_param_count(4) == 6);
    for (int k = 0; k < kappa_param_count(6); ++k) {
        const auto [p, q] = kappa_param_pair(k);
        CHECK(p > q);
        CHECK(kappa_param_index(p, q) == k);
        const Eigen::MatrixXd E = kappa_generator(k, 6);
        CHECK(E(p, q) == 1.0);
        CHECK(E(q, p) == -1.0);
        CHECK(E.cwiseAbs().sum() == 2.0);
    }
    const Eigen::VectorXd x = random_vector(6, 3);
    const Eigen::MatrixXd K = kappa_matrix(x, 4);
    CHECK((K + K.transpose()).norm() == 0.0);
}

TEST_CASE("expm closed forms and orthogonality") {
    CHECK((expm_antisymmetric(Eigen::VectorXd::Zero(15), 6) -
           Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);

    const double a = 0.3;
    Eigen::MatrixXd K(2, 2);
    K << 0, a, -a, 0;
    Eigen::MatrixXd ref(2, 2);
    ref << std::cos(a), std::sin(a), -std::sin(a), std::cos(a);
    CHECK((expm(K) - ref).cwiseAbs().maxCoeff() < 1e-15);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Eigen::MatrixXd phi = expm_antisymmetric(random_vector(15, seed), 6);
        CHECK((phi.transpose() * phi - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK(std::abs(phi.determinant() - 1.0) < 1e-10);
    }

    Eigen::VectorXd bad = Eigen::VectorXd::Zero(3);
    bad[1] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm_antisymmetric(bad, 3), std::invalid_argument);
}

TEST_CASE("expm agrees with an independent implementation on general matrices") {
    for (double scale : {1e-3, 0.5, 3.0, 40.0}) {
        const Eigen::VectorXd v = random_vector(25, 7, scale);
        const Eigen::MatrixXd A = Eigen::Map<const Eigen::MatrixXd>(v.data(), 5, 5);
        const Eigen::MatrixXd ref = A.exp();
        CHECK((expm(A) - ref).norm() <= 1e-12 * ref.norm());
    }
}

TEST_CASE("Frechet derivative") {
    const Eigen::MatrixXd E = kappa_generator(2, 3);
    CHECK((expm_directional_derivative(Eigen::VectorXd::Zero(3), 3, 2) - E).norm() < 1e-15);

    const Eigen::VectorXd x = random_vector(10, 5);
    for (int k = 0; k < 10; ++k) {
        const double h = 1e-5;
        Eigen::VectorXd xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const Eigen::MatrixXd fd =
            (expm_antisymmetric(xp, 5) - expm_antisymmetric(xm, 5)) / (2.0 * h);
        const Eigen::MatrixXd an = expm_directional_derivative(x, 5, k);
        CHECK((fd - an).norm() / an.norm() < 1e-6);
    }

    // planar rotation: d/da [[c,-s],[s,c]] for the (1,0) generator
    const double a = 0.3;
    Eigen::VectorXd p(1);
    p[0] = a;
    Eigen::MatrixXd ref(2, 2);
    ref << -std::sin(a), -std::cos(a), std::cos(a), -std::sin(a);
    CHECK((expm_directional_derivative(p, 2, 0) - ref).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("integral derivatives against finite differences") {
    const auto I = load_fcidump(fixture("h4_gamma025.fcidump")).integrals;
    for (const Eigen::VectorXd& x : {Eigen::VectorXd(Eigen::VectorXd::Zero(6)),
                                     random_vector(6, 21, 0.4)}) {
        for (int k = 0; k < 6; ++k) {
            const double h = 1e-5;
            Eigen::VectorXd xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            const auto Ip = rotate_integrals(I, expm_antisymmetric(xp, 4));
            const auto Im = rotate_integrals(I, expm_antisymmetric(xm, 4));
            const auto d = integral_derivatives(I, OrbitalRotation(4, x), k);
            const Eigen::MatrixXd fdh = (Ip.h - Im.h) / (2 * h);
            CHECK((fdh - d.dh).norm() <= 1e-7 * std::max(1.0, d.dh.norm()));
            double num = 0, den = 0;
            for (std::size_t i = 0; i < d.dg.size(); ++i) {
                const double fd = (Ip.g[i] - Im.g[i]) / (2 * h);
                num += (fd - d.dg[i]) * (fd - d.dg[i]);
                den += d.dg[i] * d.dg[i];
            }
            CHECK(std::sqrt(num) <= 1e-7 * std::max(1.0, std::sqrt(den)));
        }
    }
}

TEST_CASE("two-site Hubbard planar rotation derivatives") {
    const double t = 1.0, U = 4.0, a = 0.37;
    const auto I = hubbard_ring({2, t, U, false});
    Eigen::VectorXd x(1);
    x[0] = a;
    const auto d = integral_derivatives(I, OrbitalRotation(2, x), 0);
    CHECK(d.dh(0, 0) == doctest::Approx(-2 * t * std::cos(2 * a)));
    CHECK(d.dh(0, 1) == doctest::Approx(2 * t * std::sin(2 * a)));
    CHECK(d.dh(1, 1) == doctest::Approx(2 * t * std::cos(2 * a)));
    CHECK(d.dg[I.gindex(0, 0, 0, 0)] == doctest::Approx(-U * std::sin(4 * a)));

    const auto z = integral_derivatives(IntegralSet(3), OrbitalRotation(3, random_vector(3, 2)), 1);
    CHECK(d.dh.size() == 4);
    CHECK(z.dh.norm() == 0.0);
    for (double v : z.dg) CHECK(v == 0.0);
}

TEST_CASE("kappa force: hand-contracted cases") {
    // one-body only, both spins in orbital 0
    IntegralSet I(2);
    I.h << 0.3, -0.45, -0.45, 1.2;
    RdmSet r(2);
    r.one[0](0, 0) = 1.0;
    r.one[1](0, 0) = 1.0;
    const auto F = kappa_force(I, OrbitalRotation(2), r);
    CHECK(F[0] == doctest::Approx(4 * I.h(0, 1)));

    // two-site Hubbard, both electrons on site 0: E(a) = -2t sin 2a + U(c^4 + s^4)
    const auto H = hubbard_ring({2, 1.0, 4.0, false});
    const SectorBasis basis({2, 1, 1});
    Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
    v[static_cast<Eigen::Index>(*basis.index_of(Sector{2, 1, 1}.reference()))] = 1.0;
    const auto rd = exact_rdms(v, basis);
    CHECK(kappa_force(H, OrbitalRotation(2), rd)[0] == doctest::Approx(-4.0));
}

TEST_CASE("kappa force equals the finite difference of the exact loss") {
    struct Case {
        IntegralSet ints;
        Sector sector;
    };
    const auto h4 = load_fcidump(fixture("h4_gamma025.fcidump"));
    const auto h2 = load_fcidump(fixture("h2_0.735.fcidump"));
    for (const Case& c : {Case{h4.integrals, h4.sector}, Case{h2.integrals, h2.sector},
                          Case{hubbard_ring({2, 1.0, 4.0, false}), Sector{2, 1, 1}}}) {
        const int n = c.ints.n_orb;
        const SectorBasis basis(c.sector);
        Eigen::VectorXd psi = random_vector(static_cast<int>(basis.size()), 8);
        psi.normalize();
        const auto rdms = exact_rdms(psi, basis);
        const Eigen::VectorXd x = random_vector(kappa_param_count(n), 9, 0.3);
        const auto loss = [&](const Eigen::VectorXd& k) {
            const auto M = build_sector_hamiltonian(
                rotate_integrals(c.ints, expm_antisymmetric(k, n)), c.sector);
            return psi.dot(M.matrix * psi);
        };
        const Eigen::VectorXd F = kappa_force(c.ints, OrbitalRotation(n, x), rdms);
        for (int k = 0; k < F.size(); ++k) {
            const double h = 1e-4;
            Eigen::VectorXd xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            const double fd = (loss(xp) - loss(xm)) / (2 * h);
            CHECK(std::abs(fd - F[k]) <= 1e-5 * std::max(std::abs(F[k]), 1e-3));
        }
    }
}
