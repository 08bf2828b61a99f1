// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "orbrot/oracle.hpp"
#include "orbrot/vqe.hpp"
#include "support.hpp"

using namespace orbrot;
using orbrot::testing::fixture;
using orbrot::testing::manifest_value;
using orbrot::testing::random_integrals;

namespace {

constexpr double kPi = std::numbers::pi;

PauliHamiltonian single_z(int n_qubits, int qubit) {
    return PauliHamiltonian{n_qubits, {{1.0, 0, Bits{1} << qubit}}};
}

// Finite-difference derivative states from apply_cascade.
Eigen::MatrixXd fd_metric(const CascadeParams& p, double h) {
    const Statevector psi = apply_cascade(p);
    const auto k = p.angles.size();
    Eigen::MatrixXd D(psi.size(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        CascadeParams a = p, b = p;
        a.angles[i] += h;
        b.angles[i] -= h;
        D.col(i) = (apply_cascade(a) - apply_cascade(b)) / (2 * h);
    }
    const Eigen::VectorXd ov = D.transpose() * psi;
    return D.transpose() * D - ov * ov.transpose();
}

} // namespace

TEST_CASE("cascade closed forms") {
    SUBCASE("zero angles give the all-zeros state") {
        for (int layers : {1, 3}) {
            const Statevector psi = apply_cascade(zero_cascade(6, layers));
            CHECK(psi[0] == 1.0);
            CHECK(psi.squaredNorm() == 1.0);
        }
    }
    SUBCASE("single qubit rotated by pi flips") {
        CascadeParams p = zero_cascade(1, 1);
        p.angles[0] = kPi;
        const Statevector psi = apply_cascade(p);
        CHECK(std::abs(psi[0]) < 1e-15);
        CHECK(psi[1] == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("angle count and validation") {
        CHECK(CascadeParams::angle_count(12, 3) == 36);
        CascadeParams p = zero_cascade(4, 2);
        CHECK(p.angles.size() == 8);
        p.angles.resize(7);
        CHECK_THROWS_AS(p.validate(), std::invalid_argument);
        CHECK_THROWS_AS((void)zero_cascade(kMaxQubits + 1, 1), std::invalid_argument);
    }
    SUBCASE("random angles are uniform on [0, 2pi) and keep the norm") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const CascadeParams p = random_cascade(8, 3, seed);
            CHECK(p.angles.minCoeff() >= 0.0);
            CHECK(p.angles.maxCoeff() < 2 * kPi);
            CHECK(std::abs(apply_cascade(p).norm() - 1.0) < 1e-12);
        }
    }
    SUBCASE("CNOT ladder wiring") {
        // one layer with only qubit 0 flipped: the ladder copies it down the chain
        CascadeParams p = zero_cascade(4, 1);
        p.angles[0] = kPi;
        const Statevector psi = apply_cascade(p);
        CHECK(psi[0b1111] == doctest::Approx(1.0).epsilon(1e-15));
        // flipping the last qubit leaves the others untouched
        p = zero_cascade(4, 1);
        p.angles[3] = kPi;
        CHECK(apply_cascade(p)[0b1000] == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("Jordan-Wigner closed forms") {
    SUBCASE("number operator") {
        IntegralSet ints(1);
        ints.h(0, 0) = 1.0;
        const PauliHamiltonian H = jw_hamiltonian(ints);
        REQUIRE(H.terms.size() == 3);
        CHECK(pauli_label(H.terms[0]) == "I");
        CHECK(H.terms[0].coeff == doctest::Approx(1.0));
        CHECK(pauli_label(H.terms[1]) == "Z0");
        CHECK(H.terms[1].coeff == doctest::Approx(-0.5));
        CHECK(pauli_label(H.terms[2]) == "Z1");
        CHECK(H.terms[2].coeff == doctest::Approx(-0.5));
        CHECK(expectation(apply_cascade(zero_cascade(2, 1)), H) == 0.0);
    }
    SUBCASE("core only") {
        IntegralSet ints(2);
        ints.core = -3.25;
        const PauliHamiltonian H = jw_hamiltonian(ints);
        REQUIRE(H.terms.size() == 1);
        CHECK(pauli_label(H.terms[0]) == "I");
        CHECK(H.terms[0].coeff == -3.25);
    }
    SUBCASE("identity Hamiltonian") {
        IntegralSet ints(2);
        ints.core = 1.0;
        CHECK(expectation(apply_cascade(random_cascade(4, 2, 9)), jw_hamiltonian(ints)) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("hopping term carries X X and Y Y") {
        IntegralSet ints(2);
        ints.h(0, 1) = ints.h(1, 0) = -1.0;
        const PauliHamiltonian H = jw_hamiltonian(ints);
        std::vector<std::string> labels;
        for (const auto& t : H.terms) {
            labels.push_back(pauli_label(t));
            CHECK(std::abs(t.coeff) == doctest::Approx(0.5));
        }
        std::sort(labels.begin(), labels.end());
        CHECK(labels == std::vector<std::string>{"X0 X1", "X2 X3", "Y0 Y1", "Y2 Y3"});
    }
}

TEST_CASE("dense rebuild matches the oracle on every sector") {
    auto check_all_sectors = [](const IntegralSet& ints) {
        const Eigen::MatrixXcd dense = jw_hamiltonian(ints).dense();
        CHECK((dense - dense.adjoint()).norm() < 1e-12);
        const int n = ints.n_orb;
        // no coupling between different particle-number sectors
        for (Eigen::Index i = 0; i < dense.rows(); ++i)
            for (Eigen::Index j = 0; j < dense.cols(); ++j) {
                const Configuration a{static_cast<Bits>(i)}, b{static_cast<Bits>(j)};
                const bool same = std::popcount(a.bits & spin_mask(Spin::Up, n)) ==
                                      std::popcount(b.bits & spin_mask(Spin::Up, n)) &&
                                  std::popcount(a.bits & spin_mask(Spin::Down, n)) ==
                                      std::popcount(b.bits & spin_mask(Spin::Down, n));
                if (!same) CHECK(std::abs(dense(i, j)) < 1e-14);
            }
        for (int u = 0; u <= n; ++u)
            for (int d = 0; d <= n; ++d) {
                const SectorMatrix m = build_sector_hamiltonian(ints, Sector{n, u, d});
                const Eigen::MatrixXd ref = m.dense();
                double diff = 0.0;
                for (std::size_t i = 0; i < m.basis.size(); ++i)
                    for (std::size_t j = 0; j < m.basis.size(); ++j) {
                        const std::complex<double> v = dense(static_cast<Eigen::Index>(m.basis[i].bits),
                                             static_cast<Eigen::Index>(m.basis[j].bits));
                        diff = std::max(diff, std::abs(v - ref(static_cast<Eigen::Index>(i),
                                                               static_cast<Eigen::Index>(j))));
                    }
                CHECK(diff < 1e-10);
            }
    };
    check_all_sectors(load_fcidump(fixture("h2_0.735.fcidump")).integrals);
    check_all_sectors(random_integrals(3, 42));
    check_all_sectors(hubbard_ring(HubbardSpec{3, 1.0, 2.5, true}));
}

TEST_CASE("expectation and Fock-space energies") {
    const auto d = load_fcidump(fixture("hf_1.21.fcidump"));
    const PauliHamiltonian H = jw_hamiltonian(d.integrals);
    const LocalHamiltonian L(d.integrals);
    SUBCASE("oracle ground state embedded in the register") {
        const SectorMatrix m = build_sector_hamiltonian(d.integrals, d.sector);
        const Eigenpair g = ground_state(m);
        Statevector psi = Statevector::Zero(Eigen::Index{1} << 12);
        for (std::size_t i = 0; i < m.basis.size(); ++i)
            psi[static_cast<Eigen::Index>(m.basis[i].bits)] = g.vector[static_cast<Eigen::Index>(i)];
        CHECK(expectation(psi, H) == doctest::Approx(manifest_value("hf_1.21", "e_fci")).epsilon(1e-12));
        CHECK(psi.dot(apply_hamiltonian(L, psi)) == doctest::Approx(g.energy).epsilon(1e-12));
        CHECK(sector_weight(psi, d.sector) == doctest::Approx(1.0));
    }
    SUBCASE("random circuits agree between both Hamiltonian forms") {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const Statevector psi = apply_cascade(random_cascade(12, 2, seed));
            const double e_pauli = expectation(psi, H);
            CHECK(psi.dot(apply_hamiltonian(L, psi)) == doctest::Approx(e_pauli).epsilon(1e-12));
            CHECK(statevector_rdms(psi, 6).energy(d.integrals) == doctest::Approx(e_pauli).epsilon(1e-12));
            // the circuit does not conserve particle number
            const double w = sector_weight(psi, d.sector);
            CHECK(w < 1.0 - 1e-3);
            CHECK(e_pauli >= manifest_value("hf_1.21", "e_fci") - 1e-9);
        }
    }
    SUBCASE("norm violation") {
        Statevector psi = apply_cascade(random_cascade(12, 1, 1));
        psi *= 1.01;
        CHECK_THROWS_AS((void)expectation(psi, H), std::invalid_argument);
    }
}

TEST_CASE("statevector RDMs match sector RDMs") {
    const auto d = load_fcidump(fixture("h4_gamma085.fcidump"));
    const SectorMatrix m = build_sector_hamiltonian(d.integrals, d.sector);
    Eigen::VectorXd v = orbrot::testing::random_vector(static_cast<int>(m.basis.size()), 8);
    v.normalize();
    Statevector psi = Statevector::Zero(Eigen::Index{1} << 8);
    for (std::size_t i = 0; i < m.basis.size(); ++i)
        psi[static_cast<Eigen::Index>(m.basis[i].bits)] = v[static_cast<Eigen::Index>(i)];
    const RdmSet a = statevector_rdms(psi, 4), b = exact_rdms(v, m.basis);
    for (int s = 0; s < 2; ++s) CHECK((a.one[s] - b.one[s]).cwiseAbs().maxCoeff() < 1e-14);
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < a.two[k].size(); ++i) CHECK(std::abs(a.two[k][i] - b.two[k][i]) < 1e-14);
}

TEST_CASE("orbital force from H psi matches the RDM route") {
    const auto ref = load_fcidump(fixture("h4_gamma085.fcidump")).integrals;
    for (std::uint64_t seed : {1u, 2u}) {
        const OrbitalRotation rot(4, orbrot::testing::random_vector(6, 30 + seed, 0.4));
        const IntegralSet rotated = rotate_integrals(ref, rot.phi());
        const Statevector psi = apply_cascade(random_cascade(8, 2, seed));
        const Statevector hpsi = apply_hamiltonian(LocalHamiltonian(rotated), psi);
        const Eigen::VectorXd a = statevector_kappa_force(rot, psi, hpsi);
        const Eigen::VectorXd b = kappa_force(ref, rot, statevector_rdms(psi, 4));
        CHECK((a - b).norm() < 1e-10 * std::max(1.0, b.norm()));
        CHECK(b.norm() > 1e-3);
    }
}

TEST_CASE("parameter-shift gradient") {
    SUBCASE("single qubit closed form") {
        const PauliHamiltonian Z = single_z(1, 0);
        for (double th : {0.0, 0.4, 1.9, 4.0}) {
            CascadeParams p = zero_cascade(1, 1);
            p.angles[0] = th;
            CHECK(expectation(apply_cascade(p), Z) == doctest::Approx(std::cos(th)));
            CHECK(circuit_gradient(p, Z)[0] == doctest::Approx(-std::sin(th)).epsilon(1e-13));
        }
    }
    SUBCASE("angle outside the support") {
        const CascadeParams p = random_cascade(4, 2, 3);
        const Eigen::VectorXd g = circuit_gradient(p, single_z(4, 0));
        // last-layer rotation of the last qubit never reaches qubit 0
        CHECK(g[7] == 0.0);
        CHECK(g.norm() > 1e-3);
    }
    SUBCASE("central differences and derivative states") {
        const auto ints = load_fcidump(fixture("h2_0.735.fcidump")).integrals;
        const PauliHamiltonian H = jw_hamiltonian(ints);
        const LocalHamiltonian L(ints);
        for (std::uint64_t seed : {5u, 6u}) {
            const CascadeParams p = random_cascade(4, 3, seed);
            const Eigen::VectorXd g = circuit_gradient(p, H);
            const Eigen::VectorXd g_fast = circuit_gradient(p, L);
            const CircuitDerivatives cd = cascade_derivatives(p);
            const Statevector hpsi = apply_hamiltonian(L, cd.psi);
            for (Eigen::Index k = 0; k < g.size(); ++k) {
                CascadeParams a = p, b = p;
                a.angles[k] += 1e-5;
                b.angles[k] -= 1e-5;
                const double fd = (expectation(apply_cascade(a), H) - expectation(apply_cascade(b), H)) / 2e-5;
                CHECK(std::abs(g[k] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
                CHECK(g_fast[k] == doctest::Approx(g[k]).epsilon(1e-12));
                CHECK(2.0 * cd.d[static_cast<std::size_t>(k)].dot(hpsi) ==
                      doctest::Approx(g[k]).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("quantum natural gradient metric") {
    SUBCASE("first rotation column is a product state") {
        const CascadeParams p = random_cascade(6, 1, 12);
        const Eigen::MatrixXd g = qng_metric(p).S;
        CHECK((g - 0.25 * Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("finite differences and positivity") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const CascadeParams p = random_cascade(6, 3, seed);
            const Eigen::MatrixXd g = qng_metric(p).S;
            CHECK((g - fd_metric(p, 1e-4)).cwiseAbs().maxCoeff() < 1e-6);
            CHECK((g - g.transpose()).norm() < 1e-14);
            CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff() >= -1e-12);
        }
    }
}

TEST_CASE("VQE runs") {
    const auto d = load_fcidump(fixture("h2_0.735.fcidump"));
    const double e_fci = manifest_value("h2_0.735", "e_fci");
    OptimizerConfig c;
    c.eta = 0.1;
    c.steps = 40;
    SUBCASE("frozen kappa equals the pure-angle run bit for bit") {
        const CascadeParams init = random_cascade(4, 2, 77);
        const VqeResult off = vqe_run(d.integrals, d.sector, init, c);
        OptimizerConfig on = c;
        on.kappa_enabled = true;
        on.eta_kappa = 0.0;
        const VqeResult frozen = vqe_run(d.integrals, d.sector, init, on);
        REQUIRE(off.trajectory.records.size() == frozen.trajectory.records.size());
        for (std::size_t i = 0; i < off.trajectory.records.size(); ++i) {
            CHECK(off.trajectory.records[i].energy == frozen.trajectory.records[i].energy);
            CHECK(off.trajectory.records[i].force_theta == frozen.trajectory.records[i].force_theta);
        }
        CHECK(off.params.angles == frozen.params.angles);
        CHECK(frozen.trajectory.records.front().force_kappa >= 0.0);
    }
    SUBCASE("energies respect the variational bound and the best run is accurate") {
        c.steps = 300;
        c.kappa_enabled = true;
        double best = 1e9;
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            const VqeResult r = vqe_run(d.integrals, d.sector, random_cascade(4, 2, seed), c);
            for (const auto& rec : r.trajectory.records) CHECK(rec.energy >= e_fci - 1e-9);
            if (r.trajectory.final_energy() < best) best = r.trajectory.final_energy();
        }
        CHECK(best - e_fci < 1e-6);
    }
    SUBCASE("zero steps") {
        c.steps = 0;
        const CascadeParams init = random_cascade(4, 1, 1);
        const VqeResult r = vqe_run(d.integrals, d.sector, init, c);
        CHECK(r.trajectory.records.size() == 1);
        CHECK(r.params.angles == init.angles);
        CHECK(r.iterations == 0);
    }
}

TEST_CASE("restart study smoke run") {
    const auto d = load_fcidump(fixture("h2_0.735.fcidump"));
    const double e_fci = manifest_value("h2_0.735", "e_fci");
    OptimizerConfig c;
    c.eta = 0.1;
    c.steps = 30;
    const auto rows = restart_study(d.integrals, d.sector, e_fci, 1, 2, 3, c, 2);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.error_rotated >= -1e-9);
        CHECK(r.error_fixed >= -1e-9);
        CHECK(r.weight_rotated <= 1.0 + 1e-12);
    }
    CHECK(rows[0].seed != rows[1].seed);
    const auto again = restart_study(d.integrals, d.sector, e_fci, 1, 2, 3, c, 1);
    CHECK(again[1].error_rotated == rows[1].error_rotated);

    const auto cum = cumulative_fraction(rows, {-1.0, 1e9});
    CHECK(cum[0].fraction_rotated == 0.0);
    CHECK(cum[1].fraction_fixed == 1.0);
    std::ostringstream a, b;
    write_restart_csv(a, rows);
    write_cumulative_csv(b, cum);
    CHECK(a.str().rfind("init_id,seed,error_rotated,error_fixed", 0) == 0);
    const std::string sa = a.str(), sb = b.str();
    CHECK(std::count(sa.begin(), sa.end(), '\n') == 3);
    CHECK(std::count(sb.begin(), sb.end(), '\n') == 3);
    CHECK_THROWS_AS((void)restart_study(d.integrals, d.sector, e_fci, 1, 1, 3, c), std::invalid_argument);
}
