// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <sstream>

#include "orbrot/errors.hpp"
#include "orbrot/integrals.hpp"
#include "orbrot/oracle.hpp"
#include "support.hpp"

using namespace orbrot;
using orbrot::testing::fixture;

namespace {

FcidumpData parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_fcidump(in);
}

double max_tensor_diff(const IntegralSet& a, const IntegralSet& b) {
    double d = std::abs(a.core - b.core);
    d = std::max(d, (a.h - b.h).cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < a.g.size(); ++i) d = std::max(d, std::abs(a.g[i] - b.g[i]));
    return d;
}

} // namespace

TEST_CASE("core-only file") {
    const auto d = parse_text(" &FCI NORB=2,NELEC=2,MS2=0, &END\n 0.5 0 0 0 0\n");
    CHECK(d.integrals.core == 0.5);
    CHECK(d.integrals.h.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.integrals.count_two_body_nonzero() == 0);
    CHECK(d.sector == Sector{2, 1, 1});
}

TEST_CASE("one-orbital two-body record") {
    const auto d = parse_text("&FCI NORB=1,NELEC=1,MS2=1,\n&END\n0.7 1 1 1 1\n");
    CHECK(d.integrals.two(0, 0, 0, 0) == 0.7);
    CHECK(d.sector == Sector{1, 1, 0});
}

TEST_CASE("chemist records map to the physicist layout") {
    // (12|34)-type record: <pq|rs> = (pr|qs)
    const auto d = parse_text("&FCI NORB=2,NELEC=2,MS2=0 &END\n0.25 1 2 2 1\n0.1 1 1 2 2\n");
    const auto& I = d.integrals;
    CHECK(I.two(0, 1, 1, 0) == 0.25);  // (01|10) -> <01|10>
    CHECK(I.two(0, 0, 1, 1) == 0.25);  // (01|01) image
    CHECK(I.two(0, 1, 0, 1) == 0.1);   // (00|11) -> <01|01>
    CHECK(I.symmetry_violation() == 0.0);
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(parse_text("&FCI NELEC=2,MS2=0 &END\n"), ParseError);
    CHECK_THROWS_AS(parse_text("&FCI NORB=2,NELEC=2,MS2=0 &END\n1.0 3 1 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_text("&FCI NORB=2,NELEC=2,MS2=0 &END\n1.0 1 1\n"), ParseError);
    CHECK_THROWS_AS(
        parse_text("&FCI NORB=2,NELEC=2,MS2=0 &END\n1.0 1 2 0 0\n2.0 2 1 0 0\n"), ParseError);
    CHECK_NOTHROW(
        parse_text("&FCI NORB=2,NELEC=2,MS2=0 &END\n1.0 1 2 0 0\n1.0 2 1 0 0\n"));
    CHECK_THROWS_AS(load_fcidump("/nonexistent/file"), std::runtime_error);
}

TEST_CASE("H2 fixture reproduces the stored FCI energy") {
    const auto d = load_fcidump(fixture("h2_0.735.fcidump"));
    CHECK(d.sector == Sector{2, 1, 1});
    const double e0 = oracle_energy(d.integrals, d.sector);
    CHECK(std::abs(e0 - orbrot::testing::manifest_value("h2_0.735", "e_fci")) < 1e-8);
    CHECK(std::abs(e0 - (-1.1459778539)) < 1e-8);
}

TEST_CASE("write then parse round trips") {
    for (const char* name : {"h2_0.735.fcidump", "h4_gamma025.fcidump", "hf_1.21.fcidump"}) {
        const auto d = load_fcidump(fixture(name));
        std::ostringstream out;
        write_fcidump(out, d.integrals, d.sector);
        const auto back = parse_text(out.str());
        CHECK(back.sector == d.sector);
        CHECK(max_tensor_diff(back.integrals, d.integrals) <= 1e-14);
    }
}

TEST_CASE("zero integral set writes a single core record") {
    std::ostringstream out;
    write_fcidump(out, IntegralSet(3), Sector{3, 1, 1});
    std::istringstream in(out.str());
    std::string line;
    int records = 0;
    bool in_body = false;
    while (std::getline(in, line)) {
        if (in_body && !line.empty()) ++records;
        if (line.find("&END") != std::string::npos || line.find('/') == 0) in_body = true;
    }
    CHECK(records == 1);
}

TEST_CASE("Hubbard ring spectra survive a file round trip") {
    const auto I = hubbard_ring({6, 1.0, 4.0, true});
    std::ostringstream out;
    write_fcidump(out, I, {6, 3, 3});
    const auto back = parse_text(out.str());
    const auto a = sector_spectrum(build_sector_hamiltonian(I, {6, 3, 3}));
    const auto b = sector_spectrum(build_sector_hamiltonian(back.integrals, back.sector));
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Hubbard ring closed forms") {
    CHECK(oracle_energy(hubbard_ring({6, 1.0, 0.0, true}), {6, 3, 3}) ==
          doctest::Approx(-8.0).epsilon(1e-12));
    const double U = 50.0;
    const double e = oracle_energy(hubbard_ring({2, 1.0, U, true}), {2, 1, 1});
    CHECK(std::abs(e / (-4.0 / U) - 1.0) < 0.05);
    const double u4 = oracle_energy(hubbard_ring({2, 1.0, 4.0, false}), {2, 1, 1});
    CHECK(std::abs(u4 - (4.0 - std::sqrt(32.0)) / 2.0) < 1e-12);
}

TEST_CASE("Hubbard two-body count is linear in sites") {
    for (int L : {4, 6, 8, 10}) {
        const auto I = hubbard_ring({L, 1.0, 4.0, true});
        CHECK(I.count_two_body_nonzero() == static_cast<std::size_t>(L));
        CHECK((I.h - I.h.transpose()).norm() == 0.0);
        CHECK(I.h(0, L - 1) == -1.0);
    }
    CHECK(hubbard_ring({6, 1.0, 4.0, false}).h(0, 5) == 0.0);
}

TEST_CASE("rotate_integrals: identity, permutation, orthogonality check") {
    const auto I = load_fcidump(fixture("h4_gamma025.fcidump")).integrals;
    const int n = I.n_orb;
    CHECK(max_tensor_diff(rotate_integrals(I, Eigen::MatrixXd::Identity(n, n)), I) < 1e-15);

    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    const int perm[] = {2, 0, 3, 1};
    for (int i = 0; i < n; ++i) P(perm[i], i) = 1.0;  // new orbital i = old orbital perm[i]
    const auto R = rotate_integrals(I, P);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            CHECK(R.h(p, q) == I.h(perm[p], perm[q]));
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    CHECK(R.two(p, q, r, s) == I.two(perm[p], perm[q], perm[r], perm[s]));
        }

    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(n, n);
    bad(0, 1) = 1e-6;
    CHECK_THROWS_AS(rotate_integrals(I, bad), std::invalid_argument);
}

TEST_CASE("rotation leaves the spectrum unchanged and composes") {
    const auto d = load_fcidump(fixture("h4_gamma025.fcidump"));
    const auto& I = d.integrals;
    const auto base = sector_spectrum(build_sector_hamiltonian(I, d.sector));
    const Eigen::MatrixXd A = orbrot::testing::random_orthogonal(4, 11);
    const Eigen::MatrixXd B = orbrot::testing::random_orthogonal(4, 12);
    const auto RA = rotate_integrals(I, A);
    CHECK(RA.symmetry_violation() < 1e-13);
    const auto rot = sector_spectrum(build_sector_hamiltonian(RA, d.sector));
    CHECK((base - rot).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(max_tensor_diff(rotate_integrals(RA, B), rotate_integrals(I, A * B)) < 1e-12);
    for (const Sector s : {Sector{4, 1, 2}, Sector{4, 3, 0}}) {
        const auto x = sector_spectrum(build_sector_hamiltonian(I, s));
        const auto y = sector_spectrum(build_sector_hamiltonian(RA, s));
        CHECK((x - y).cwiseAbs().maxCoeff() < 1e-9);
    }
}
