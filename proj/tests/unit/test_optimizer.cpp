// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cstdio>
#include <filesystem>

#include "orbrot/errors.hpp"
#include "orbrot/optimizer.hpp"
#include "orbrot/oracle.hpp"
#include "support.hpp"

using namespace orbrot;
using orbrot::testing::fixture;
using orbrot::testing::manifest_value;
using orbrot::testing::random_vector;

namespace {

HamiltonianModel load_model(const std::string& key,
                            std::optional<ActiveSpaceSpec> active = std::nullopt) {
    auto d = load_fcidump(fixture(key + ".fcidump"));
    return HamiltonianModel(std::move(d.integrals), d.sector, std::move(active));
}

std::unique_ptr<Ansatz> small_ansatz(Family f, const Sector& s, std::uint64_t seed) {
    AnsatzConfig c;
    c.family = f;
    c.sector = s;
    c.alpha = 2;
    c.seed = seed;
    c.scale = 0.1;
    return make_ansatz(c);
}

bool same_records(const Trajectory& a, const Trajectory& b) {
    if (a.records.size() != b.records.size()) return false;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& x = a.records[i];
        const auto& y = b.records[i];
        if (x.step != y.step || x.energy != y.energy || x.variance != y.variance ||
            x.error != y.error || x.force_theta != y.force_theta || x.acceptance != y.acceptance)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("sr_solve closed cases") {
    const Eigen::VectorXd F = random_vector(7, 3);
    SUBCASE("identity metric without shift") {
        const Eigen::VectorXd d = sr_solve(Eigen::MatrixXd::Identity(7, 7), F, 0.05, 0.0);
        CHECK((d + 0.05 * F).norm() <= 1e-15);
    }
    SUBCASE("diagonal metric divides componentwise") {
        const Eigen::VectorXd diag = random_vector(7, 4).cwiseAbs().array() + 0.5;
        const Eigen::VectorXd d = sr_solve(Eigen::MatrixXd(diag.asDiagonal()), F, 0.1, 0.0);
        for (int i = 0; i < 7; ++i) CHECK(d[i] == doctest::Approx(-0.1 * F[i] / diag[i]).epsilon(1e-14));
    }
    SUBCASE("escalation recovers a singular system") {
        const Eigen::VectorXd d = sr_solve(-1e-3 * Eigen::MatrixXd::Identity(7, 7), F, 1.0, 1e-3);
        CHECK((d + F / 9e-3).norm() <= 1e-10 * F.norm() / 9e-3);
    }
    SUBCASE("escalation gives up") {
        CHECK_THROWS_AS((void)sr_solve(-10.0 * Eigen::MatrixXd::Identity(7, 7), F, 1.0, 1e-3),
                        ConvergenceError);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS((void)sr_solve(Eigen::MatrixXd::Identity(6, 6), F, 1.0, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("sr_solve residual on random PSD metrics") {
    for (int trial = 0; trial < 10; ++trial) {
        const int rows = 3 + trial, p = 12;
        Eigen::MatrixXd X(rows, p);
        for (int r = 0; r < rows; ++r) X.row(r) = random_vector(p, 100 * trial + r).transpose();
        const Eigen::MatrixXd S = X.transpose() * X;
        const Eigen::VectorXd F = random_vector(p, 999 + trial);
        const double eta = 0.02, shift = 1e-3;
        const Eigen::VectorXd d = sr_solve(S, F, eta, shift);
        const Eigen::VectorXd r = S * d + shift * d + eta * F;
        CHECK(r.norm() <= 1e-10 * eta * F.norm());
        const Eigen::VectorXd df = sr_solve_factored(X, F, eta, shift);
        const Eigen::VectorXd rf = S * df + shift * df + eta * F;
        CHECK(rf.norm() <= 1e-10 * eta * F.norm());
    }
}

TEST_CASE("optimizer config validation") {
    OptimizerConfig c;
    CHECK_NOTHROW(c.validate());
    c.eta = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.shift = -1e-3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.steps = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.exact = false;
    c.chains = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK(OptimizerConfig{}.kappa_step() == OptimizerConfig{}.eta);
}

TEST_CASE("model rejects mismatched inputs") {
    auto d = load_fcidump(fixture("h4_gamma025.fcidump"));
    CHECK_THROWS_AS(HamiltonianModel(d.integrals, Sector{6, 2, 2}), ConfigError);
    CHECK_THROWS_AS(HamiltonianModel(d.integrals, d.sector, window_active_space(4, 3, 1)),
                    ConfigError);
    const HamiltonianModel m(d.integrals, d.sector, window_active_space(4, 1, 2));
    CHECK(m.variational_sector() == Sector{2, 1, 1});
    const auto wrong = small_ansatz(Family::SlaterNNJastrow, d.sector, 1);
    CHECK_THROWS_AS((void)vmc_step(*wrong, {wrong->init_params(), {}}, m, OptimizerConfig{}, 0),
                    ConfigError);
}

TEST_CASE("zero steps keeps only the initial evaluation") {
    const auto model = load_model("h2_0.735");
    const auto a = small_ansatz(Family::FFN, model.sector(), 2);
    OptimizerConfig c;
    c.steps = 0;
    const ParamVector p0 = a->init_params();
    const Trajectory t = run_optimization(*a, model, c);
    REQUIRE(t.records.size() == 1);
    CHECK(t.records[0].step == 0);
    CHECK(t.params == p0);
    CHECK(t.kappa.isZero());
    CHECK_FALSE(t.converged);
}

TEST_CASE("exact-mode H2 descent is monotone at small step size") {
    const auto model = load_model("h2_0.735");
    const double e_fci = manifest_value("h2_0.735", "e_fci");
    for (Family f : {Family::FFN, Family::RBM, Family::SlaterNNJastrow, Family::NNBackflow}) {
        CAPTURE(family_name(f));
        const auto a = small_ansatz(f, model.sector(), 11);
        OptimizerConfig c;
        c.eta = 1e-2;
        c.steps = 50;
        const Trajectory t = run_optimization(*a, model, c);
        REQUIRE(t.records.size() == 51);
        int rises = 0;
        for (std::size_t i = 1; i < t.records.size(); ++i)
            if (t.records[i].energy > t.records[i - 1].energy + 1e-9) ++rises;
        CHECK(rises == 0);
        for (const auto& r : t.records) CHECK(r.energy >= e_fci - 1e-9);
        CHECK(t.records.back().energy < t.records.front().energy);
    }
}

TEST_CASE("disabled rotations match a rotation run with frozen kappa bit for bit") {
    const auto model = load_model("h4_gamma025");
    const auto a = small_ansatz(Family::SlaterNNJastrow, model.sector(), 4);
    OptimizerConfig off;
    off.steps = 15;
    OptimizerConfig on = off;
    on.kappa_enabled = true;
    on.eta_kappa = 0.0;
    const Trajectory t_off = run_optimization(*a, model, off);
    const Trajectory t_on = run_optimization(*a, model, on);
    CHECK(same_records(t_off, t_on));
    CHECK(t_off.params == t_on.params);
    CHECK(t_on.records.front().force_kappa > 0.0);
}

TEST_CASE("identical seeds give identical sampled trajectories") {
    const auto model = load_model("h2_0.735");
    const auto a = small_ansatz(Family::RBM, model.sector(), 8);
    OptimizerConfig c;
    c.exact = false;
    c.sweeps = 200;
    c.chains = 2;
    c.threads = 2;
    c.steps = 5;
    c.kappa_enabled = true;
    const Trajectory t1 = run_optimization(*a, model, c);
    const Trajectory t2 = run_optimization(*a, model, c);
    CHECK(same_records(t1, t2));
    CHECK(t1.params == t2.params);
    CHECK(t1.kappa == t2.kappa);
    c.seed = 2;
    CHECK_FALSE(same_records(t1, run_optimization(*a, model, c)));
}

TEST_CASE("kappa-only descent reaches the Hartree-Fock energy") {
    for (const char* key : {"h2_0.735", "h4_gamma025"}) {
        CAPTURE(key);
        const auto model = load_model(key);
        const auto a = make_table_ansatz(model.sector());
        // bare Slater determinant: all weight on the reference configuration
        ParamVector theta = ParamVector::Zero(a->n_params());
        theta[static_cast<Eigen::Index>(*model.basis().index_of(model.sector().reference()))] = 1.0;
        OptimizerConfig c;
        c.theta_enabled = false;
        c.kappa_enabled = true;
        c.eta = 0.2;
        c.steps = 2000;
        c.tolerance = 1e-12;
        Eigen::VectorXd kappa0 = random_vector(kappa_param_count(model.n_orb()), 5, 0.1);
        const Trajectory t = run_optimization(*a, {theta, kappa0}, model, c);
        CHECK(t.params == theta);
        CHECK(std::abs(t.final_energy() - manifest_value(key, "e_hf")) <= 1e-6);
        CHECK(t.records.back().force_kappa < 1e-4);
    }
}

TEST_CASE("window criterion stops a converged run") {
    const auto model = load_model("h4_gamma025");
    const auto a = make_table_ansatz(model.sector());
    OptimizerConfig c;
    c.eta = 0.5;
    c.steps = 3000;
    c.window = 20;
    c.tolerance = 1e-10;
    const Trajectory t = run_optimization(*a, model, c);
    CHECK(t.converged);
    CHECK(t.records.size() < 3001);
    CHECK(t.final_energy() == doctest::Approx(manifest_value("h4_gamma025", "e_fci")).epsilon(1e-8));

    std::vector<StepRecord> flat(10);
    CHECK_FALSE(energy_window_converged(flat, 10, 1e-7, true));
    flat.resize(11);
    for (auto& r : flat) r.energy = -1.0;
    CHECK(energy_window_converged(flat, 10, 1e-7, true));
    flat.back().energy = -1.001;
    CHECK_FALSE(energy_window_converged(flat, 10, 1e-7, true));
}

TEST_CASE("active-space run with rotations beats the fixed basis") {
    const auto spec = window_active_space(4, 1, 2);
    const auto model = load_model("h4_gamma025", spec);
    const SectorMatrix cas = build_sector_hamiltonian(model.working_integrals(), model.variational_sector());
    const double e_cas = ground_state(cas).energy;
    const auto a = make_table_ansatz(model.variational_sector());
    OptimizerConfig c;
    c.eta = 0.1;
    c.steps = 600;
    c.tolerance = 1e-12;
    const Trajectory fixed = run_optimization(*a, model, c);
    CHECK(fixed.final_energy() == doctest::Approx(e_cas).epsilon(1e-9));
    c.kappa_enabled = true;
    const Trajectory rotated = run_optimization(*a, model, c);
    CHECK(rotated.final_energy() <= fixed.final_energy() + 1e-9);
    CHECK(rotated.final_energy() >= manifest_value("h4_gamma025", "e_fci") - 1e-9);
}

TEST_CASE("checkpoints round-trip the final state") {
    const auto model = load_model("h2_0.735");
    const auto a = small_ansatz(Family::SlaterNNJastrow, model.sector(), 3);
    const auto path = (std::filesystem::temp_directory_path() / "orbrot_opt_ckpt.txt").string();
    OptimizerConfig c;
    c.steps = 4;
    c.kappa_enabled = true;
    c.checkpoint_path = path;
    c.checkpoint_every = 2;
    const Trajectory t = run_optimization(*a, model, c);
    const Checkpoint cp = load_checkpoint(path);
    CHECK(cp.params == t.params);
    CHECK(cp.kappa == t.kappa);
    CHECK(cp.config.family == Family::SlaterNNJastrow);
    std::remove(path.c_str());
}
