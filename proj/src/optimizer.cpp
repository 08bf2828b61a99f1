// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/optimizer.hpp"

#include <Eigen/Cholesky>

#include <chrono>
#include <cmath>
#include <numeric>

#include "orbrot/errors.hpp"
#include "orbrot/estimators.hpp"
#include "orbrot/local_hamiltonian.hpp"
#include "orbrot/rng.hpp"
#include "orbrot/sampler.hpp"

namespace orbrot {

void OptimizerConfig::validate() const {
    if (!(eta > 0.0)) throw ConfigError("optimizer eta must be positive");
    if (!(shift >= 0.0)) throw ConfigError("optimizer shift must be non-negative");
    if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("optimizer decay must lie in (0, 1]");
    if (steps < 0) throw ConfigError("optimizer steps must be non-negative");
    if (!exact && (sweeps < 1 || chains < 1)) throw ConfigError("sampling needs sweeps and chains");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    if (window < 2) throw ConfigError("convergence window must be at least 2");
    if (!(tolerance >= 0.0)) throw ConfigError("convergence tolerance must be non-negative");
    if (checkpoint_every < 0) throw ConfigError("checkpoint_every must be non-negative");
}

HamiltonianModel::HamiltonianModel(IntegralSet reference, Sector sector,
                                   std::optional<ActiveSpaceSpec> active)
    : reference_(std::move(reference)), sector_(sector), variational_(sector),
      active_(std::move(active)) {
    reference_.validate();
    if (sector_.n_orb != reference_.n_orb)
        throw ConfigError("sector orbital count does not match the integrals");
    sector_.validate();
    if (active_) {
        try {
            variational_ = validate_spec(*active_, sector_);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
}

IntegralSet HamiltonianModel::working_integrals(const OrbitalRotation& rotation) const {
    const IntegralSet rotated = rotate_integrals(reference_, rotation.phi());
    return active_ ? effective_active_integrals(rotated, *active_) : rotated;
}

IntegralSet HamiltonianModel::working_integrals() const {
    return active_ ? effective_active_integrals(reference_, *active_) : reference_;
}

RdmSet HamiltonianModel::full_rdms(const RdmSet& variational) const {
    return active_ ? embed_rdms(variational, *active_) : variational;
}

const SectorBasis& HamiltonianModel::basis() const {
    if (!basis_) basis_ = std::make_shared<SectorBasis>(variational_);
    return *basis_;
}

namespace {

template <class Solve>
Eigen::VectorXd escalate(double shift, Solve&& solve) {
    for (int attempt = 0; attempt <= 3; ++attempt) {
        if (auto d = solve(shift)) return *d;
        shift = shift > 0.0 ? 10.0 * shift : 1e-8;
    }
    throw ConvergenceError("SR solve failed after shift escalation");
}

} // namespace

Eigen::VectorXd sr_solve(const Eigen::MatrixXd& S, const Eigen::VectorXd& F, double eta,
                         double shift) {
    if (S.rows() != S.cols() || S.rows() != F.size())
        throw std::invalid_argument("sr_solve dimension mismatch");
    return escalate(shift, [&](double s) -> std::optional<Eigen::VectorXd> {
        Eigen::MatrixXd A = S;
        A.diagonal().array() += s;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) return std::nullopt;
        Eigen::VectorXd d = llt.solve(-eta * F);
        if (!d.allFinite()) return std::nullopt;
        return d;
    });
}

Eigen::VectorXd sr_solve_factored(const Eigen::MatrixXd& X, const Eigen::VectorXd& F,
                                  double eta, double shift) {
    if (X.cols() != F.size()) throw std::invalid_argument("sr_solve_factored dimension mismatch");
    // (X^T X + s)^-1 F = (F - X^T (X X^T + s)^-1 X F) / s
    const Eigen::MatrixXd K = X * X.transpose();
    const Eigen::VectorXd XF = X * F;
    return escalate(shift, [&](double s) -> std::optional<Eigen::VectorXd> {
        if (!(s > 0.0)) return std::nullopt;
        Eigen::MatrixXd A = K;
        A.diagonal().array() += s;
        Eigen::LLT<Eigen::MatrixXd> llt(A);
        if (llt.info() != Eigen::Success) return std::nullopt;
        Eigen::VectorXd d = -(eta / s) * (F - X.transpose() * llt.solve(XF));
        if (!d.allFinite()) return std::nullopt;
        return d;
    });
}

namespace {

struct StepEstimate {
    StepRecord record;
    EnergyForce ef;
    Evaluation eval;
    Eigen::VectorXd force_kappa;
};

StepEstimate estimate(const Ansatz& ansatz, const OptimizationState& state,
                      const HamiltonianModel& model, const OptimizerConfig& config, int step,
                      bool need_kappa) {
    StepEstimate out;
    OrbitalRotation rotation;
    IntegralSet ints;
    if (config.kappa_enabled) {
        rotation = OrbitalRotation(model.n_orb(), state.kappa);
        ints = model.working_integrals(rotation);
    } else {
        ints = model.working_integrals();
    }
    const LocalHamiltonian ham(std::move(ints));

    if (config.exact) {
        out.eval = evaluate_exact(ansatz, state.theta, ham, model.basis());
    } else {
        ChainOptions opts;
        opts.n_sweeps = config.sweeps;
        opts.burn_in = config.burn_in;
        opts.double_hop_fraction = config.double_hop_fraction;
        opts.seed = splitmix64(config.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(step + 1)));
        const SampleBatch batch = run_chains(ansatz, state.theta, opts, config.chains, config.threads);
        out.eval = evaluate_samples(ansatz, state.theta, ham, batch);
        out.record.acceptance =
            std::accumulate(batch.acceptance.begin(), batch.acceptance.end(), 0.0) /
            static_cast<double>(batch.acceptance.size());
    }
    out.ef = estimate_energy_force(out.eval);
    out.record.step = step;
    out.record.energy = out.ef.energy;
    out.record.variance = out.ef.variance;
    out.record.error = out.ef.error;
    out.record.force_theta = out.ef.force.norm();

    if (config.kappa_enabled && need_kappa) {
        const RdmSet rdms = model.full_rdms(estimate_rdms(ansatz, state.theta, out.eval));
        out.force_kappa = kappa_force(model.reference(), rotation, rdms);
        out.record.force_kappa = out.force_kappa.norm();
    }
    return out;
}

Eigen::VectorXd theta_update(const StepEstimate& est, const OptimizerConfig& config, double eta) {
    const Eigen::VectorXd& F = est.ef.force;
    if (config.plain_gradient) return -eta * F;
    const Eigen::MatrixXd X = metric_factor(est.eval);
    if (F.size() > X.rows() && config.shift > 0.0) return sr_solve_factored(X, F, eta, config.shift);
    return sr_solve(X.transpose() * X, F, eta, config.shift);
}

} // namespace

StepResult vmc_step(const Ansatz& ansatz, const OptimizationState& state,
                    const HamiltonianModel& model, const OptimizerConfig& config, int step) {
    if (state.theta.size() != ansatz.n_params())
        throw std::invalid_argument("theta length does not match the ansatz");
    if (config.kappa_enabled && state.kappa.size() != kappa_param_count(model.n_orb()))
        throw std::invalid_argument("kappa length does not match the orbital count");
    if (ansatz.sector() != model.variational_sector())
        throw ConfigError("ansatz sector does not match the variational sector");

    const StepEstimate est = estimate(ansatz, state, model, config, step, true);
    const double scale = std::pow(config.decay, step);
    StepResult out{state, est.record};
    // both blocks are computed from the same state before either moves
    if (config.theta_enabled) out.next.theta += theta_update(est, config, config.eta * scale);
    if (config.kappa_enabled) out.next.kappa -= (config.kappa_step() * scale) * est.force_kappa;
    return out;
}

bool energy_window_converged(const std::vector<StepRecord>& records, int window, double tolerance,
                             bool exact) {
    const auto n = static_cast<int>(records.size());
    if (n <= window) return false;
    if (exact) {
        const double now = records.back().energy;
        const double then = records[static_cast<std::size_t>(n - 1 - window)].energy;
        return std::abs(now - then) <= tolerance * std::abs(now);
    }
    // plateau: the two halves of the window differ by less than their error bars
    const int half = window / 2;
    auto stats = [&](int begin) {
        double e = 0.0, err = 0.0;
        for (int i = begin; i < begin + half; ++i) {
            e += records[static_cast<std::size_t>(i)].energy;
            err += records[static_cast<std::size_t>(i)].error;
        }
        return std::pair{e / half, err / (half * std::sqrt(static_cast<double>(half)))};
    };
    const auto [e1, s1] = stats(n - 2 * half);
    const auto [e2, s2] = stats(n - half);
    return std::abs(e2 - e1) <= 2.0 * std::hypot(s1, s2) + tolerance * std::abs(e2);
}

Trajectory run_optimization(const Ansatz& ansatz, const OptimizationState& initial,
                            const HamiltonianModel& model, const OptimizerConfig& config,
                            const StepCallback& on_step) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    auto checkpoint = [&](const OptimizationState& s) {
        if (config.checkpoint_path.empty()) return;
        save_checkpoint(config.checkpoint_path, Checkpoint{ansatz.config(), s.theta, s.kappa});
    };

    OptimizationState state = initial;
    if (state.kappa.size() == 0) state.kappa = Eigen::VectorXd::Zero(kappa_param_count(model.n_orb()));

    Trajectory traj;
    int step = 0;
    for (; step < config.steps; ++step) {
        StepResult r = vmc_step(ansatz, state, model, config, step);
        r.record.wall_time = elapsed();
        traj.records.push_back(r.record);
        if (on_step) on_step(r.record);
        state = std::move(r.next);
        if (config.checkpoint_every > 0 && (step + 1) % config.checkpoint_every == 0) checkpoint(state);
        if (energy_window_converged(traj.records, config.window, config.tolerance, config.exact)) {
            traj.converged = true;
            ++step;
            break;
        }
    }
    StepRecord last = estimate(ansatz, state, model, config, step, true).record;
    last.wall_time = elapsed();
    traj.records.push_back(last);
    if (on_step) on_step(last);
    traj.params = state.theta;
    traj.kappa = state.kappa;
    checkpoint(state);
    return traj;
}

Trajectory run_optimization(const Ansatz& ansatz, const HamiltonianModel& model,
                            const OptimizerConfig& config, const StepCallback& on_step) {
    return run_optimization(ansatz, OptimizationState{ansatz.init_params(), {}}, model, config,
                            on_step);
}

} // namespace orbrot
