// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/vqe.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "orbrot/rng.hpp"
#include "orbrot/rotation.hpp"

namespace orbrot {

void CascadeParams::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw std::invalid_argument("cascade qubit count out of range");
    if (layers < 0) throw std::invalid_argument("negative cascade layer count");
    if (angles.size() != angle_count(n_qubits, layers))
        throw std::invalid_argument("cascade angle count does not match qubits and layers");
}

CascadeParams zero_cascade(int n_qubits, int layers) {
    CascadeParams p{n_qubits, layers, Eigen::VectorXd::Zero(CascadeParams::angle_count(n_qubits, layers))};
    p.validate();
    return p;
}

CascadeParams random_cascade(int n_qubits, int layers, std::uint64_t seed) {
    CascadeParams p = zero_cascade(n_qubits, layers);
    Rng rng(seed, 0x5EEDCA5CADEULL);
    for (Eigen::Index k = 0; k < p.angles.size(); ++k) p.angles[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return p;
}

namespace {

// Real 2x2 gate [[a, b], [c, d]] on one qubit.
void apply_2x2(Statevector& psi, int q, double a, double b, double c, double d) {
    const Eigen::Index bit = Eigen::Index{1} << q;
    const Eigen::Index n = psi.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (i & bit) continue;
        const double x0 = psi[i], x1 = psi[i | bit];
        psi[i] = a * x0 + b * x1;
        psi[i | bit] = c * x0 + d * x1;
    }
}

void check_state(const Statevector& psi, int n_qubits) {
    if (psi.size() != (Eigen::Index{1} << n_qubits))
        throw std::invalid_argument("statevector length does not match the qubit count");
}

struct Gate {
    int qubit;   ///< target of R_y, control of CNOT
    int angle;   ///< angle index, or -1 for CNOT(qubit, qubit + 1)
};

std::vector<Gate> gate_list(int n_qubits, int layers) {
    std::vector<Gate> gates;
    for (int l = 0; l < layers; ++l) {
        for (int q = 0; q < n_qubits; ++q) gates.push_back({q, l * n_qubits + q});
        for (int q = 0; q + 1 < n_qubits; ++q) gates.push_back({q, -1});
    }
    return gates;
}

void apply_gates(Statevector& psi, const std::vector<Gate>& gates, std::size_t begin,
                 const Eigen::VectorXd& angles) {
    for (std::size_t g = begin; g < gates.size(); ++g) {
        if (gates[g].angle < 0)
            apply_cnot(psi, gates[g].qubit, gates[g].qubit + 1);
        else
            apply_ry(psi, gates[g].qubit, angles[gates[g].angle]);
    }
}


} // namespace

void apply_ry(Statevector& psi, int qubit, double theta) {
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    apply_2x2(psi, qubit, c, -s, s, c);
}

void apply_cnot(Statevector& psi, int control, int target) {
    const Eigen::Index cb = Eigen::Index{1} << control, tb = Eigen::Index{1} << target;
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(psi[i], psi[i | tb]);
}

Statevector apply_cascade(const CascadeParams& params) {
    params.validate();
    Statevector psi = Statevector::Zero(Eigen::Index{1} << params.n_qubits);
    psi[0] = 1.0;
    apply_gates(psi, gate_list(params.n_qubits, params.layers), 0, params.angles);
    return psi;
}

CircuitDerivatives cascade_derivatives(const CascadeParams& params) {
    params.validate();
    const auto gates = gate_list(params.n_qubits, params.layers);
    CircuitDerivatives out;
    out.psi = Statevector::Zero(Eigen::Index{1} << params.n_qubits);
    out.psi[0] = 1.0;
    out.d.resize(static_cast<std::size_t>(params.angles.size()));
    std::vector<std::size_t> position(out.d.size());
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (gates[g].angle >= 0) {
            out.d[static_cast<std::size_t>(gates[g].angle)] = out.psi;
            position[static_cast<std::size_t>(gates[g].angle)] = g;
            apply_ry(out.psi, gates[g].qubit, params.angles[gates[g].angle]);
        } else {
            apply_cnot(out.psi, gates[g].qubit, gates[g].qubit + 1);
        }
    }
    for (std::size_t k = 0; k < out.d.size(); ++k) {
        const std::size_t g = position[k];
        const double th = params.angles[static_cast<Eigen::Index>(k)];
        const double c = 0.5 * std::cos(0.5 * th), s = 0.5 * std::sin(0.5 * th);
        apply_2x2(out.d[k], gates[g].qubit, -s, -c, c, -s);
        apply_gates(out.d[k], gates, g + 1, params.angles);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Jordan-Wigner in the X^x Z^z basis, where X^x1 Z^z1 X^x2 Z^z2 =
// (-1)^{|z1 & x2|} X^(x1^x2) Z^(z1^z2).

namespace {

using Cplx = std::complex<double>;

struct XZ {
    Cplx c;
    Bits x, z;
};
using XZSum = std::vector<XZ>;

XZSum ladder(int mode, bool dagger) {
    const Bits e = Bits{1} << mode;
    const Bits below = e - 1;
    return {{0.5, e, below}, {dagger ? 0.5 : -0.5, e, below | e}};
}

XZSum multiply(const XZSum& a, const XZSum& b) {
    XZSum out;
    out.reserve(a.size() * b.size());
    for (const auto& p : a)
        for (const auto& q : b) {
            const double sign = (std::popcount(p.z & q.x) & 1) ? -1.0 : 1.0;
            out.push_back({sign * p.c * q.c, p.x ^ q.x, p.z ^ q.z});
        }
    return out;
}

Cplx i_pow(int k) {
    switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace

std::string pauli_label(const PauliTerm& t) {
    std::ostringstream os;
    bool first = true;
    for (int q = 0; q < 64; ++q) {
        const bool x = (t.x >> q) & 1U, z = (t.z >> q) & 1U;
        if (!x && !z) continue;
        if (!first) os << ' ';
        os << (x && z ? 'Y' : x ? 'X' : 'Z') << q;
        first = false;
    }
    return first ? "I" : os.str();
}

PauliHamiltonian jw_hamiltonian(const IntegralSet& ints, double threshold) {
    ints.validate();
    const int n = ints.n_orb;
    const int modes = 2 * n;
    if (modes > kMaxQubits) throw std::invalid_argument("too many qubits for the statevector");
    std::unordered_map<std::uint64_t, Cplx> acc;
    auto add = [&](const XZSum& s, double w) {
        for (const auto& t : s) acc[t.x | (t.z << 32)] += w * t.c;
    };
    acc[0] += ints.core;

    std::vector<XZSum> up(static_cast<std::size_t>(modes)), dn(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) {
        up[static_cast<std::size_t>(m)] = ladder(m, true);
        dn[static_cast<std::size_t>(m)] = ladder(m, false);
    }
    for (int s = 0; s < 2; ++s)
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                if (ints.h(p, q) != 0.0)
                    add(multiply(up[static_cast<std::size_t>(s * n + p)], dn[static_cast<std::size_t>(s * n + q)]),
                        ints.h(p, q));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    const int P = a * n + p, Q = b * n + q;
                    if (P == Q) continue;
                    const XZSum create = multiply(up[static_cast<std::size_t>(P)], up[static_cast<std::size_t>(Q)]);
                    for (int r = 0; r < n; ++r)
                        for (int t = 0; t < n; ++t) {
                            const int R = a * n + r, T = b * n + t;
                            const double g = ints.two(p, q, r, t);
                            if (R == T || g == 0.0) continue;
                            add(multiply(create, multiply(dn[static_cast<std::size_t>(T)],
                                                          dn[static_cast<std::size_t>(R)])),
                                0.5 * g);
                        }
                }

    PauliHamiltonian H;
    H.n_qubits = modes;
    for (const auto& [key, c] : acc) {
        const Bits x = key & 0xFFFFFFFFULL, z = key >> 32;
        const Cplx herm = c * i_pow(-std::popcount(x & z));
        if (std::abs(herm.imag()) > 1e-10)
            throw std::logic_error("non-Hermitian Pauli coefficient");
        if (std::abs(herm.real()) < threshold) continue;
        H.terms.push_back({herm.real(), x, z});
    }
    std::sort(H.terms.begin(), H.terms.end(), [](const PauliTerm& l, const PauliTerm& r) {
        return l.x != r.x ? l.x < r.x : l.z < r.z;
    });
    return H;
}

Eigen::MatrixXcd PauliHamiltonian::dense() const {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& t : terms) {
        const Cplx phase = t.coeff * i_pow(std::popcount(t.x & t.z));
        for (Eigen::Index b = 0; b < dim; ++b) {
            const double sign = (std::popcount(static_cast<Bits>(b) & t.z) & 1) ? -1.0 : 1.0;
            m(b ^ static_cast<Eigen::Index>(t.x), b) += sign * phase;
        }
    }
    return m;
}

double expectation(const Statevector& psi, const PauliHamiltonian& ham) {
    check_state(psi, ham.n_qubits);
    if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) throw std::invalid_argument("statevector is not normalized");
    Cplx e = 0.0;
    for (const auto& t : ham.terms) {
        double s = 0.0;
        for (Eigen::Index b = 0; b < psi.size(); ++b) {
            const double sign = (std::popcount(static_cast<Bits>(b) & t.z) & 1) ? -1.0 : 1.0;
            s += sign * psi[b ^ static_cast<Eigen::Index>(t.x)] * psi[b];
        }
        e += t.coeff * i_pow(std::popcount(t.x & t.z)) * s;
    }
    if (std::abs(e.imag()) > 1e-10) throw std::logic_error("complex expectation value");
    return e.real();
}

Statevector apply_hamiltonian(const LocalHamiltonian& ham, const Statevector& psi) {
    check_state(psi, 2 * ham.n_orb());
    Statevector out = Statevector::Zero(psi.size());
    for (Eigen::Index b = 0; b < psi.size(); ++b) {
        const double v = psi[b];
        if (v == 0.0) continue;
        ham.for_each_connected(Configuration{static_cast<Bits>(b)}, [&](Configuration c, double h) {
            out[static_cast<Eigen::Index>(c.bits)] += h * v;
        });
    }
    return out;
}

RdmSet statevector_rdms(const Statevector& psi, int n) {
    check_state(psi, 2 * n);
    const int modes = 2 * n;
    RdmSet rdm(n);
    const Bits all = (Bits{1} << modes) - 1;
    for (Eigen::Index bi = 0; bi < psi.size(); ++bi) {
        const double v = psi[bi];
        if (v == 0.0) continue;
        const Configuration c{static_cast<Bits>(bi)};
        for (int R = 0; R < modes; ++R) {
            if (!((c.bits >> R) & 1U)) continue;
            const int sa = R / n, r = R % n;
            // one-body: c+_P c_R within the species of R
            for (int p = 0; p < n; ++p) {
                const int P = sa * n + p;
                const auto e = excite_one(c, P, R, modes);
                if (!e) continue;
                rdm.one[static_cast<std::size_t>(sa)](p, r) += psi[static_cast<Eigen::Index>(e->config.bits)] * e->phase * v;
            }
            for (int T = 0; T < modes; ++T) {
                if (T == R || !((c.bits >> T) & 1U)) continue;
                const int sb = T / n, t = T % n;
                auto& blk = rdm.two[static_cast<std::size_t>(2 * sa + sb)];
                const Bits avail = (~c.bits & all) | (Bits{1} << R) | (Bits{1} << T);
                for (int p = 0; p < n; ++p) {
                    const int P = sa * n + p;
                    if (!((avail >> P) & 1U)) continue;
                    for (int q = 0; q < n; ++q) {
                        const int Q = sb * n + q;
                        if (Q == P || !((avail >> Q) & 1U)) continue;
                        const auto e = excite_two(c, P, Q, T, R, modes);
                        if (!e) continue;
                        blk[rdm.index(p, q, r, t)] +=
                            psi[static_cast<Eigen::Index>(e->config.bits)] * e->phase * v;
                    }
                }
            }
        }
    }
    return rdm;
}

Eigen::VectorXd statevector_kappa_force(const OrbitalRotation& rotation, const Statevector& psi,
                                        const Statevector& hpsi) {
    const int n = rotation.n_orb();
    const int modes = 2 * n;
    check_state(psi, modes);
    check_state(hpsi, modes);
    // W_pq = <H psi| E_pq |psi>
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index bi = 0; bi < psi.size(); ++bi) {
        const double v = psi[bi];
        if (v == 0.0) continue;
        const Configuration c{static_cast<Bits>(bi)};
        for (int Q = 0; Q < modes; ++Q) {
            if (!((c.bits >> Q) & 1U)) continue;
            const int s = Q / n;
            for (int p = 0; p < n; ++p) {
                const auto e = excite_one(c, s * n + p, Q, modes);
                if (e) W(p, Q % n) += hpsi[static_cast<Eigen::Index>(e->config.bits)] * e->phase * v;
            }
        }
    }
    const Eigen::MatrixXd G = W - W.transpose();
    Eigen::VectorXd f(kappa_param_count(n));
    for (Eigen::Index k = 0; k < f.size(); ++k) {
        const Eigen::MatrixXd A =
            rotation.phi().transpose() * expm_directional_derivative(rotation.params(), n, static_cast<int>(k));
        f[k] = A.cwiseProduct(G).sum();
    }
    return f;
}

double sector_weight(const Statevector& psi, const Sector& sector) {
    check_state(psi, sector.n_modes());
    double w = 0.0;
    for (Eigen::Index b = 0; b < psi.size(); ++b)
        if (sector.contains(Configuration{static_cast<Bits>(b)})) w += psi[b] * psi[b];
    return w;
}

namespace {

template <class Energy>
Eigen::VectorXd shift_rule(const CascadeParams& params, Energy&& energy) {
    params.validate();
    Eigen::VectorXd grad(params.angles.size());
    CascadeParams shifted = params;
    for (Eigen::Index k = 0; k < grad.size(); ++k) {
        shifted.angles[k] = params.angles[k] + 0.5 * std::numbers::pi;
        const double plus = energy(apply_cascade(shifted));
        shifted.angles[k] = params.angles[k] - 0.5 * std::numbers::pi;
        const double minus = energy(apply_cascade(shifted));
        shifted.angles[k] = params.angles[k];
        grad[k] = 0.5 * (plus - minus);
    }
    return grad;
}

} // namespace

Eigen::VectorXd circuit_gradient(const CascadeParams& params, const PauliHamiltonian& ham) {
    return shift_rule(params, [&](const Statevector& psi) { return expectation(psi, ham); });
}

Eigen::VectorXd circuit_gradient(const CascadeParams& params, const LocalHamiltonian& ham) {
    return shift_rule(params, [&](const Statevector& psi) { return psi.dot(apply_hamiltonian(ham, psi)); });
}

namespace {

Eigen::MatrixXd metric_from(const CircuitDerivatives& cd) {
    const auto k = static_cast<Eigen::Index>(cd.d.size());
    Eigen::MatrixXd D(cd.psi.size(), k);
    for (Eigen::Index i = 0; i < k; ++i) D.col(i) = cd.d[static_cast<std::size_t>(i)];
    const Eigen::VectorXd overlap = D.transpose() * cd.psi;
    return D.transpose() * D - overlap * overlap.transpose();
}

} // namespace

MetricTensor qng_metric(const CascadeParams& params) {
    return MetricTensor{metric_from(cascade_derivatives(params)), 0.0};
}

// ---------------------------------------------------------------------------

namespace {

struct VqeEstimate {
    StepRecord record;
    Eigen::VectorXd grad;
    Eigen::MatrixXd metric;
    Eigen::VectorXd force_kappa;
    Statevector psi;
};

VqeEstimate vqe_estimate(const IntegralSet& reference, const CascadeParams& params,
                         const Eigen::VectorXd& kappa, const OptimizerConfig& config, int step) {
    VqeEstimate out;
    OrbitalRotation rotation;
    IntegralSet ints;
    if (config.kappa_enabled) {
        rotation = OrbitalRotation(reference.n_orb, kappa);
        ints = rotate_integrals(reference, rotation.phi());
    } else {
        ints = reference;
    }
    const LocalHamiltonian ham(std::move(ints));
    CircuitDerivatives cd = cascade_derivatives(params);
    const Statevector hpsi = apply_hamiltonian(ham, cd.psi);
    const double e = cd.psi.dot(hpsi);
    out.grad.resize(params.angles.size());
    for (std::size_t k = 0; k < cd.d.size(); ++k) out.grad[static_cast<Eigen::Index>(k)] = 2.0 * cd.d[k].dot(hpsi);
    out.metric = metric_from(cd);
    out.record.step = step;
    out.record.energy = e;
    out.record.variance = std::max(0.0, hpsi.squaredNorm() - e * e);
    out.record.force_theta = out.grad.norm();
    if (config.kappa_enabled) {
        out.force_kappa = statevector_kappa_force(rotation, cd.psi, hpsi);
        out.record.force_kappa = out.force_kappa.norm();
    }
    out.psi = std::move(cd.psi);
    return out;
}

constexpr int kMaxStepHalvings = 30;
constexpr double kMaxStepRatio = 1e3;

double vqe_energy(const IntegralSet& reference, const CascadeParams& params,
                  const Eigen::VectorXd& kappa, const OptimizerConfig& config) {
    const LocalHamiltonian ham(config.kappa_enabled
                                   ? rotate_integrals(reference, OrbitalRotation(reference.n_orb, kappa).phi())
                                   : reference);
    const Statevector psi = apply_cascade(params);
    return psi.dot(apply_hamiltonian(ham, psi));
}

} // namespace

VqeResult vqe_run(const IntegralSet& reference, const Sector& target, const CascadeParams& init,
                  const OptimizerConfig& config, const Eigen::VectorXd& kappa0) {
    config.validate();
    init.validate();
    if (init.n_qubits != 2 * reference.n_orb)
        throw std::invalid_argument("cascade must have two qubits per orbital");
    if (target.n_orb != reference.n_orb) throw std::invalid_argument("target sector size mismatch");

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    CascadeParams params = init;
    Eigen::VectorXd kappa = kappa0.size() ? kappa0 : Eigen::VectorXd::Zero(kappa_param_count(reference.n_orb));
    if (kappa.size() != kappa_param_count(reference.n_orb))
        throw std::invalid_argument("kappa length does not match the orbital count");

    VqeResult res;
    Trajectory& traj = res.trajectory;
    double ratio = 1.0;  // adaptive multiplier on both step sizes
    int step = 0;
    for (; step < config.steps; ++step) {
        VqeEstimate est = vqe_estimate(reference, params, kappa, config, step);
        est.record.wall_time = elapsed();
        traj.records.push_back(est.record);
        const double scale = std::pow(config.decay, step);
        Eigen::VectorXd d_theta = Eigen::VectorXd::Zero(params.angles.size());
        if (config.theta_enabled)
            d_theta = config.plain_gradient ? Eigen::VectorXd(-config.eta * scale * est.grad)
                                            : sr_solve(est.metric, est.grad, config.eta * scale, config.shift);
        Eigen::VectorXd d_kappa = Eigen::VectorXd::Zero(kappa.size());
        if (config.kappa_enabled) d_kappa = -(config.kappa_step() * scale) * est.force_kappa;

        if (!config.adaptive_step) {
            params.angles += d_theta;
            kappa += d_kappa;
        } else {
            bool accepted = false;
            for (int attempt = 0; attempt < kMaxStepHalvings && !accepted; ++attempt) {
                CascadeParams trial = params;
                trial.angles += ratio * d_theta;
                const Eigen::VectorXd trial_kappa = kappa + ratio * d_kappa;
                if (vqe_energy(reference, trial, trial_kappa, config) <= est.record.energy) {
                    params = std::move(trial);
                    kappa = trial_kappa;
                    ratio = std::min(ratio * 1.2, kMaxStepRatio);
                    accepted = true;
                } else {
                    ratio *= 0.5;
                }
            }
            if (!accepted) {
                // no descent at any step length: stationary to working precision
                traj.converged = true;
                ++step;
                break;
            }
        }
        if (energy_window_converged(traj.records, config.window, config.tolerance, true)) {
            traj.converged = true;
            ++step;
            break;
        }
    }
    VqeEstimate last = vqe_estimate(reference, params, kappa, config, step);
    last.record.wall_time = elapsed();
    traj.records.push_back(last.record);
    traj.params = params.angles;
    traj.kappa = kappa;
    res.params = params;
    res.sector_weight = sector_weight(last.psi, target);
    res.iterations = step;
    return res;
}

std::vector<RestartRow> restart_study(const IntegralSet& reference, const Sector& target,
                                      double exact_energy, int layers, int n_inits,
                                      std::uint64_t seed, const OptimizerConfig& config,
                                      int threads) {
    if (n_inits < 2) throw std::invalid_argument("restart study needs at least two inits");
    std::vector<RestartRow> rows(static_cast<std::size_t>(n_inits));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n_inits; i = next++) {
            RestartRow& row = rows[static_cast<std::size_t>(i)];
            row.init_id = i;
            row.seed = splitmix64(seed + static_cast<std::uint64_t>(i));
            const CascadeParams init = random_cascade(2 * reference.n_orb, layers, row.seed);
            OptimizerConfig c = config;
            c.kappa_enabled = true;
            const VqeResult rot = vqe_run(reference, target, init, c);
            c.kappa_enabled = false;
            const VqeResult fix = vqe_run(reference, target, init, c);
            row.error_rotated = rot.trajectory.final_energy() - exact_energy;
            row.error_fixed = fix.trajectory.final_energy() - exact_energy;
            row.iterations_rotated = rot.iterations;
            row.iterations_fixed = fix.iterations;
            row.weight_rotated = rot.sector_weight;
            row.weight_fixed = fix.sector_weight;
        }
    };
    const int n_threads = std::max(1, std::min(threads, n_inits));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return rows;
}

std::vector<CumulativePoint> cumulative_fraction(const std::vector<RestartRow>& rows,
                                                 const std::vector<double>& thresholds) {
    std::vector<CumulativePoint> out;
    const double n = static_cast<double>(rows.size());
    for (double th : thresholds) {
        CumulativePoint p{th, 0.0, 0.0};
        for (const auto& r : rows) {
            p.fraction_rotated += (r.error_rotated <= th) ? 1.0 : 0.0;
            p.fraction_fixed += (r.error_fixed <= th) ? 1.0 : 0.0;
        }
        if (n > 0) {
            p.fraction_rotated /= n;
            p.fraction_fixed /= n;
        }
        out.push_back(p);
    }
    return out;
}

void write_restart_csv(std::ostream& out, const std::vector<RestartRow>& rows) {
    out << "init_id,seed,error_rotated,error_fixed,iterations_rotated,iterations_fixed,"
           "weight_rotated,weight_fixed\n";
    out << std::setprecision(17);
    for (const auto& r : rows)
        out << r.init_id << ',' << r.seed << ',' << r.error_rotated << ',' << r.error_fixed << ','
            << r.iterations_rotated << ',' << r.iterations_fixed << ',' << r.weight_rotated << ','
            << r.weight_fixed << '\n';
}

void write_cumulative_csv(std::ostream& out, const std::vector<CumulativePoint>& points) {
    out << "threshold,fraction_rotated,fraction_fixed\n" << std::setprecision(17);
    for (const auto& p : points)
        out << p.threshold << ',' << p.fraction_rotated << ',' << p.fraction_fixed << '\n';
}

} // namespace orbrot
