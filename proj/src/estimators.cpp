// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "orbrot/errors.hpp"

namespace orbrot {

namespace {

Complex cached_log_psi(const Ansatz& ansatz, const ParamVector& params,
                       std::unordered_map<Configuration, Complex>& cache, Configuration c) {
    const auto it = cache.find(c);
    if (it != cache.end()) return it->second;
    const Complex v = ansatz.log_amplitude(c, params);
    cache.emplace(c, v);
    return v;
}

Complex ratio(Complex log_num, Complex log_den) {
    if (is_node(log_num)) return 0.0;
    return std::exp(log_num - log_den);
}

void fill_derivatives(const Ansatz& ansatz, const ParamVector& params, Evaluation& ev) {
    const auto rows = static_cast<Eigen::Index>(ev.configs.size());
    ev.O.resize(rows, ansatz.n_params());
    ev.log_psi.resize(rows);
    Eigen::VectorXcd o;
    for (Eigen::Index i = 0; i < rows; ++i) {
        ev.log_psi[i] = ansatz.log_derivatives(ev.configs[static_cast<std::size_t>(i)], params, o);
        ev.O.row(i) = o.transpose();
    }
}

} // namespace

Complex local_energy(const Ansatz& ansatz, const ParamVector& params, const LocalHamiltonian& ham,
                     Configuration c) {
    const Complex lp = ansatz.log_amplitude(c, params);
    if (is_node(lp)) throw NodeError("local energy requested at a node");
    Complex e = 0.0;
    ham.for_each_connected(c, [&](Configuration cp, double v) {
        e += v * (cp == c ? Complex(1.0) : ratio(ansatz.log_amplitude(cp, params), lp));
    });
    return e;
}

Evaluation evaluate_exact(const Ansatz& ansatz, const ParamVector& params,
                          const LocalHamiltonian& ham, const SectorBasis& basis) {
    if (basis.sector() != ansatz.sector()) throw std::invalid_argument("basis/ansatz sector mismatch");
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Evaluation ev;
    ev.exact = true;
    Eigen::VectorXcd logs(dim);
    double top = kNodeLogModulus;
    for (Eigen::Index i = 0; i < dim; ++i) {
        logs[i] = ansatz.log_amplitude(basis[static_cast<std::size_t>(i)], params);
        ev.cache.emplace(basis[static_cast<std::size_t>(i)], logs[i]);
        top = std::max(top, logs[i].real());
    }
    if (top == kNodeLogModulus) throw NodeError("ansatz vanishes on the whole sector");
    Eigen::VectorXcd psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        psi[i] = is_node(logs[i]) ? Complex{} : std::exp(logs[i] - top);
    const Eigen::VectorXcd hpsi = ham.sector_matrix(basis) * psi;
    const double z = psi.squaredNorm();

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (std::norm(psi[i]) > 0.0) keep.push_back(i);
    ev.configs.reserve(keep.size());
    ev.weights.resize(static_cast<Eigen::Index>(keep.size()));
    ev.e_loc.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const auto i = keep[k];
        ev.configs.push_back(basis[static_cast<std::size_t>(i)]);
        ev.weights[static_cast<Eigen::Index>(k)] = std::norm(psi[i]) / z;
        ev.e_loc[static_cast<Eigen::Index>(k)] = hpsi[i] / psi[i];
    }
    fill_derivatives(ansatz, params, ev);
    return ev;
}

Evaluation evaluate_samples(const Ansatz& ansatz, const ParamVector& params,
                            const LocalHamiltonian& ham, const SampleBatch& batch) {
    if (batch.samples.empty()) throw std::invalid_argument("empty sample batch");
    Evaluation ev;
    std::map<Configuration, int> index;
    for (auto c : batch.samples) index.emplace(c, 0);
    int k = 0;
    for (auto& [c, i] : index) {
        i = k++;
        ev.configs.push_back(c);
    }
    ev.weights = Eigen::VectorXd::Zero(k);
    ev.sequence.reserve(batch.samples.size());
    const double w = 1.0 / static_cast<double>(batch.samples.size());
    for (auto c : batch.samples) {
        const int i = index[c];
        ev.sequence.push_back(i);
        ev.weights[i] += w;
    }
    fill_derivatives(ansatz, params, ev);
    ev.e_loc.resize(k);
    for (int i = 0; i < k; ++i) {
        const Configuration c = ev.configs[static_cast<std::size_t>(i)];
        ev.cache.emplace(c, ev.log_psi[i]);
    }
    for (int i = 0; i < k; ++i) {
        const Configuration c = ev.configs[static_cast<std::size_t>(i)];
        const Complex lp = ev.log_psi[i];
        Complex e = 0.0;
        ham.for_each_connected(c, [&](Configuration cp, double v) {
            e += v * (cp == c ? Complex(1.0)
                              : ratio(cached_log_psi(ansatz, params, ev.cache, cp), lp));
        });
        ev.e_loc[i] = e;
    }
    return ev;
}

EnergyForce estimate_energy_force(const Evaluation& ev) {
    if (ev.configs.empty()) throw std::invalid_argument("empty evaluation");
    EnergyForce r;
    const Eigen::VectorXcd w = ev.weights.cast<Complex>();
    const Complex e_mean = w.dot(ev.e_loc);  // weights are real, so dot == sum w e
    r.energy = e_mean.real();
    r.variance = ev.weights.dot((ev.e_loc.array() - e_mean).abs2().matrix());
    const Eigen::VectorXcd de = ev.e_loc.array() - e_mean;
    // F_k = 2 Re sum_n w_n conj(O_nk) (E_n - <E>)
    r.force = 2.0 * (ev.O.adjoint() * (ev.weights.cast<Complex>().cwiseProduct(de))).real();
    if (!ev.exact && !ev.sequence.empty()) {
        std::vector<double> series;
        series.reserve(ev.sequence.size());
        for (int i : ev.sequence) series.push_back(ev.e_loc[i].real());
        r.error = batch_means_error(series);
    }
    return r;
}

RdmSet estimate_rdms(const Ansatz& ansatz, const ParamVector& params, Evaluation& ev) {
    if (ev.configs.empty()) throw std::invalid_argument("empty evaluation");
    const int n = ansatz.sector().n_orb;
    const int modes = 2 * n;
    std::array<Eigen::MatrixXcd, 2> one{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n)};
    std::array<std::vector<Complex>, 4> two;
    const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
    for (auto& t : two) t.assign(n4, Complex{});
    auto idx = [n](int p, int q, int r, int s) {
        return ((static_cast<std::size_t>(p) * n + q) * n + r) * n + s;
    };

    std::vector<int> occ[2];
    for (std::size_t k = 0; k < ev.configs.size(); ++k) {
        const Configuration c = ev.configs[k];
        const double w = ev.weights[static_cast<Eigen::Index>(k)];
        const Complex lp = ev.log_psi[static_cast<Eigen::Index>(k)];
        for (int s = 0; s < 2; ++s)
            detail::bit_list(c.bits & spin_mask(static_cast<Spin>(s), n), s * n, occ[s]);
        auto amp = [&](Configuration cp) {
            return cp == c ? Complex(1.0) : ratio(cached_log_psi(ansatz, params, ev.cache, cp), lp);
        };
        for (int s = 0; s < 2; ++s) {
            const auto sp = static_cast<Spin>(s);
            // <c+_a c_b>: apply c+_b c_a to n
            for (int a : occ[s])
                for (int b = 0; b < n; ++b) {
                    const auto e = excite_one(c, mode_index(b, sp, n), mode_index(a, sp, n), modes);
                    if (!e) continue;
                    one[s](a, b) += w * static_cast<double>(e->phase) * amp(e->config);
                }
            for (int t = 0; t < 2; ++t) {
                const auto tp = static_cast<Spin>(t);
                auto& g = two[static_cast<std::size_t>(2 * s + t)];
                // <c+_p c+_q c_u c_r>: apply c+_r c+_u c_q c_p to n
                for (int p : occ[s])
                    for (int q : occ[t]) {
                        if (s == t && p == q) continue;
                        for (int r = 0; r < n; ++r)
                            for (int u = 0; u < n; ++u) {
                                const auto e = excite_two(c, mode_index(r, sp, n),
                                                          mode_index(u, tp, n),
                                                          mode_index(q, tp, n),
                                                          mode_index(p, sp, n), modes);
                                if (!e) continue;
                                g[idx(p, q, r, u)] +=
                                    w * static_cast<double>(e->phase) * amp(e->config);
                            }
                    }
            }
        }
    }
    RdmSet out(n);
    for (int s = 0; s < 2; ++s) out.one[s] = one[s].real();
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < n4; ++i) out.two[k][i] = two[k][i].real();
    return out;
}

Eigen::MatrixXd metric_factor(const Evaluation& ev) {
    const Eigen::RowVectorXcd mean = ev.weights.cast<Complex>().transpose() * ev.O;
    const Eigen::Index rows = ev.O.rows();
    Eigen::MatrixXd x(2 * rows, ev.O.cols());
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double sw = std::sqrt(2.0 * ev.weights[i]);
        const Eigen::RowVectorXcd c = sw * (ev.O.row(i) - mean);
        x.row(i) = c.real();
        x.row(rows + i) = c.imag();
    }
    return x;
}

MetricTensor estimate_metric(const Evaluation& ev, double shift) {
    if (ev.configs.empty()) throw std::invalid_argument("empty evaluation");
    const Eigen::MatrixXd x = metric_factor(ev);
    MetricTensor m;
    m.S = x.transpose() * x;
    m.shift = shift;
    return m;
}

} // namespace orbrot
