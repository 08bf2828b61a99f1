// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "orbrot/errors.hpp"

namespace orbrot {

namespace {

int nth_set_bit(Bits b, std::uint64_t k) {
    for (std::uint64_t i = 0; i < k; ++i) b &= b - 1;
    return std::countr_zero(b);
}

Configuration single_hop(Configuration c, const Sector& s, Rng& rng) {
    const int n_elec = s.n_elec();
    if (n_elec == 0) return c;
    const Spin sp = rng.below(static_cast<std::uint64_t>(n_elec)) <
                            static_cast<std::uint64_t>(s.n_up)
                        ? Spin::Up
                        : Spin::Down;
    const Bits mask = spin_mask(sp, s.n_orb);
    const Bits occ = c.bits & mask;
    const Bits vir = ~c.bits & mask;
    const int n_occ = std::popcount(occ);
    const int n_vir = std::popcount(vir);
    if (n_occ == 0 || n_vir == 0) return c;
    const int i = nth_set_bit(occ, rng.below(static_cast<std::uint64_t>(n_occ)));
    const int a = nth_set_bit(vir, rng.below(static_cast<std::uint64_t>(n_vir)));
    return Configuration{c.bits ^ (Bits{1} << i) ^ (Bits{1} << a)};
}

} // namespace

Configuration propose_move(Configuration c, const Sector& sector, Rng& rng,
                           double double_hop_fraction) {
    Configuration next = single_hop(c, sector, rng);
    if (double_hop_fraction > 0.0 && rng.uniform() < double_hop_fraction)
        next = single_hop(next, sector, rng);
    return next;
}

Configuration random_configuration(const Sector& sector, Rng& rng) {
    auto pick = [&](int count, int offset) {
        std::vector<int> idx(static_cast<std::size_t>(sector.n_orb));
        std::iota(idx.begin(), idx.end(), 0);
        Bits b = 0;
        for (int k = 0; k < count; ++k) {
            const auto j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(sector.n_orb - k)));
            std::swap(idx[k], idx[j]);
            b |= Bits{1} << (idx[k] + offset);
        }
        return b;
    };
    return Configuration{pick(sector.n_up, 0) | pick(sector.n_down, sector.n_orb)};
}

SampleBatch run_chain(const Ansatz& ansatz, const ParamVector& params, const ChainOptions& opts,
                      int chain_id) {
    if (opts.n_sweeps <= 0) throw std::invalid_argument("n_sweeps must be positive");
    const Sector& sector = ansatz.sector();
    const int burn = opts.burn_in < 0 ? opts.n_sweeps / 10 : opts.burn_in;
    const int per_sweep = std::max(1, sector.n_modes());

    ChainState st{sector.reference(), {}, Rng(opts.seed, static_cast<std::uint64_t>(chain_id))};
    st.log_psi = ansatz.log_amplitude(st.current, params);
    for (int attempt = 0; is_node(st.log_psi); ++attempt) {
        if (attempt >= opts.max_init_attempts)
            throw NodeError("sampler could not find a configuration with nonzero amplitude");
        st.current = random_configuration(sector, st.rng);
        st.log_psi = ansatz.log_amplitude(st.current, params);
    }

    SampleBatch batch;
    batch.samples.reserve(static_cast<std::size_t>(opts.n_sweeps));
    for (int sweep = 0; sweep < burn + opts.n_sweeps; ++sweep) {
        for (int k = 0; k < per_sweep; ++k) {
            const Configuration cand =
                propose_move(st.current, sector, st.rng, opts.double_hop_fraction);
            ++st.proposed;
            if (cand == st.current) {
                ++st.accepted;
                continue;
            }
            const Complex lp = ansatz.log_amplitude(cand, params);
            if (is_node(lp)) continue;
            const double log_ratio = 2.0 * (lp.real() - st.log_psi.real());
            if (log_ratio >= 0.0 || st.rng.uniform() < std::exp(log_ratio)) {
                st.current = cand;
                st.log_psi = lp;
                ++st.accepted;
            }
        }
        if (sweep >= burn) {
            batch.samples.push_back(st.current);
            batch.chain.push_back(chain_id);
            batch.sweep.push_back(sweep - burn);
        }
    }
    batch.acceptance.push_back(st.acceptance());
    return batch;
}

SampleBatch run_chains(const Ansatz& ansatz, const ParamVector& params, const ChainOptions& opts,
                       int n_chains, int threads) {
    if (n_chains <= 0) throw std::invalid_argument("n_chains must be positive");
    std::vector<SampleBatch> parts(static_cast<std::size_t>(n_chains));
    const int workers = std::clamp(threads, 1, n_chains);
    if (workers == 1) {
        for (int c = 0; c < n_chains; ++c) parts[c] = run_chain(ansatz, params, opts, c);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (int c = w; c < n_chains; c += workers)
                        parts[c] = run_chain(ansatz, params, opts, c);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    SampleBatch out;
    for (auto& p : parts) {
        out.samples.insert(out.samples.end(), p.samples.begin(), p.samples.end());
        out.chain.insert(out.chain.end(), p.chain.begin(), p.chain.end());
        out.sweep.insert(out.sweep.end(), p.sweep.begin(), p.sweep.end());
        out.acceptance.insert(out.acceptance.end(), p.acceptance.begin(), p.acceptance.end());
    }
    return out;
}

ExactDistribution exact_distribution(const Ansatz& ansatz, const ParamVector& params,
                                     std::size_t limit) {
    ExactDistribution d{SectorBasis(ansatz.sector(), limit), {}, {}};
    const auto dim = static_cast<Eigen::Index>(d.basis.size());
    Eigen::VectorXcd logs(dim);
    double top = kNodeLogModulus;
    for (Eigen::Index i = 0; i < dim; ++i) {
        logs[i] = ansatz.log_amplitude(d.basis[static_cast<std::size_t>(i)], params);
        top = std::max(top, logs[i].real());
    }
    if (top == kNodeLogModulus) throw NodeError("ansatz vanishes on the whole sector");
    d.amplitudes.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        d.amplitudes[i] = is_node(logs[i]) ? Complex{} : std::exp(logs[i] - top);
    d.amplitudes /= d.amplitudes.norm();
    d.probabilities = d.amplitudes.cwiseAbs2();
    return d;
}

double autocorrelation_time(const std::vector<double>& x) {
    const auto n = x.size();
    if (n < 2) return 1.0;
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    c0 /= static_cast<double>(n);
    if (c0 == 0.0) return 1.0;
    double tau = 1.0;
    for (std::size_t lag = 1; lag < n; ++lag) {
        double c = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) c += (x[i] - mean) * (x[i + lag] - mean);
        c /= static_cast<double>(n) * c0;
        tau += 2.0 * c;
        if (static_cast<double>(lag) >= 5.0 * tau) break;
    }
    return std::max(tau, 1.0);
}

double batch_means_error(const std::vector<double>& x, int n_batches) {
    const auto n = x.size();
    if (n_batches < 2 || n < static_cast<std::size_t>(n_batches)) return 0.0;
    const std::size_t len = n / static_cast<std::size_t>(n_batches);
    std::vector<double> means(static_cast<std::size_t>(n_batches));
    for (int b = 0; b < n_batches; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += x[static_cast<std::size_t>(b) * len + i];
        means[b] = s / static_cast<double>(len);
    }
    const double m = std::accumulate(means.begin(), means.end(), 0.0) / n_batches;
    double v = 0.0;
    for (double mb : means) v += (mb - m) * (mb - m);
    v /= (n_batches - 1);
    return std::sqrt(v / n_batches);
}

} // namespace orbrot
