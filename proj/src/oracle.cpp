// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/oracle.hpp"

#include "orbrot/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <vector>

namespace orbrot {

namespace {

struct Term1 {
    int p, q;
    double v;
};
struct Term2 {
    int p, q, r, s;
    double v;
};

void fix_sign(Eigen::VectorXd& v) {
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > 1e-8 * scale) {
            if (v[i] < 0) v = -v;
            return;
        }
}

} // namespace

SectorMatrix build_sector_hamiltonian(const IntegralSet& ints, const Sector& sector,
                                      std::size_t nonzero_limit) {
    if (ints.n_orb != sector.n_orb)
        throw std::invalid_argument("sector and integrals disagree on orbital count");
    SectorMatrix out{SectorBasis(sector), {}};
    const int n = ints.n_orb;
    const int modes = 2 * n;

    std::vector<Term1> one;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (ints.h(p, q) != 0.0) one.push_back({p, q, ints.h(p, q)});
    std::vector<Term2> two;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
                for (int s = 0; s < n; ++s)
                    if (const double v = ints.two(p, q, r, s); v != 0.0)
                        two.push_back({p, q, r, s, v});

    const auto dim = static_cast<Eigen::Index>(out.basis.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Configuration c = out.basis[static_cast<std::size_t>(j)];
        if (ints.core != 0.0) trip.emplace_back(j, j, ints.core);
        for (int sp = 0; sp < 2; ++sp) {
            const auto s1 = static_cast<Spin>(sp);
            for (const auto& t : one) {
                const auto e =
                    excite_one(c, mode_index(t.p, s1, n), mode_index(t.q, s1, n), modes);
                if (!e) continue;
                const auto i = out.basis.index_of(e->config);
                trip.emplace_back(static_cast<Eigen::Index>(*i), j, e->phase * t.v);
            }
            for (int sp2 = 0; sp2 < 2; ++sp2) {
                const auto s2 = static_cast<Spin>(sp2);
                for (const auto& t : two) {
                    // 1/2 g_pqrs c+_{p s1} c+_{q s2} c_{s s2} c_{r s1}
                    const auto e = excite_two(c, mode_index(t.p, s1, n), mode_index(t.q, s2, n),
                                              mode_index(t.s, s2, n), mode_index(t.r, s1, n),
                                              modes);
                    if (!e) continue;
                    const auto i = out.basis.index_of(e->config);
                    trip.emplace_back(static_cast<Eigen::Index>(*i), j, 0.5 * e->phase * t.v);
                }
            }
            if (trip.size() > 4 * nonzero_limit)
                throw CapacityError("sector Hamiltonian exceeds the nonzero limit");
        }
    }
    out.matrix.resize(dim, dim);
    out.matrix.setFromTriplets(trip.begin(), trip.end());
    out.matrix.prune(0.0);
    if (static_cast<std::size_t>(out.matrix.nonZeros()) > nonzero_limit)
        throw CapacityError("sector Hamiltonian has " + std::to_string(out.matrix.nonZeros()) +
                            " nonzeros, limit " + std::to_string(nonzero_limit));
    return out;
}

Eigenpair lanczos_ground_state(const Eigen::SparseMatrix<double>& h, const LanczosOptions& opts) {
    const Eigen::Index dim = h.rows();
    if (dim == 0) throw std::invalid_argument("empty matrix");
    std::mt19937_64 rng(opts.seed);
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    v.normalize();

    const int max_it = static_cast<int>(std::min<Eigen::Index>(opts.max_iterations, dim));
    Eigen::MatrixXd Q(dim, max_it);
    std::vector<double> alpha, beta;
    for (int k = 0; k < max_it; ++k) {
        Q.col(k) = v;
        Eigen::VectorXd w = h * v;
        alpha.push_back(v.dot(w));
        // full reorthogonalisation, two passes
        for (int pass = 0; pass < 2; ++pass)
            w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
        const double b = w.norm();

        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int i = 0; i <= k; ++i) {
            T(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        const double e0 = es.eigenvalues()[0];
        const double resid = b * std::abs(es.eigenvectors()(k, 0));
        if (resid < opts.tolerance * std::max(1.0, std::abs(e0)) || b < 1e-14) {
            Eigenpair out{e0, Q.leftCols(k + 1) * es.eigenvectors().col(0)};
            out.vector.normalize();
            fix_sign(out.vector);
            return out;
        }
        beta.push_back(b);
        v = w / b;
    }
    throw ConvergenceError("Lanczos did not converge in " + std::to_string(max_it) +
                           " iterations");
}

Eigenpair ground_state(const SectorMatrix& h) {
    const Eigen::Index dim = h.matrix.rows();
    if (dim <= kDenseEigenLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
        if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
        Eigenpair out{es.eigenvalues()[0], es.eigenvectors().col(0)};
        fix_sign(out.vector);
        return out;
    }
    return lanczos_ground_state(h.matrix);
}

Eigen::VectorXd sector_spectrum(const SectorMatrix& h) {
    if (h.matrix.rows() > kDenseEigenLimit)
        throw CapacityError("full spectrum requested for a large sector");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

RdmSet exact_rdms(const Eigen::VectorXd& vector, const SectorBasis& basis) {
    const Sector& sec = basis.sector();
    const int n = sec.n_orb;
    const int modes = 2 * n;
    if (static_cast<std::size_t>(vector.size()) != basis.size())
        throw std::invalid_argument("vector length does not match sector");
    RdmSet rdm(n);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const double cj = vector[static_cast<Eigen::Index>(j)];
        if (cj == 0.0) continue;
        const Configuration c = basis[j];
        for (int a = 0; a < 2; ++a) {
            const auto sa = static_cast<Spin>(a);
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) {
                    const auto e = excite_one(c, mode_index(p, sa, n), mode_index(q, sa, n), modes);
                    if (!e) continue;
                    const auto i = basis.index_of(e->config);
                    rdm.one[a](p, q) += vector[static_cast<Eigen::Index>(*i)] * e->phase * cj;
                }
            for (int b = 0; b < 2; ++b) {
                const auto sb = static_cast<Spin>(b);
                auto& t = rdm.two[static_cast<std::size_t>(RdmSet::pair(sa, sb))];
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        for (int r = 0; r < n; ++r)
                            for (int s = 0; s < n; ++s) {
                                const auto e = excite_two(c, mode_index(p, sa, n),
                                                          mode_index(q, sb, n),
                                                          mode_index(s, sb, n),
                                                          mode_index(r, sa, n), modes);
                                if (!e) continue;
                                const auto i = basis.index_of(e->config);
                                t[rdm.index(p, q, r, s)] +=
                                    vector[static_cast<Eigen::Index>(*i)] * e->phase * cj;
                            }
            }
        }
    }
    return rdm;
}

double oracle_energy(const IntegralSet& ints, const Sector& sector) {
    return ground_state(build_sector_hamiltonian(ints, sector)).energy;
}

} // namespace orbrot
