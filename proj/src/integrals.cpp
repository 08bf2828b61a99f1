// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace orbrot {

IntegralSet::IntegralSet(int n)
    : n_orb(n),
      h(Eigen::MatrixXd::Zero(n, n)),
      g(static_cast<std::size_t>(n) * n * n * n, 0.0) {
    if (n < 0) throw std::invalid_argument("negative orbital count");
}

namespace {

// The eight index tuples equal to <pq|rs> for real orbitals.
std::array<std::array<int, 4>, 8> images(int p, int q, int r, int s) {
    return {{{p, q, r, s}, {r, q, p, s}, {p, s, r, q}, {r, s, p, q},
             {q, p, s, r}, {s, p, q, r}, {q, r, s, p}, {s, r, q, p}}};
}

} // namespace

void IntegralSet::set_symmetric(int p, int q, int r, int s, double value) {
    for (const auto& t : images(p, q, r, s)) two(t[0], t[1], t[2], t[3]) = value;
}

double IntegralSet::symmetry_violation() const {
    double worst = (h - h.transpose()).cwiseAbs().maxCoeff();
    if (n_orb == 0) return 0.0;
    for (int p = 0; p < n_orb; ++p)
        for (int q = 0; q < n_orb; ++q)
            for (int r = 0; r < n_orb; ++r)
                for (int s = 0; s < n_orb; ++s) {
                    const double ref = two(p, q, r, s);
                    for (const auto& t : images(p, q, r, s))
                        worst = std::max(worst, std::abs(two(t[0], t[1], t[2], t[3]) - ref));
                }
    return worst;
}

void IntegralSet::validate(double tol) const {
    if (h.rows() != n_orb || h.cols() != n_orb)
        throw std::invalid_argument("one-body matrix has wrong shape");
    if (g.size() != static_cast<std::size_t>(n_orb) * n_orb * n_orb * n_orb)
        throw std::invalid_argument("two-body tensor has wrong size");
    double scale = 1.0;
    if (n_orb > 0) {
        scale = std::max(scale, h.cwiseAbs().maxCoeff());
        for (double x : g) scale = std::max(scale, std::abs(x));
    }
    const double v = symmetry_violation();
    if (v > tol * scale)
        throw std::invalid_argument("integral symmetry violated by " + std::to_string(v));
}

std::size_t IntegralSet::count_two_body_nonzero(double threshold) const {
    return static_cast<std::size_t>(
        std::count_if(g.begin(), g.end(), [&](double x) { return std::abs(x) > threshold; }));
}

IntegralSet hubbard_ring(const HubbardSpec& spec) {
    if (spec.sites < 2) throw std::invalid_argument("Hubbard model needs at least 2 sites");
    const int n = spec.sites;
    IntegralSet ints(n);
    for (int i = 0; i + 1 < n; ++i) {
        ints.h(i, i + 1) = -spec.t;
        ints.h(i + 1, i) = -spec.t;
    }
    if (spec.periodic && n > 2) {
        ints.h(0, n - 1) = -spec.t;
        ints.h(n - 1, 0) = -spec.t;
    }
    for (int i = 0; i < n; ++i) ints.two(i, i, i, i) = spec.U;
    return ints;
}

std::vector<double> four_index_transform(const std::vector<double>& g, int n,
                                         const Eigen::MatrixXd& A,
                                         const Eigen::MatrixXd& B,
                                         const Eigen::MatrixXd& C,
                                         const Eigen::MatrixXd& D) {
    const auto N = static_cast<std::size_t>(n);
    const std::size_t n2 = N * N, n3 = n2 * N;
    std::vector<double> a(g.size(), 0.0), b(g.size(), 0.0);
    // last index: a[ijk s] = sum_l g[ijk l] D[l s]
    for (std::size_t x = 0; x < n3; ++x)
        for (std::size_t l = 0; l < N; ++l) {
            const double v = g[x * N + l];
            if (v == 0.0) continue;
            for (std::size_t s = 0; s < N; ++s) a[x * N + s] += v * D(l, s);
        }
    // third index: b[ij r s] = sum_k a[ij k s] C[k r]
    for (std::size_t ij = 0; ij < n2; ++ij)
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t r = 0; r < N; ++r) {
                const double c = C(k, r);
                if (c == 0.0) continue;
                const double* src = &a[(ij * N + k) * N];
                double* dst = &b[(ij * N + r) * N];
                for (std::size_t s = 0; s < N; ++s) dst[s] += c * src[s];
            }
    std::fill(a.begin(), a.end(), 0.0);
    // second index: a[i q rs] = sum_j b[i j rs] B[j q]
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t q = 0; q < N; ++q) {
                const double c = B(j, q);
                if (c == 0.0) continue;
                const double* src = &b[(i * N + j) * n2];
                double* dst = &a[(i * N + q) * n2];
                for (std::size_t rs = 0; rs < n2; ++rs) dst[rs] += c * src[rs];
            }
    std::fill(b.begin(), b.end(), 0.0);
    // first index: b[p qrs] = sum_i a[i qrs] A[i p]
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t p = 0; p < N; ++p) {
            const double c = A(i, p);
            if (c == 0.0) continue;
            const double* src = &a[i * n3];
            double* dst = &b[p * n3];
            for (std::size_t x = 0; x < n3; ++x) dst[x] += c * src[x];
        }
    return b;
}

IntegralSet rotate_integrals(const IntegralSet& ints, const Eigen::MatrixXd& phi) {
    const int n = ints.n_orb;
    if (phi.rows() != n || phi.cols() != n)
        throw std::invalid_argument("rotation matrix has wrong shape");
    const double err =
        n == 0 ? 0.0
               : (phi.transpose() * phi - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(err <= 1e-10))
        throw std::invalid_argument("rotation matrix is not orthogonal (error " +
                                    std::to_string(err) + ")");
    IntegralSet out(n);
    out.core = ints.core;
    out.h = phi.transpose() * ints.h * phi;
    out.g = four_index_transform(ints.g, n, phi, phi, phi, phi);
    return out;
}

} // namespace orbrot
