// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/local_hamiltonian.hpp"

#include <stdexcept>

namespace orbrot {

LocalHamiltonian::LocalHamiltonian(IntegralSet ints) : ints_(std::move(ints)) {
    if (2 * ints_.n_orb > kMaxModes) throw std::invalid_argument("too many orbitals");
}

double LocalHamiltonian::diagonal(Configuration c) const {
    const int n = ints_.n_orb;
    std::vector<int> occ[2];
    for (int s = 0; s < 2; ++s)
        detail::bit_list(c.bits & spin_mask(static_cast<Spin>(s), n), s * n, occ[s]);
    double e = ints_.core;
    for (int s = 0; s < 2; ++s)
        for (int i : occ[s]) e += ints_.h(i, i);
    // 1/2 sum_{ij} <ij||ij> over occupied spin orbitals
    double e2 = 0.0;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int i : occ[s])
                for (int j : occ[t]) {
                    e2 += g(i, j, i, j);
                    if (s == t) e2 -= g(i, j, j, i);
                }
    return e + 0.5 * e2;
}

Eigen::SparseMatrix<double> LocalHamiltonian::sector_matrix(const SectorBasis& basis) const {
    if (basis.sector().n_orb != ints_.n_orb)
        throw std::invalid_argument("sector and integrals disagree on orbital count");
    const auto dim = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index j = 0; j < dim; ++j)
        for_each_connected(basis[static_cast<std::size_t>(j)], [&](Configuration cp, double v) {
            const auto i = basis.index_of(cp);
            trip.emplace_back(static_cast<Eigen::Index>(*i), j, v);
        });
    Eigen::SparseMatrix<double> m(dim, dim);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

} // namespace orbrot
