// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/rdm.hpp"

#include <stdexcept>

namespace orbrot {

RdmSet::RdmSet(int n) : n_orb(n) {
    for (auto& m : one) m = Eigen::MatrixXd::Zero(n, n);
    for (auto& t : two) t.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
}

std::vector<double> RdmSet::two_total() const {
    std::vector<double> out(two[0].size(), 0.0);
    for (const auto& t : two)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += t[i];
    return out;
}

double RdmSet::energy(const IntegralSet& ints) const {
    if (ints.n_orb != n_orb) throw std::invalid_argument("RDM/integral dimension mismatch");
    double e = ints.core + (ints.h.array() * one_total().array()).sum();
    double e2 = 0.0;
    for (const auto& t : two)
        for (std::size_t i = 0; i < t.size(); ++i) e2 += ints.g[i] * t[i];
    return e + 0.5 * e2;
}

RdmSet& RdmSet::operator+=(const RdmSet& other) {
    if (other.n_orb != n_orb) throw std::invalid_argument("RDM dimension mismatch");
    for (int s = 0; s < 2; ++s) one[s] += other.one[s];
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < two[k].size(); ++i) two[k][i] += other.two[k][i];
    return *this;
}

RdmSet& RdmSet::operator*=(double factor) {
    for (auto& m : one) m *= factor;
    for (auto& t : two)
        for (double& x : t) x *= factor;
    return *this;
}

} // namespace orbrot
