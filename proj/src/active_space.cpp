// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/active_space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace orbrot {

ActiveSpaceSpec full_active_space(int n_orb) {
    ActiveSpaceSpec s;
    s.active.resize(static_cast<std::size_t>(n_orb));
    std::iota(s.active.begin(), s.active.end(), 0);
    return s;
}

ActiveSpaceSpec window_active_space(int n_orb, int n_core, int n_active) {
    if (n_core < 0 || n_active < 0 || n_core + n_active > n_orb)
        throw std::invalid_argument("active window does not fit the orbital count");
    ActiveSpaceSpec s;
    for (int p = 0; p < n_orb; ++p) {
        if (p < n_core)
            s.inactive_occupied.push_back(p);
        else if (p < n_core + n_active)
            s.active.push_back(p);
        else
            s.inactive_virtual.push_back(p);
    }
    return s;
}

Sector validate_spec(const ActiveSpaceSpec& spec, const Sector& sector) {
    sector.validate();
    std::vector<int> seen(static_cast<std::size_t>(sector.n_orb), 0);
    for (const auto* list : {&spec.inactive_occupied, &spec.active, &spec.inactive_virtual})
        for (int p : *list) {
            if (p < 0 || p >= sector.n_orb)
                throw std::invalid_argument("orbital index " + std::to_string(p) + " out of range");
            if (seen[static_cast<std::size_t>(p)]++)
                throw std::invalid_argument("orbital " + std::to_string(p) + " listed twice");
        }
    if (spec.n_orb() != sector.n_orb)
        throw std::invalid_argument("active-space lists do not cover every orbital");
    const int core = static_cast<int>(spec.inactive_occupied.size());
    const Sector act{static_cast<int>(spec.active.size()), sector.n_up - core,
                     sector.n_down - core};
    if (act.n_up < 0 || act.n_down < 0)
        throw std::invalid_argument("negative active electron count");
    if (act.n_up > act.n_orb || act.n_down > act.n_orb)
        throw std::invalid_argument("active electrons exceed the active orbitals");
    return act;
}

IntegralSet effective_active_integrals(const IntegralSet& I, const ActiveSpaceSpec& spec) {
    const auto& core = spec.inactive_occupied;
    const auto& act = spec.active;
    const int na = static_cast<int>(act.size());
    IntegralSet out(na);
    out.core = I.core;
    for (int P : core) {
        out.core += 2.0 * I.h(P, P);
        for (int Q : core) out.core += 2.0 * I.two(P, Q, P, Q) - I.two(P, Q, Q, P);
    }
    for (int t = 0; t < na; ++t)
        for (int v = 0; v < na; ++v) {
            double x = I.h(act[t], act[v]);
            for (int Q : core) x += 2.0 * I.two(act[t], Q, act[v], Q) - I.two(act[t], Q, Q, act[v]);
            out.h(t, v) = x;
        }
    for (int t = 0; t < na; ++t)
        for (int u = 0; u < na; ++u)
            for (int v = 0; v < na; ++v)
                for (int w = 0; w < na; ++w) out.two(t, u, v, w) = I.two(act[t], act[u], act[v], act[w]);
    return out;
}

double active_energy_from_rdms(const IntegralSet& I, const ActiveSpaceSpec& spec,
                               const RdmSet& D) {
    const auto& core = spec.inactive_occupied;
    const auto& act = spec.active;
    const int na = static_cast<int>(act.size());
    if (D.n_orb != na) throw std::invalid_argument("active RDM dimension mismatch");
    if (spec.n_orb() != I.n_orb) throw std::invalid_argument("spec does not match integrals");

    double e = I.core;
    for (int P : core) e += 2.0 * I.h(P, P);
    for (int P : core)
        for (int Q : core) e += 2.0 * I.two(P, Q, P, Q) - I.two(P, Q, Q, P);
    const Eigen::MatrixXd d1 = D.one_total();
    for (int t = 0; t < na; ++t)
        for (int v = 0; v < na; ++v) {
            e += I.h(act[t], act[v]) * d1(t, v);
            for (int Q : core)
                e += (2.0 * I.two(act[t], Q, act[v], Q) - I.two(act[t], Q, Q, act[v])) * d1(t, v);
        }
    const auto d2 = D.two_total();
    double e2 = 0.0;
    for (int t = 0; t < na; ++t)
        for (int u = 0; u < na; ++u)
            for (int v = 0; v < na; ++v)
                for (int w = 0; w < na; ++w)
                    e2 += I.two(act[t], act[u], act[v], act[w]) * d2[D.index(t, u, v, w)];
    return e + 0.5 * e2;
}

RdmSet embed_rdms(const RdmSet& D, const ActiveSpaceSpec& spec) {
    const auto& core = spec.inactive_occupied;
    const auto& act = spec.active;
    const int na = static_cast<int>(act.size());
    if (D.n_orb != na) throw std::invalid_argument("active RDM dimension mismatch");
    RdmSet G(spec.n_orb());
    for (int s = 0; s < 2; ++s) {
        for (int P : core) G.one[s](P, P) = 1.0;
        for (int t = 0; t < na; ++t)
            for (int v = 0; v < na; ++v) G.one[s](act[t], act[v]) = D.one[s](t, v);
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            auto& g = G.two[static_cast<std::size_t>(2 * a + b)];
            const auto& d = D.two[static_cast<std::size_t>(2 * a + b)];
            const double same = (a == b) ? 1.0 : 0.0;
            for (int P : core)
                for (int Q : core) {
                    g[G.index(P, Q, P, Q)] += 1.0;
                    g[G.index(P, Q, Q, P)] -= same;
                }
            for (int Q : core)
                for (int t = 0; t < na; ++t)
                    for (int v = 0; v < na; ++v) {
                        const int T = act[t], V = act[v];
                        g[G.index(T, Q, V, Q)] += D.one[a](t, v);
                        g[G.index(Q, T, Q, V)] += D.one[b](t, v);
                        g[G.index(T, Q, Q, V)] -= same * D.one[a](t, v);
                        g[G.index(Q, T, V, Q)] -= same * D.one[a](t, v);
                    }
            for (int t = 0; t < na; ++t)
                for (int u = 0; u < na; ++u)
                    for (int v = 0; v < na; ++v)
                        for (int w = 0; w < na; ++w)
                            g[G.index(act[t], act[u], act[v], act[w])] = d[D.index(t, u, v, w)];
        }
    return G;
}

} // namespace orbrot
