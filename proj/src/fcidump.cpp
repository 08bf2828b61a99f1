// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/errors.hpp"
#include "orbrot/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <regex>
#include <sstream>

namespace orbrot {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

double parse_real(std::string tok, int line) {
    std::replace(tok.begin(), tok.end(), 'D', 'E');
    std::replace(tok.begin(), tok.end(), 'd', 'e');
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("FCIDUMP line " + std::to_string(line) + ": bad number '" + tok + "'");
    }
}

int parse_int(const std::string& tok, int line) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("FCIDUMP line " + std::to_string(line) + ": bad integer '" + tok + "'");
    }
}

// key -> raw comma/space separated value tokens
std::map<std::string, std::vector<std::string>> parse_namelist(const std::string& text) {
    std::map<std::string, std::vector<std::string>> out;
    static const std::regex key_re(R"(([A-Za-z_][A-Za-z0-9_]*)\s*=)");
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> keys;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), key_re);
         it != std::sregex_iterator(); ++it)
        keys.push_back({upper((*it)[1].str()),
                        {static_cast<std::size_t>(it->position()),
                         static_cast<std::size_t>(it->position() + it->length())}});
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const std::size_t begin = keys[k].second.second;
        const std::size_t end = k + 1 < keys.size() ? keys[k + 1].second.first : text.size();
        std::string value = text.substr(begin, end - begin);
        std::replace(value.begin(), value.end(), ',', ' ');
        std::istringstream ss(value);
        std::vector<std::string> toks;
        for (std::string t; ss >> t;) toks.push_back(t);
        out[keys[k].first] = std::move(toks);
    }
    return out;
}

int required_int(const std::map<std::string, std::vector<std::string>>& nl,
                 const std::string& key) {
    const auto it = nl.find(key);
    if (it == nl.end() || it->second.size() != 1)
        throw ParseError("FCIDUMP header: missing or malformed " + key);
    return parse_int(it->second.front(), 1);
}

struct Tracker {
    std::map<std::array<int, 4>, double> seen;
    void record(std::array<int, 4> key, double value, int line) {
        auto [it, fresh] = seen.emplace(key, value);
        if (!fresh) {
            const double tol = 1e-10 * std::max(1.0, std::abs(it->second));
            if (std::abs(it->second - value) > tol)
                throw ParseError("FCIDUMP line " + std::to_string(line) +
                                 ": conflicting duplicate record");
        }
    }
};

// Canonical representative of a chemists' (ij|kl) under 8-fold symmetry.
std::array<int, 4> canonical_chem(int i, int j, int k, int l) {
    if (i < j) std::swap(i, j);
    if (k < l) std::swap(k, l);
    if (std::pair{i, j} < std::pair{k, l}) {
        std::swap(i, k);
        std::swap(j, l);
    }
    return {i, j, k, l};
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

} // namespace

FcidumpData parse_fcidump(std::istream& in) {
    std::string header;
    std::string line;
    int lineno = 0;
    bool started = false, ended = false;
    while (!ended && std::getline(in, line)) {
        ++lineno;
        std::string u = upper(line);
        if (!started) {
            const auto pos = u.find("&FCI");
            if (pos == std::string::npos) {
                if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
                throw ParseError("FCIDUMP: expected '&FCI' namelist header");
            }
            started = true;
            u = u.substr(pos + 4);
        }
        const auto end_pos = std::min(u.find("&END"), u.find('/'));
        if (end_pos != std::string::npos) {
            header += u.substr(0, end_pos);
            ended = true;
        } else {
            header += u + " ";
        }
    }
    if (!ended) throw ParseError("FCIDUMP: unterminated namelist header");

    const auto nl = parse_namelist(header);
    const int norb = required_int(nl, "NORB");
    const int nelec = required_int(nl, "NELEC");
    const int ms2 = required_int(nl, "MS2");
    for (const char* key : {"UHF", "IUHF"}) {
        const auto it = nl.find(key);
        if (it != nl.end() && !it->second.empty()) {
            const std::string v = it->second.front();
            if (v == "1" || v == ".TRUE." || v == "T" || v == "TRUE")
                throw ParseError("FCIDUMP: unrestricted integrals are not supported");
        }
    }
    if (norb < 1 || 2 * norb > kMaxModes)
        throw ParseError("FCIDUMP header: NORB out of range");
    if (nelec < 0 || nelec > 2 * norb || (nelec + ms2) % 2 != 0 || std::abs(ms2) > nelec)
        throw ParseError("FCIDUMP header: inconsistent NELEC/MS2");

    FcidumpData data{IntegralSet(norb),
                     Sector{norb, (nelec + ms2) / 2, (nelec - ms2) / 2}};
    try {
        data.sector.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("FCIDUMP header: ") + e.what());
    }
    IntegralSet& I = data.integrals;
    Tracker tracker;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::vector<std::string> toks;
        for (std::string t; ss >> t;) toks.push_back(t);
        if (toks.empty()) continue;
        if (toks.size() != 5)
            throw ParseError("FCIDUMP line " + std::to_string(lineno) +
                             ": expected 'value i j k l'");
        const double v = parse_real(toks[0], lineno);
        std::array<int, 4> idx{};
        for (int a = 0; a < 4; ++a) {
            idx[a] = parse_int(toks[a + 1], lineno);
            if (idx[a] < 0 || idx[a] > norb)
                throw ParseError("FCIDUMP line " + std::to_string(lineno) +
                                 ": orbital index out of range");
        }
        const auto [i, j, k, l] = idx;
        if (i == 0 && j == 0 && k == 0 && l == 0) {
            tracker.record({0, 0, 0, 0}, v, lineno);
            I.core = v;
        } else if (i > 0 && j > 0 && k == 0 && l == 0) {
            tracker.record({std::max(i, j), std::min(i, j), 0, 0}, v, lineno);
            I.h(i - 1, j - 1) = v;
            I.h(j - 1, i - 1) = v;
        } else if (i > 0 && j > 0 && k > 0 && l > 0) {
            tracker.record(canonical_chem(i, j, k, l), v, lineno);
            // chemists' (ij|kl) = <ik|jl>
            I.set_symmetric(i - 1, k - 1, j - 1, l - 1, v);
        } else if (i > 0 && j == 0 && k == 0 && l == 0) {
            // orbital energy record; not part of the Hamiltonian
        } else {
            throw ParseError("FCIDUMP line " + std::to_string(lineno) +
                             ": unrecognised index pattern");
        }
    }
    return data;
}

FcidumpData load_fcidump(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open FCIDUMP file: " + path);
    try {
        return parse_fcidump(in);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_fcidump(std::ostream& out, const IntegralSet& ints, const Sector& sector) {
    const int n = ints.n_orb;
    out << " &FCI NORB=" << n << ",NELEC=" << sector.n_elec()
        << ",MS2=" << (sector.n_up - sector.n_down) << ",\n  ORBSYM=";
    for (int i = 0; i < n; ++i) out << "1,";
    out << "\n  ISYM=1,\n &END\n";
    auto rec = [&](double v, int i, int j, int k, int l) {
        out << format_real(v) << ' ' << i << ' ' << j << ' ' << k << ' ' << l << '\n';
    };
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= i; ++j)
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= k; ++l) {
                    if (i * (i - 1) / 2 + j < k * (k - 1) / 2 + l) continue;
                    const double v = ints.two(i - 1, k - 1, j - 1, l - 1);
                    if (v != 0.0) rec(v, i, j, k, l);
                }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= i; ++j) {
            const double v = ints.h(i - 1, j - 1);
            if (v != 0.0) rec(v, i, j, 0, 0);
        }
    rec(ints.core, 0, 0, 0, 0);
}

void save_fcidump(const std::string& path, const IntegralSet& ints, const Sector& sector) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write FCIDUMP file: " + path);
    write_fcidump(out, ints, sector);
    if (!out) throw std::runtime_error("I/O error writing FCIDUMP file: " + path);
}

} // namespace orbrot
