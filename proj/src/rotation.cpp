// Copyright 2026 The orbrot Authors
// SPDX-License-Identifier: Apache-2.0

#include "orbrot/rotation.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace orbrot {

namespace {

using Mat = Eigen::MatrixXd;

// Pade coefficients b_0..b_m for m = 3, 5, 7, 9 (Higham 2005, Table 2.3).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
// Largest 1-norm for which each degree is accurate to unit roundoff.
constexpr std::array<double, 4> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152;

template <std::size_t N>
Mat pade_low(const Mat& A, const std::array<double, N>& b) {
    const auto n = A.rows();
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = A * A;
    Mat U = b[1] * I;
    Mat V = b[0] * I;
    Mat P = I;
    for (std::size_t k = 2; k < N; k += 2) {
        P = P * A2;
        V += b[k] * P;
        if (k + 1 < N) U += b[k + 1] * P;
    }
    U = A * U;
    return (V - U).partialPivLu().solve(V + U);
}

double norm1(const Mat& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); }

} // namespace

Mat expm(const Mat& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("expm needs a square matrix");
    if (!A.allFinite()) throw std::invalid_argument("expm input is not finite");
    const auto n = A.rows();
    if (n == 0) return A;
    const double nrm = norm1(A);
    if (nrm <= kTheta[0]) return pade_low(A, kPade3);
    if (nrm <= kTheta[1]) return pade_low(A, kPade5);
    if (nrm <= kTheta[2]) return pade_low(A, kPade7);
    if (nrm <= kTheta[3]) return pade_low(A, kPade9);

    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / kTheta13))));
    const Mat As = A / std::ldexp(1.0, s);
    const auto& b = kPade13;
    const Mat I = Mat::Identity(n, n);
    const Mat A2 = As * As;
    const Mat A4 = A2 * A2;
    const Mat A6 = A4 * A2;
    const Mat U = As * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                        b[3] * A2 + b[1] * I);
    const Mat V =
        A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
    Mat R = (V - U).partialPivLu().solve(V + U);
    for (int k = 0; k < s; ++k) R = R * R;
    return R;
}

Mat expm_frechet(const Mat& A, const Mat& E) {
    const auto n = A.rows();
    if (E.rows() != n || E.cols() != n) throw std::invalid_argument("Frechet direction shape");
    Mat big = Mat::Zero(2 * n, 2 * n);
    big.topLeftCorner(n, n) = A;
    big.topRightCorner(n, n) = E;
    big.bottomRightCorner(n, n) = A;
    return expm(big).topRightCorner(n, n);
}

std::pair<int, int> kappa_param_pair(int index) {
    if (index < 0) throw std::out_of_range("negative kappa parameter index");
    int p = 1;
    while (kappa_param_index(p + 1, 0) <= index) ++p;
    return {p, index - kappa_param_index(p, 0)};
}

Mat kappa_matrix(const Eigen::VectorXd& params, int n_orb) {
    if (params.size() != kappa_param_count(n_orb))
        throw std::invalid_argument("kappa parameter count mismatch");
    Mat K = Mat::Zero(n_orb, n_orb);
    for (int p = 1; p < n_orb; ++p)
        for (int q = 0; q < p; ++q) {
            K(p, q) = params[kappa_param_index(p, q)];
            K(q, p) = -K(p, q);
        }
    return K;
}

Mat kappa_generator(int index, int n_orb) {
    const auto [p, q] = kappa_param_pair(index);
    if (p >= n_orb) throw std::out_of_range("kappa parameter index out of range");
    Mat E = Mat::Zero(n_orb, n_orb);
    E(p, q) = 1.0;
    E(q, p) = -1.0;
    return E;
}

Mat expm_antisymmetric(const Eigen::VectorXd& params, int n_orb) {
    if (!params.allFinite()) throw std::invalid_argument("kappa parameters are not finite");
    return expm(kappa_matrix(params, n_orb));
}

Mat expm_directional_derivative(const Eigen::VectorXd& params, int n_orb, int index) {
    return expm_frechet(kappa_matrix(params, n_orb), kappa_generator(index, n_orb));
}

OrbitalRotation::OrbitalRotation(int n_orb)
    : OrbitalRotation(n_orb, Eigen::VectorXd::Zero(kappa_param_count(n_orb))) {}

OrbitalRotation::OrbitalRotation(int n_orb, Eigen::VectorXd params) : n_orb_(n_orb) {
    set_params(std::move(params));
}

void OrbitalRotation::set_params(Eigen::VectorXd params) {
    if (params.size() != kappa_param_count(n_orb_))
        throw std::invalid_argument("kappa parameter count mismatch");
    phi_ = expm_antisymmetric(params, n_orb_);
    params_ = std::move(params);
}

IntegralDerivative integral_derivatives(const IntegralSet& reference,
                                        const OrbitalRotation& rotation, int index) {
    const int n = reference.n_orb;
    if (rotation.n_orb() != n) throw std::invalid_argument("rotation/integral size mismatch");
    const Mat& phi = rotation.phi();
    const Mat dphi = expm_directional_derivative(rotation.params(), n, index);
    IntegralDerivative d;
    d.dh = dphi.transpose() * reference.h * phi + phi.transpose() * reference.h * dphi;
    d.dg = four_index_transform(reference.g, n, dphi, phi, phi, phi);
    const auto add = [&](const std::vector<double>& t) {
        for (std::size_t i = 0; i < d.dg.size(); ++i) d.dg[i] += t[i];
    };
    add(four_index_transform(reference.g, n, phi, dphi, phi, phi));
    add(four_index_transform(reference.g, n, phi, phi, dphi, phi));
    add(four_index_transform(reference.g, n, phi, phi, phi, dphi));
    return d;
}

double contract_derivative(const IntegralDerivative& d, const RdmSet& rdms) {
    if (d.dh.rows() != rdms.n_orb) throw std::invalid_argument("RDM dimension mismatch");
    double f = (d.dh.array() * rdms.one_total().array()).sum();
    double f2 = 0.0;
    for (const auto& t : rdms.two)
        for (std::size_t i = 0; i < t.size(); ++i) f2 += d.dg[i] * t[i];
    return f + 0.5 * f2;
}

Eigen::VectorXd kappa_force(const IntegralSet& reference, const OrbitalRotation& rotation,
                            const RdmSet& rdms) {
    if (rdms.n_orb != reference.n_orb)
        throw std::invalid_argument("RDM dimension does not match integrals");
    const int np = kappa_param_count(reference.n_orb);
    Eigen::VectorXd f(np);
    for (int k = 0; k < np; ++k)
        f[k] = contract_derivative(integral_derivatives(reference, rotation, k), rdms);
    return f;
}

} // namespace orbrot
