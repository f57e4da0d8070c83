// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace rewkit {

using cplx = std::complex<double>;

/// Seeded generators for random vectors, unitaries and states. Every
/// randomized routine in the library takes an explicit seed so runs are
/// reproducible bit-for-bit.
inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Derive a stream seed for restart index r from a base seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t r) {
    // splitmix64 step keeps streams decorrelated
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (r + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Eigen::VectorXcd random_complex_vector(std::mt19937_64 &rng, int n) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
    return v;
}

inline Eigen::VectorXcd random_unit_vector(std::mt19937_64 &rng, int n) {
    Eigen::VectorXcd v = random_complex_vector(rng, n);
    return v / v.norm();
}

inline Eigen::MatrixXcd random_ginibre(std::mt19937_64 &rng, int rows, int cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

/// Haar-distributed random unitary via QR of a Ginibre matrix with the
/// standard phase correction.
inline Eigen::MatrixXcd random_unitary(std::mt19937_64 &rng, int n) {
    Eigen::MatrixXcd g = random_ginibre(rng, n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        cplx d = r(j, j);
        double a = std::abs(d);
        q.col(j) *= (a > 0) ? d / a : cplx(1.0, 0.0);
    }
    return q;
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937_64 &rng, int n) {
    Eigen::MatrixXcd g = random_ginibre(rng, n, n);
    return 0.5 * (g + g.adjoint());
}

/// Random full-rank density matrix (normalized Wishart).
inline Eigen::MatrixXcd random_density(std::mt19937_64 &rng, int n) {
    Eigen::MatrixXcd g = random_ginibre(rng, n, n);
    Eigen::MatrixXcd w = g * g.adjoint();
    return w / w.trace().real();
}

inline Eigen::MatrixXcd random_invertible(std::mt19937_64 &rng, int n) {
    for (;;) {
        Eigen::MatrixXcd g = random_ginibre(rng, n, n);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
        if (svd.singularValues()(n - 1) > 1e-6 * svd.singularValues()(0)) return g;
    }
}

} // namespace rewkit
