// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "rewkit/local_unitary.hpp"
#include "rewkit/witness.hpp"

namespace rewkit {

/// |psi(theta)> = (|0,0> + e^{i theta} |1,1>)/sqrt(2).
inline Vec bell_phase_vector(double theta) {
    Vec v = Vec::Zero(4);
    v(0) = 1.0 / std::sqrt(2.0);
    v(3) = std::polar(1.0 / std::sqrt(2.0), theta);
    return v;
}

inline DensityMatrix bell_phase_state(double theta) {
    Vec v = bell_phase_vector(theta);
    return DensityMatrix(Mat(v * v.adjoint()), 2, 2);
}

/// W(theta) = |psi(theta)><psi(theta)|^Gamma, the witness family generated
/// from the phased Bell vector.
inline Witness witness_theta(double theta, int restarts = 64, std::uint64_t seed = 0) {
    Vec v = bell_phase_vector(theta);
    BipartiteOperator proj(Mat(v * v.adjoint()), 2, 2);
    return Witness::create(partial_transpose(proj), WitnessProvenance::PartialTransposeOfPure,
                           restarts, seed);
}

/// A Hermitian matrix whose real part is a witness while the matrix itself is
/// not one (it has two negative eigenvalues).
inline HermitianOperator h_counterexample() {
    const cplx I(0.0, 1.0);
    Mat h(4, 4);
    h << 1.0, I, 2.0 * I, 3.0 * I,
        -I, 0.0, 1.0, 4.0 * I,
        -2.0 * I, 1.0, 0.0, 5.0 * I,
        -3.0 * I, -4.0 * I, -5.0 * I, 1.0;
    return HermitianOperator(0.5 * h);
}

struct UpbAngles {
    double gammaA, thetaA, phiA;
    double gammaB, thetaB, phiB;
};

/// Fixture angles used throughout the tests and the CLI default. Generic in
/// the sense that no sin/cos factor vanishes.
inline UpbAngles generic_upb_angles() {
    return {M_PI / 5.0, M_PI / 5.0, M_PI / 7.0, M_PI / 6.0, 2.0 * M_PI / 7.0, M_PI / 3.0};
}

/// The two-qutrit quintuple of product pairs parameterized by six angles;
/// every two-qutrit UPB is locally equivalent to an instance of it.
struct UpbFamily {
    UpbAngles angles;
    std::array<Vec, 5> alphas;
    std::array<Vec, 5> betas;
    double normA = 0.0, normB = 0.0;

    Vec productVector(int k) const { return kron_vec(alphas[k], betas[k]); }
};

inline UpbFamily upb_family(const UpbAngles &ang) {
    const cplx epA = std::polar(1.0, ang.phiA);
    const cplx epB = std::polar(1.0, ang.phiB);
    double nA2 = std::cos(ang.gammaA) * std::cos(ang.gammaA) +
                 std::sin(ang.gammaA) * std::sin(ang.gammaA) * std::cos(ang.thetaA) *
                     std::cos(ang.thetaA);
    double nB2 = std::cos(ang.gammaB) * std::cos(ang.gammaB) +
                 std::sin(ang.gammaB) * std::sin(ang.gammaB) * std::cos(ang.thetaB) *
                     std::cos(ang.thetaB);
    if (nA2 < 1e-24 || nB2 < 1e-24)
        throw DegenerateParameters("upb_family: vanishing normalization constant");
    UpbFamily f;
    f.angles = ang;
    f.normA = std::sqrt(nA2);
    f.normB = std::sqrt(nB2);

    f.alphas[0] = ket(0, 3);
    f.alphas[1] = ket(1, 3);
    f.alphas[2] = std::cos(ang.thetaA) * ket(0, 3) + std::sin(ang.thetaA) * ket(2, 3);
    f.alphas[3] = std::sin(ang.gammaA) *
                      (std::sin(ang.thetaA) * ket(0, 3) - std::cos(ang.thetaA) * ket(2, 3))
                      .cast<cplx>() +
                  std::cos(ang.gammaA) * epA * ket(1, 3);
    f.alphas[4] = (std::sin(ang.gammaA) * std::cos(ang.thetaA) * epA * ket(1, 3) +
                   std::cos(ang.gammaA) * ket(2, 3)) /
                  f.normA;

    f.betas[0] = ket(1, 3);
    f.betas[1] = std::sin(ang.gammaB) *
                     (std::sin(ang.thetaB) * ket(0, 3) - std::cos(ang.thetaB) * ket(2, 3))
                     .cast<cplx>() +
                 std::cos(ang.gammaB) * epB * ket(1, 3);
    f.betas[2] = ket(0, 3);
    f.betas[3] = std::cos(ang.thetaB) * ket(0, 3) + std::sin(ang.thetaB) * ket(2, 3);
    f.betas[4] = (std::sin(ang.gammaB) * std::cos(ang.thetaB) * epB * ket(1, 3) +
                  std::cos(ang.gammaB) * ket(2, 3)) /
                 f.normB;
    return f;
}

/// Projector onto the span of the five UPB product vectors.
inline Mat upb_projector(const UpbFamily &f) {
    Mat p = Mat::Zero(9, 9);
    for (int k = 0; k < 5; ++k) {
        Vec v = f.productVector(k);
        p += v * v.adjoint();
    }
    return p;
}

/// PPT entangled state on the orthogonal complement of the UPB span:
/// rho = (I_9 - P)/4. Rejects parameter choices where the five product
/// vectors are not mutually orthogonal (P would not be a projector).
inline DensityMatrix upb_state(const UpbFamily &f) {
    Mat p = upb_projector(f);
    if (max_abs(p * p - p) > 1e-8)
        throw NotAProjector("upb_state: the five product pairs are not mutually orthogonal");
    Mat rho = (Mat::Identity(9, 9) - p) / 4.0;
    return DensityMatrix(rho, 3, 3);
}

struct DephasedUpb {
    Mat dA, dB;          // diagonal unitaries removing the UPB phases
    DensityMatrix sigma; // real PPT entangled state
};

/// Diagonal local phases that turn the UPB projector into a real one:
/// D_A = diag(1, e^{-i phi_A}, 1) and likewise for B.
inline DephasedUpb dephase_upb(const UpbFamily &f, double imagTol = 1e-12) {
    Mat p = upb_projector(f);
    if (max_abs(p * p - p) > 1e-8)
        throw NotAProjector("dephase_upb: the five product pairs are not mutually orthogonal");
    Mat dA = Mat::Identity(3, 3), dB = Mat::Identity(3, 3);
    dA(1, 1) = std::polar(1.0, -f.angles.phiA);
    dB(1, 1) = std::polar(1.0, -f.angles.phiB);
    Mat x = Eigen::kroneckerProduct(dA, dB).eval();
    Mat pd = x * p * x.adjoint();
    if (max_abs(pd.imag()) > imagTol)
        throw NotAProjector("dephase_upb: dephased projector is not real");
    DephasedUpb out;
    out.dA = dA;
    out.dB = dB;
    out.sigma = DensityMatrix((Mat::Identity(9, 9) - pd) / 4.0, 3, 3);
    return out;
}

struct Rank4Params {
    double a, b, c, d;
};

/// Two-qutrit rank-4 normal form sigma = C† C with C = [C0, C1, C2] built
/// from four positive parameters; real by construction.
inline DensityMatrix rank4_state(const Rank4Params &p) {
    if (p.a <= 0 || p.b <= 0 || p.c <= 0 || p.d <= 0)
        throw InvalidInput("rank4_state: parameters must be positive");
    RMat c = RMat::Zero(4, 9);
    // C0
    c(0, 1) = p.a;
    c(0, 2) = p.b;
    c(1, 2) = 1.0;
    // C1
    c(1, 5) = p.c;
    c(2, 5) = 1.0;
    c(3, 3) = 1.0;
    c(3, 5) = -1.0 / p.d;
    // C2
    c(0, 7) = -1.0 / p.b;
    c(1, 7) = 1.0;
    c(2, 6) = 1.0;
    c(2, 7) = -p.c;
    c(3, 6) = p.d;
    RMat sigma = c.transpose() * c;
    return DensityMatrix(sigma.cast<cplx>(), 3, 3);
}

struct QuqartPair {
    DensityMatrix rho;    // real PPT entangled state on C^4 (x) C^4
    DensityMatrix sigma;  // LU conjugate with separable real part
    LocalUnitary lu;      // sigma = (I (x) diag(1,1,i,i)) rho (I (x) diag(1,1,-i,-i))
};

/// The two-ququart pair: a real PPT entangled state and its local-phase
/// conjugate whose real part is separable.
inline QuqartPair quqart_pair() {
    auto kk = [](int i, int j) { return kron_vec(ket(i, 4), ket(j, 4)); };
    Mat rho = Mat::Zero(16, 16);
    Vec g1 = kk(0, 0) + kk(1, 1) + kk(2, 2);
    Vec g2 = kk(0, 1) + kk(1, 0) + kk(3, 3);
    rho += g1 * g1.adjoint();
    rho += g2 * g2.adjoint();
    for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 2}, {2, 0}, {1, 2}, {2, 1},
                                                        {0, 3}, {3, 0}, {1, 3}, {3, 1}}) {
        Vec v = kk(i, j);
        rho += v * v.adjoint();
    }
    QuqartPair out;
    out.rho = DensityMatrix(rho, 4, 4);
    Mat d = Mat::Identity(4, 4);
    d(2, 2) = cplx(0.0, 1.0);
    d(3, 3) = cplx(0.0, 1.0);
    out.lu = LocalUnitary::from(Mat::Identity(4, 4), d);
    out.sigma = DensityMatrix(apply_local(out.rho.base(), out.lu.U, out.lu.V));
    return out;
}

struct SupportReduction {
    int p = 0, q = 0;
    DensityMatrix reduced;  // on C^p (x) C^q
    Mat isoA, isoB;         // isometries, m x p and n x q
};

/// Reduce a state to the support of its real part's reduced operators; the
/// state itself lives on the same support.
inline SupportReduction support_reduce(const DensityMatrix &rho, double tol = 1e-10) {
    BipartiteOperator rp = real_part(rho.base());
    EigenSystem ea = hermitian_eig(partial_trace(rp, Side::B));
    EigenSystem eb = hermitian_eig(partial_trace(rp, Side::A));
    auto keep = [&](const EigenSystem &es) {
        double scale = std::max(es.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
        std::vector<int> idx;
        for (Eigen::Index i = es.eigenvalues.size() - 1; i >= 0; --i)
            if (es.eigenvalues(i) > tol * scale) idx.push_back(static_cast<int>(i));
        return idx;
    };
    auto idxA = keep(ea);
    auto idxB = keep(eb);
    SupportReduction out;
    out.p = static_cast<int>(idxA.size());
    out.q = static_cast<int>(idxB.size());
    out.isoA.resize(rho.dimA(), out.p);
    for (int k = 0; k < out.p; ++k) out.isoA.col(k) = ea.eigenvectors.col(idxA[k]);
    out.isoB.resize(rho.dimB(), out.q);
    for (int k = 0; k < out.q; ++k) out.isoB.col(k) = eb.eigenvectors.col(idxB[k]);
    out.reduced = DensityMatrix(apply_local(rho.base(), out.isoA.adjoint(), out.isoB.adjoint()),
                                1e-8);
    return out;
}

struct ZeroPatternReport {
    // p(j,k) = diagonal entries of the (diagonal) real part
    RMat diag;
    // indices (row, col) of entries of rho that the zero pattern forces to
    // vanish but that exceed tolerance; empty when the pattern holds
    std::vector<std::pair<int, int>> violations;
    bool patternHolds = true;
    bool permutationForm = false;  // at most one nonzero diag entry per row/col
    bool equalsRealPart = false;   // rho == rho+ entrywise (permutation case)
    double maxDeviationFromRealPart = 0.0;
};

/// Structure scan for PPT states whose real part is diagonal: zero diagonal
/// entries force whole rows/columns of rho and rho^Gamma to vanish, and a
/// permutation-shaped diagonal collapses rho onto its real part.
inline ZeroPatternReport diagonal_realpart_pattern(const DensityMatrix &rho, double tol = 1e-10) {
    if (rho.dimA() != rho.dimB())
        throw NotApplicable("diagonal_realpart_pattern: requires equal local dimensions");
    const int m = rho.dimA();
    const Mat &r = rho.matrix();
    Mat rplus = r.real().cast<cplx>();
    for (int u = 0; u < m * m; ++u)
        for (int v = 0; v < m * m; ++v)
            if (u != v && std::abs(rplus(u, v)) > 1e-12)
                throw NotApplicable("diagonal_realpart_pattern: real part is not diagonal");
    PptReport ppt = is_ppt(rho);
    if (!ppt.ppt) throw NotApplicable("diagonal_realpart_pattern: state is NPT");

    ZeroPatternReport rep;
    rep.diag.resize(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) rep.diag(j, k) = r(j * m + k, j * m + k).real();

    Mat g = partial_transpose(rho.base()).matrix();
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (rep.diag(j, k) > tol) continue;
            int idx = j * m + k;
            for (int t = 0; t < m * m; ++t) {
                if (std::abs(r(idx, t)) > tol || std::abs(r(t, idx)) > tol ||
                    std::abs(g(idx, t)) > tol || std::abs(g(t, idx)) > tol) {
                    rep.violations.emplace_back(idx, t);
                }
            }
        }
    rep.patternHolds = rep.violations.empty();

    bool perm = true;
    for (int j = 0; j < m && perm; ++j) {
        int rowNz = 0, colNz = 0;
        for (int k = 0; k < m; ++k) {
            if (rep.diag(j, k) > tol) ++rowNz;
            if (rep.diag(k, j) > tol) ++colNz;
        }
        if (rowNz > 1 || colNz > 1) perm = false;
    }
    rep.permutationForm = perm;
    rep.maxDeviationFromRealPart = max_abs(r - rplus);
    if (perm) rep.equalsRealPart = rep.maxDeviationFromRealPart <= 10 * tol;
    return rep;
}

} // namespace rewkit
