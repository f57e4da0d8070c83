// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "rewkit/bipartite.hpp"
#include "rewkit/seesaw.hpp"

namespace rewkit {

enum class WitnessProvenance { PartialTransposeOfPure, Hyperplane, Realified, Projected, User };

inline std::string to_string(WitnessProvenance p) {
    switch (p) {
        case WitnessProvenance::PartialTransposeOfPure: return "partial-transpose-of-pure";
        case WitnessProvenance::Hyperplane: return "hyperplane";
        case WitnessProvenance::Realified: return "realified";
        case WitnessProvenance::Projected: return "projected";
        case WitnessProvenance::User: return "user";
    }
    return "user";
}

inline WitnessProvenance provenance_from_string(const std::string &s) {
    if (s == "partial-transpose-of-pure") return WitnessProvenance::PartialTransposeOfPure;
    if (s == "hyperplane") return WitnessProvenance::Hyperplane;
    if (s == "realified") return WitnessProvenance::Realified;
    if (s == "projected") return WitnessProvenance::Projected;
    return WitnessProvenance::User;
}

/// Block positivity is certified heuristically by see-saw restarts; a witness
/// is evidence-grade, never proof-grade. The evidence records enough to
/// replay the check deterministically.
struct BlockPositivityEvidence {
    double minProductExpectation = 0.0;
    int restarts = 0;
    std::uint64_t seed = 0;
    double threshold = 0.0;  // -1e-8 * max|W|
};

/// Hermitian bipartite operator asserted block-positive-but-not-PSD.
class Witness {
  public:
    Witness() = default;

    /// Validates both halves of the witness invariant: a strictly negative
    /// eigenvalue, and see-saw evidence that product expectations stay above
    /// -1e-8 * max|W|.
    static Witness create(const BipartiteOperator &op, WitnessProvenance prov,
                          int restarts = 64, std::uint64_t seed = 0) {
        Witness w;
        w.op_ = op;
        w.prov_ = prov;
        double scale = std::max(max_abs(op.matrix()), 1e-300);
        EigenSystem es = hermitian_eig(op.hermitian());
        w.minEig_ = es.eigenvalues(0);
        w.minEigvec_ = es.eigenvectors.col(0);
        if (w.minEig_ >= -1e-10 * scale)
            throw NotAWitness("Witness: operator is positive semidefinite");
        ProductExtremum e = min_product_expectation(op, restarts, seed);
        w.ev_.minProductExpectation = e.value;
        w.ev_.restarts = restarts;
        w.ev_.seed = seed;
        w.ev_.threshold = -1e-8 * scale;
        if (e.value < w.ev_.threshold)
            throw NotAWitness("Witness: block positivity evidence failed (min product expectation " +
                              std::to_string(e.value) + ")");
        return w;
    }

    const BipartiteOperator &op() const { return op_; }
    const Mat &matrix() const { return op_.matrix(); }
    int dimA() const { return op_.dimA(); }
    int dimB() const { return op_.dimB(); }
    WitnessProvenance provenance() const { return prov_; }
    const BlockPositivityEvidence &evidence() const { return ev_; }
    double minEigenvalue() const { return minEig_; }
    const Vec &minEigenvector() const { return minEigvec_; }
    bool isReal(double tol = 0.0) const { return op_.isReal(tol); }

  private:
    BipartiteOperator op_;
    WitnessProvenance prov_ = WitnessProvenance::User;
    BlockPositivityEvidence ev_;
    double minEig_ = 0.0;
    Vec minEigvec_;
};

struct DetectionResult {
    bool detected = false;
    double value = 0.0;  // tr(W rho)
};

/// tr(W rho) < -delta test.
inline DetectionResult detects(const Witness &w, const DensityMatrix &rho, double delta = 1e-10) {
    if (delta <= 0) throw InvalidInput("detects: delta must be positive");
    if (w.dimA() != rho.dimA() || w.dimB() != rho.dimB())
        throw InvalidInput("detects: dimension mismatch");
    double v = (w.matrix() * rho.matrix()).trace().real();
    return {v < -delta, v};
}

enum class WtTag { EW, PSD };

struct WtClassification {
    WtTag tag = WtTag::PSD;
    double minEigenvalue = 0.0;
    Mat wt;
};

/// W_t = t W + (1-t) W*. Block positivity is inherited from W, so W_t is an
/// EW exactly when it is not PSD.
inline WtClassification wt_mix(const Witness &w, double t) {
    if (t < 0.0 || t > 1.0) throw InvalidInput("wt_mix: t outside [0,1]");
    Mat wt = t * w.matrix() + (1.0 - t) * w.matrix().conjugate();
    WtClassification c;
    c.wt = wt;
    EigenSystem es = hermitian_eig(HermitianOperator(wt));
    c.minEigenvalue = es.eigenvalues(0);
    double scale = std::max(max_abs(wt), 1e-300);
    c.tag = (c.minEigenvalue < -1e-10 * scale) ? WtTag::EW : WtTag::PSD;
    return c;
}

enum class WPlusTag { EW, PptState, NptState };

struct WPlusClass {
    WPlusTag tag = WPlusTag::EW;
    double minEigenvalue = 0.0;     // of W+
    double pptMinEigenvalue = 0.0;  // of (W+)^Gamma, meaningful for the state tags
};

/// The real part of an EW is either an EW or a state; a state is further
/// split by the PPT test.
inline WPlusClass classify_w_plus(const Witness &w) {
    BipartiteOperator wp = real_part(w.op());
    WPlusClass c;
    EigenSystem es = hermitian_eig(wp.hermitian());
    c.minEigenvalue = es.eigenvalues(0);
    double scale = std::max(max_abs(wp.matrix()), 1e-300);
    if (c.minEigenvalue < -1e-10 * scale) {
        c.tag = WPlusTag::EW;
        return c;
    }
    DensityMatrix state(wp, 1e-9 * scale + 1e-12);
    PptReport r = is_ppt(state);
    c.pptMinEigenvalue = r.minEigenvalue;
    c.tag = r.ppt ? WPlusTag::PptState : WPlusTag::NptState;
    return c;
}

struct NptWitness {
    Witness witness;          // |psi1><psi1|^Gamma for the most-negative eigenvector
    Vec pureVector;           // psi1
    SchmidtForm schmidtForm;  // certifies LU equivalence to a real witness
    double traceValue = 0.0;  // tr(W rho) < 0
};

/// Witness construction from the most-negative eigenvector of rho^Gamma.
inline NptWitness witness_from_npt(const DensityMatrix &rho, double tol = 1e-9,
                                   int restarts = 64, std::uint64_t seed = 0) {
    PptReport r = is_ppt(rho, tol);
    if (r.ppt) throw NotApplicable("witness_from_npt: state is PPT");
    Vec psi = r.eigenvector;
    BipartiteOperator proj(psi * psi.adjoint(), rho.dimA(), rho.dimB());
    BipartiteOperator w = partial_transpose(proj);
    NptWitness out;
    out.witness = Witness::create(w, WitnessProvenance::PartialTransposeOfPure, restarts, seed);
    out.pureVector = psi;
    out.schmidtForm = schmidt(psi, rho.dimA(), rho.dimB());
    out.traceValue = (w.matrix() * rho.matrix()).trace().real();
    return out;
}

namespace detail {

// Local unitaries rotating the Schmidt bases of |y> to the computational
// basis, so (U (x) V)|y> = sum_j c_j |j,j>.
inline std::pair<Mat, Mat> schmidt_rotation(const SchmidtForm &sf) {
    return {sf.leftBasis.adjoint(), sf.rightBasis.adjoint()};
}

// Restrict an (m n) x (m n) matrix to the C^p (x) C^p corner.
inline Mat corner_restrict(const Mat &m, int dimA, int dimB, int p) {
    (void)dimA;
    Mat out(p * p, p * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
                for (int l = 0; l < p; ++l)
                    out(i * p + j, k * p + l) = m(i * dimB + j, k * dimB + l);
    return out;
}

// Orthonormal basis of the strictly negative eigenspace, each vector scored
// by its Schmidt rank; returns the one of minimal rank.
inline std::pair<Vec, SchmidtForm> min_schmidt_negative_vector(const HermitianOperator &h,
                                                              int dimA, int dimB,
                                                              double eigTol, double schmidtTol) {
    EigenSystem es = hermitian_eig(h);
    double scale = std::max(max_abs(h.matrix()), 1e-300);
    int bestRank = dimA * dimB + 1;
    Vec bestVec;
    SchmidtForm bestForm;
    for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
        if (es.eigenvalues(i) >= -eigTol * scale) break;
        SchmidtForm sf = schmidt(es.eigenvectors.col(i), dimA, dimB);
        int r = sf.rank(schmidtTol);
        if (r < bestRank) {
            bestRank = r;
            bestVec = es.eigenvectors.col(i);
            bestForm = sf;
        }
    }
    if (bestVec.size() == 0) throw NotAWitness("no negative eigenvector found");
    return {bestVec, bestForm};
}

} // namespace detail

struct ProjectedWitness {
    Witness witness;  // on C^p (x) C^p
    Mat U, V;         // rotation applied before the corner projection
    int p = 0;
    Vec chosenVector;          // the negative eigenvector used
    double cornerExpectation = 0.0;  // < 0 on the rotated Schmidt vector
};

/// Local projection of a witness to C^p (x) C^p, p = minimal Schmidt rank
/// over an orthonormal basis of the negative eigenspace (a documented
/// under-approximation of the infimum over the whole eigenspace).
inline ProjectedWitness project_witness(const Witness &w, int restarts = 64,
                                        std::uint64_t seed = 0) {
    auto [y, sf] = detail::min_schmidt_negative_vector(w.op().hermitian(), w.dimA(), w.dimB(),
                                                       1e-10, 1e-8);
    int p = sf.rank(1e-8);
    auto [u, v] = detail::schmidt_rotation(sf);
    Mat rotated = Eigen::kroneckerProduct(u, v).eval() * w.matrix() *
                  Eigen::kroneckerProduct(u, v).eval().adjoint();
    Mat corner = detail::corner_restrict(rotated, w.dimA(), w.dimB(), p);
    ProjectedWitness out;
    out.U = u;
    out.V = v;
    out.p = p;
    out.chosenVector = y;
    Vec lam(p * p);
    lam.setZero();
    for (int j = 0; j < p; ++j) lam(j * p + j) = sf.coefficients(j);
    out.cornerExpectation = (lam.adjoint() * corner * lam)(0, 0).real();
    out.witness = Witness::create(BipartiteOperator(corner, p, p), WitnessProvenance::Projected,
                                  restarts, seed);
    return out;
}

struct ProjectedState {
    DensityMatrix state;  // on C^p (x) C^p, renormalized
    Mat U, V;
    int p = 0;
    double normFactor = 1.0;  // trace before renormalization
};

/// Local projection of an NPT state to an NPT state on C^p (x) C^p via the
/// partially transposed product rotation: (P (X^G)† rho X^G P)^G = P X rho^G X† P.
inline ProjectedState project_npt(const DensityMatrix &rho, double tol = 1e-9) {
    BipartiteOperator g = partial_transpose(rho.base());
    PptReport r = is_ppt(rho, tol);
    if (r.ppt) throw NotApplicable("project_npt: state is PPT");
    auto [y, sf] = detail::min_schmidt_negative_vector(g.hermitian(), rho.dimA(), rho.dimB(),
                                                       tol, 1e-8);
    int p = sf.rank(1e-8);
    auto [u, v] = detail::schmidt_rotation(sf);
    // X = U (x) V, X^Gamma = U^T (x) V
    Mat xg = Eigen::kroneckerProduct(u.transpose().eval(), v).eval();
    Mat moved = xg.adjoint() * rho.matrix() * xg;
    Mat corner = detail::corner_restrict(moved, rho.dimA(), rho.dimB(), p);
    ProjectedState out;
    out.U = u;
    out.V = v;
    out.p = p;
    BipartiteOperator cornerOp(corner, p, p);
    out.normFactor = cornerOp.trace();
    out.state = DensityMatrix(cornerOp);
    return out;
}

struct SloccBridgeResult {
    bool inElu = false;
    Mat U, V;  // unitary polar factors certifying LU membership when inElu
    double imagNorm = 0.0;
};

/// SLOCC-to-LU bridge: if (|A| (x) |B|) W (|A| (x) |B|) stays real, the
/// unitary polar factors of A, B move the SLOCC conjugate into the LU orbit
/// of a real witness.
inline SloccBridgeResult slocc_realness_bridge(const Witness &wr, const Mat &a, const Mat &b,
                                               double tol = 1e-10) {
    if (!wr.isReal(1e-12 * std::max(1.0, max_abs(wr.matrix()))))
        throw InvalidInput("slocc_realness_bridge: witness is not real");
    auto [ua, absA] = polar_decompose(a);
    auto [ub, absB] = polar_decompose(b);
    Mat k = Eigen::kroneckerProduct(absA, absB).eval();
    Mat moved = k * wr.matrix() * k;
    SloccBridgeResult out;
    out.imagNorm = max_abs(moved.imag());
    out.inElu = out.imagNorm < tol * std::max(1.0, max_abs(moved));
    if (out.inElu) {
        out.U = ua;
        out.V = ub;
    }
    return out;
}

struct DecomposableOperator {
    BipartiteOperator w;  // X^Gamma + Y
    BipartiteOperator x, y;
};

/// Constructive direction of decomposability: W = X^Gamma + Y from PSD parts.
inline DecomposableOperator decomposable_from_parts(const BipartiteOperator &x,
                                                    const BipartiteOperator &y) {
    auto check_psd = [](const BipartiteOperator &m, const char *name) {
        EigenSystem es = hermitian_eig(m.hermitian());
        double scale = std::max(max_abs(m.matrix()), 1e-300);
        if (es.eigenvalues(0) < -1e-10 * scale)
            throw InvalidInput(std::string("decomposable_from_parts: ") + name + " not PSD");
    };
    check_psd(x, "X");
    check_psd(y, "Y");
    if (x.dimA() != y.dimA() || x.dimB() != y.dimB())
        throw InvalidInput("decomposable_from_parts: dimension mismatch");
    DecomposableOperator out;
    out.x = x;
    out.y = y;
    out.w = BipartiteOperator(partial_transpose(x).matrix() + y.matrix(), x.dimA(), x.dimB());
    return out;
}

} // namespace rewkit
