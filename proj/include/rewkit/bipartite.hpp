// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

#include "rewkit/linalg.hpp"

namespace rewkit {

inline Vec ket(int i, int d) {
    Vec v = Vec::Zero(d);
    v(i) = 1.0;
    return v;
}

inline Vec kron_vec(const Vec &a, const Vec &b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j) out(i * b.size() + j) = a(i) * b(j);
    return out;
}

/// Hermitian operator on C^m (x) C^n. Row-major index convention with system
/// A as the slow index: global index = i*n + j for |i>_A |j>_B.
class BipartiteOperator {
  public:
    BipartiteOperator() = default;

    BipartiteOperator(const Mat &m, int dimA, int dimB)
        : dimA_(dimA), dimB_(dimB), op_(HermitianOperator(m)) {
        if (dimA < 1 || dimB < 1) throw InvalidInput("BipartiteOperator: dims must be >= 1");
        if (m.rows() != static_cast<Eigen::Index>(dimA) * dimB)
            throw InvalidInput("BipartiteOperator: matrix dim != dimA*dimB");
    }

    int dimA() const { return dimA_; }
    int dimB() const { return dimB_; }
    int dim() const { return dimA_ * dimB_; }
    const Mat &matrix() const { return op_.matrix(); }
    const HermitianOperator &hermitian() const { return op_; }

    double trace() const { return matrix().trace().real(); }
    bool isReal(double tol = 0.0) const { return max_abs(matrix().imag()) <= tol; }

  private:
    int dimA_ = 0;
    int dimB_ = 0;
    HermitianOperator op_;
};

/// Transpose on subsystem A: block (i,k) of the result is block (k,i) of M.
inline BipartiteOperator partial_transpose(const BipartiteOperator &m) {
    const int a = m.dimA(), b = m.dimB();
    Mat out(m.dim(), m.dim());
    for (int i = 0; i < a; ++i)
        for (int k = 0; k < a; ++k)
            out.block(i * b, k * b, b, b) = m.matrix().block(k * b, i * b, b, b);
    return BipartiteOperator(out, a, b);
}

/// (A (x) B) M (A (x) B)†, with A of shape a' x a and B of shape b' x b.
inline BipartiteOperator apply_local(const BipartiteOperator &m, const Mat &a, const Mat &b) {
    if (a.cols() != m.dimA() || b.cols() != m.dimB())
        throw InvalidInput("apply_local: dimension mismatch");
    Mat x = Eigen::kroneckerProduct(a, b).eval();
    Mat out = x * m.matrix() * x.adjoint();
    return BipartiteOperator(out, static_cast<int>(a.rows()), static_cast<int>(b.rows()));
}

enum class Side { A, B };

/// Trace out one subsystem; trace is preserved.
inline HermitianOperator partial_trace(const BipartiteOperator &m, Side traced) {
    const int a = m.dimA(), b = m.dimB();
    if (traced == Side::B) {
        Mat out = Mat::Zero(a, a);
        for (int i = 0; i < a; ++i)
            for (int k = 0; k < a; ++k)
                out(i, k) = m.matrix().block(i * b, k * b, b, b).trace();
        return HermitianOperator(out);
    }
    Mat out = Mat::Zero(b, b);
    for (int i = 0; i < a; ++i) out += m.matrix().block(i * b, i * b, b, b);
    return HermitianOperator(out);
}

/// Exchange the two subsystems: <ji|M'|lk> = <ij|M|kl>.
inline BipartiteOperator swap_sides(const BipartiteOperator &m) {
    const int a = m.dimA(), b = m.dimB();
    Mat out(m.dim(), m.dim());
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j)
            for (int k = 0; k < a; ++k)
                for (int l = 0; l < b; ++l)
                    out(j * a + i, l * a + k) = m.matrix()(i * b + j, k * b + l);
    return BipartiteOperator(out, b, a);
}

/// Real part as a bipartite operator (the real part of a Hermitian matrix is
/// itself Hermitian).
inline BipartiteOperator real_part(const BipartiteOperator &m) {
    return BipartiteOperator(m.matrix().real().cast<cplx>(), m.dimA(), m.dimB());
}

inline BipartiteOperator conjugate(const BipartiteOperator &m) {
    return BipartiteOperator(m.matrix().conjugate(), m.dimA(), m.dimB());
}

/// Unit-trace PSD bipartite operator. Non-normalized input is accepted and
/// trace-normalized; the original trace is recorded.
class DensityMatrix {
  public:
    DensityMatrix() = default;

    explicit DensityMatrix(const BipartiteOperator &op, double psdTol = 1e-10) {
        double t = op.trace();
        if (t <= 0) throw InvalidInput("DensityMatrix: nonpositive trace");
        normFactor_ = t;
        base_ = BipartiteOperator(op.matrix() / t, op.dimA(), op.dimB());
        EigenSystem es = hermitian_eig(base_.hermitian());
        minEig_ = es.eigenvalues(0);
        if (minEig_ < -psdTol) throw InvalidInput("DensityMatrix: not positive semidefinite");
    }

    DensityMatrix(const Mat &m, int dimA, int dimB, double psdTol = 1e-10)
        : DensityMatrix(BipartiteOperator(m, dimA, dimB), psdTol) {}

    const BipartiteOperator &base() const { return base_; }
    const Mat &matrix() const { return base_.matrix(); }
    int dimA() const { return base_.dimA(); }
    int dimB() const { return base_.dimB(); }
    int dim() const { return base_.dim(); }
    double normFactor() const { return normFactor_; }
    double minEigenvalue() const { return minEig_; }
    bool isReal(double tol = 0.0) const { return base_.isReal(tol); }

  private:
    BipartiteOperator base_;
    double normFactor_ = 1.0;
    double minEig_ = 0.0;
};

struct PptReport {
    bool ppt = true;
    double minEigenvalue = 0.0;  // most negative eigenvalue of rho^Gamma
    Vec eigenvector;             // matching eigenvector (also set for PPT inputs)
};

/// PPT test: eigensolve the partial transpose. NPT verdicts carry the
/// most-negative eigenpair as a witness seed.
inline PptReport is_ppt(const DensityMatrix &rho, double tol = 1e-9) {
    if (tol <= 0) throw InvalidInput("is_ppt: tol must be positive");
    BipartiteOperator g = partial_transpose(rho.base());
    EigenSystem es = hermitian_eig(g.hermitian());
    PptReport r;
    r.minEigenvalue = es.eigenvalues(0);
    r.eigenvector = es.eigenvectors.col(0);
    r.ppt = r.minEigenvalue >= -tol;
    return r;
}

inline DensityMatrix maximally_mixed(int dimA, int dimB) {
    int d = dimA * dimB;
    return DensityMatrix(Mat::Identity(d, d) / static_cast<double>(d), dimA, dimB);
}

} // namespace rewkit
