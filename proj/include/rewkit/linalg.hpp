// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "rewkit/errors.hpp"

namespace rewkit {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Mat &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

/// Hermitian operator. Construction symmetrizes (H + H†)/2 so the stored
/// matrix is Hermitian to machine precision, and rejects non-finite input.
class HermitianOperator {
  public:
    HermitianOperator() = default;

    explicit HermitianOperator(const Mat &h) {
        if (h.rows() != h.cols()) throw InvalidInput("HermitianOperator: matrix not square");
        if (!all_finite(h)) throw InvalidInput("HermitianOperator: non-finite entries");
        mat_ = 0.5 * (h + h.adjoint());
    }

    int dim() const { return static_cast<int>(mat_.rows()); }
    const Mat &matrix() const { return mat_; }

  private:
    Mat mat_;
};

struct EigenSystem {
    RVec eigenvalues;  // ascending
    Mat eigenvectors;  // orthonormal columns, matching order
};

namespace detail {

// Deterministic phase fix: rotate each eigenvector so its largest-magnitude
// entry is real and positive.
inline void fix_column_phases(Mat &v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            double a = std::abs(v(i, j));
            if (a > best + 1e-15) { best = a; imax = i; }
        }
        cplx p = v(imax, j);
        if (std::abs(p) > 0) v.col(j) *= std::conj(p) / std::abs(p);
    }
}

inline bool lex_less_real(const Vec &a, const Vec &b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() < b(i).real() - 1e-14) return true;
        if (a(i).real() > b(i).real() + 1e-14) return false;
    }
    return false;
}

} // namespace detail

/// Full spectral decomposition. Eigenvalues ascending; exact ties broken by
/// lexicographic order of the eigenvectors' real parts after a deterministic
/// phase fix, so output is reproducible.
inline EigenSystem hermitian_eig(const HermitianOperator &h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h.matrix());
    if (es.info() != Eigen::Success) throw InvalidInput("hermitian_eig: solver failed");
    Mat v = es.eigenvectors();
    RVec w = es.eigenvalues();
    detail::fix_column_phases(v);
    std::vector<int> idx(static_cast<size_t>(w.size()));
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (w(a) != w(b)) return w(a) < w(b);
        return detail::lex_less_real(v.col(a), v.col(b));
    });
    EigenSystem out;
    out.eigenvalues.resize(w.size());
    out.eigenvectors.resize(v.rows(), v.cols());
    for (size_t k = 0; k < idx.size(); ++k) {
        out.eigenvalues(static_cast<Eigen::Index>(k)) = w(idx[k]);
        out.eigenvectors.col(static_cast<Eigen::Index>(k)) = v.col(idx[k]);
    }
    return out;
}

/// H = Hplus + i*Hminus with Hplus real symmetric and Hminus real
/// skew-symmetric. The split is exact arithmetic on the stored entries.
inline std::pair<RMat, RMat> real_imag_split(const HermitianOperator &h) {
    RMat hp = h.matrix().real();
    RMat hm = h.matrix().imag();
    hp = 0.5 * (hp + hp.transpose());
    hm = 0.5 * (hm - hm.transpose());
    hm.diagonal().setZero();
    return {hp, hm};
}

/// Sign counts of the spectrum against +-tol. tol < 0 selects the default
/// 1e-10 * max|H|.
inline std::tuple<int, int, int> inertia(const HermitianOperator &h, double tol = -1.0) {
    double scale = h.dim() > 0 ? max_abs(h.matrix()) : 0.0;
    if (tol < 0) tol = 1e-10 * std::max(scale, 1e-300);
    EigenSystem es = hermitian_eig(h);
    int neg = 0, zero = 0, pos = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
        double w = es.eigenvalues(i);
        if (w < -tol) ++neg;
        else if (w > tol) ++pos;
        else ++zero;
    }
    return {neg, zero, pos};
}

struct SchmidtForm {
    RVec coefficients;  // nonnegative, descending, length min(m,n)
    Mat leftBasis;      // m x m orthonormal columns
    Mat rightBasis;     // n x n orthonormal columns
    int dimA = 0;
    int dimB = 0;

    int rank(double tol = 1e-10) const {
        double c0 = coefficients.size() ? coefficients(0) : 0.0;
        int r = 0;
        for (Eigen::Index i = 0; i < coefficients.size(); ++i)
            if (coefficients(i) > tol * std::max(c0, 1e-300)) ++r;
        return r;
    }
};

/// Schmidt decomposition of a bipartite vector (row-major, A slow index):
/// v = sum_j c_j |a_j> (x) |b_j>.
inline SchmidtForm schmidt(const Vec &v, int m, int n) {
    if (v.size() != static_cast<Eigen::Index>(m) * n) throw InvalidInput("schmidt: length != m*n");
    if (v.norm() == 0.0) throw InvalidInput("schmidt: zero vector");
    Mat c(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = v(i * n + j);
    Eigen::JacobiSVD<Mat> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtForm out;
    out.coefficients = svd.singularValues();
    out.leftBasis = svd.matrixU();
    // v_ij = sum_k s_k U(i,k) conj(V(j,k)), so the right Schmidt vectors are
    // the conjugated columns of V.
    out.rightBasis = svd.matrixV().conjugate();
    out.dimA = m;
    out.dimB = n;
    return out;
}

/// Polar decomposition A = U |A| with U unitary and |A| = sqrt(A† A).
inline std::pair<Mat, Mat> polar_decompose(const Mat &a) {
    if (a.rows() != a.cols()) throw InvalidInput("polar_decompose: matrix not square");
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVec &s = svd.singularValues();
    if (s(s.size() - 1) <= 1e-12 * std::max(1.0, s(0)))
        throw SingularInput("polar_decompose: singular input");
    Mat u = svd.matrixU() * svd.matrixV().adjoint();
    Mat absA = svd.matrixV() * s.asDiagonal() * svd.matrixV().adjoint();
    return {u, absA};
}

namespace detail {

// Real orthonormal basis of a conjugation-closed eigenspace spanned by the
// complex columns of X.
inline RMat real_basis_of_eigenspace(const Mat &x) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = x.cols();
    RMat cand(n, 2 * k);
    cand << x.real(), x.imag();
    Eigen::ColPivHouseholderQR<RMat> qr(cand);
    RMat q = qr.householderQ() * RMat::Identity(n, k);
    return q;
}

} // namespace detail

/// Factor a unitary U as V1 * D * V2 with V1, V2 real orthogonal and D
/// diagonal unitary. Works through the symmetric unitary U^T U, whose
/// eigenspaces are closed under complex conjugation and therefore admit real
/// orthonormal bases. D takes the principal square root branch (phases in
/// (-pi/2, pi/2]).
inline std::tuple<RMat, Vec, RMat> unitary_od_decompose(const Mat &u) {
    const Eigen::Index n = u.rows();
    if (u.rows() != u.cols()) throw InvalidInput("unitary_od_decompose: not square");
    if (max_abs(u.adjoint() * u - Mat::Identity(n, n)) > 1e-10)
        throw InvalidInput("unitary_od_decompose: input not unitary");

    Mat m = u.transpose() * u;  // unitary and complex symmetric
    Eigen::ComplexEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw InvalidInput("unitary_od_decompose: eig failed");
    Vec lam = es.eigenvalues();
    Mat vecs = es.eigenvectors();

    // cluster eigenvalues on the unit circle
    std::vector<int> order(static_cast<size_t>(n));
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::arg(lam(a)) < std::arg(lam(b));
    });

    const double clusterTol = 1e-7;
    RMat q(n, n);
    Eigen::Index col = 0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i + 1;
        while (j < order.size() && std::abs(lam(order[j]) - lam(order[j - 1])) < clusterTol) ++j;
        Mat x(n, static_cast<Eigen::Index>(j - i));
        for (size_t t = i; t < j; ++t) x.col(static_cast<Eigen::Index>(t - i)) = vecs.col(order[t]);
        RMat qb = detail::real_basis_of_eigenspace(x);
        q.middleCols(col, qb.cols()) = qb;
        col += qb.cols();
        i = j;
    }

    // symmetric orthogonalization polish: Q <- Q (Q^T Q)^{-1/2}
    Eigen::SelfAdjointEigenSolver<RMat> gs(q.transpose() * q);
    RMat inv_sqrt = gs.eigenvectors() *
                    gs.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix() *
                    gs.eigenvectors().transpose();
    q = q * inv_sqrt;

    // M = Q Lambda Q^T, so V2 = Q^T.
    Vec d(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        cplx lk = q.col(k).transpose() * (m * q.col(k).cast<cplx>());
        lk /= std::abs(lk);
        double half = 0.5 * std::arg(lk);
        if (half <= -M_PI / 2) half += M_PI;  // principal branch (-pi/2, pi/2]
        d(k) = std::polar(1.0, half);
    }
    RMat v2 = q.transpose();
    Mat v1c = u * q * d.conjugate().asDiagonal();
    RMat v1 = v1c.real();
    return {v1, d, v2};
}

} // namespace rewkit
