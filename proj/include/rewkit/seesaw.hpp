// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rewkit/bipartite.hpp"
#include "rewkit/rng.hpp"

namespace rewkit {

struct ProductExtremum {
    double value = 0.0;
    Vec a;  // unit vector on A
    Vec b;  // unit vector on B
};

namespace detail {

// (<a| (x) I) M (|a> (x) I), an operator on B.
inline Mat contract_a(const Mat &m, const Vec &a, int dimB) {
    const int da = static_cast<int>(a.size());
    Mat out = Mat::Zero(dimB, dimB);
    for (int i = 0; i < da; ++i)
        for (int k = 0; k < da; ++k)
            out += std::conj(a(i)) * a(k) * m.block(i * dimB, k * dimB, dimB, dimB);
    return out;
}

// (I (x) <b|) M (I (x) |b>), an operator on A.
inline Mat contract_b(const Mat &m, const Vec &b, int dimA) {
    const int db = static_cast<int>(b.size());
    Mat out = Mat::Zero(dimA, dimA);
    for (int i = 0; i < dimA; ++i)
        for (int k = 0; k < dimA; ++k)
            out(i, k) = (b.adjoint() * m.block(i * db, k * db, db, db) * b)(0, 0);
    return out;
}

inline Vec top_eigvec(const Mat &h, double &val) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
    const Eigen::Index last = h.rows() - 1;
    val = es.eigenvalues()(last);
    return es.eigenvectors().col(last);
}

} // namespace detail

/// Alternating eigenvector maximization of <a,b|M|a,b> over product vectors.
/// Monotone nondecreasing per half-step; deterministic for a fixed seed.
/// Heuristic: returns the best local maximum over `restarts` seeded starts.
inline ProductExtremum max_product_expectation(const BipartiteOperator &m, int restarts = 64,
                                               std::uint64_t seed = 0, int maxSweeps = 100) {
    if (restarts < 1) throw InvalidInput("max_product_expectation: restarts must be >= 1");
    const int da = m.dimA(), db = m.dimB();
    ProductExtremum best;
    bool haveBest = false;
    for (int r = 0; r < restarts; ++r) {
        auto rng = make_rng(substream_seed(seed, static_cast<std::uint64_t>(r)));
        Vec a = random_unit_vector(rng, da);
        Vec b;
        double val = -std::numeric_limits<double>::infinity();
        for (int sweep = 0; sweep < maxSweeps; ++sweep) {
            double vb = 0, va = 0;
            b = detail::top_eigvec(detail::contract_a(m.matrix(), a, db), vb);
            a = detail::top_eigvec(detail::contract_b(m.matrix(), b, da), va);
            if (va <= val + 1e-13) { val = std::max(val, va); break; }
            val = va;
        }
        if (!haveBest || val > best.value) {
            best.value = val;
            best.a = a;
            best.b = b;
            haveBest = true;
        }
    }
    return best;
}

/// Minimum of <a,b|M|a,b> over product vectors (same heuristic, negated).
inline ProductExtremum min_product_expectation(const BipartiteOperator &m, int restarts = 64,
                                               std::uint64_t seed = 0, int maxSweeps = 100) {
    BipartiteOperator neg(-m.matrix(), m.dimA(), m.dimB());
    ProductExtremum e = max_product_expectation(neg, restarts, seed, maxSweeps);
    e.value = -e.value;
    return e;
}

} // namespace rewkit
