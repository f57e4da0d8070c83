// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "rewkit/bipartite.hpp"
#include "rewkit/rng.hpp"

using namespace rewkit;

namespace {

BipartiteOperator random_op(std::mt19937_64 &rng, int m, int n) {
    return BipartiteOperator(random_hermitian(rng, m * n), m, n);
}

} // namespace

TEST_CASE("partial transpose is an involution and preserves the trace", "[bipartite]") {
    auto rng = make_rng(21);
    for (auto [m, n] : {std::pair{2, 2}, {2, 3}, {3, 3}, {4, 2}}) {
        BipartiteOperator op = random_op(rng, m, n);
        BipartiteOperator g = partial_transpose(op);
        REQUIRE(max_abs(partial_transpose(g).matrix() - op.matrix()) < 1e-14);
        REQUIRE(std::abs(g.trace() - op.trace()) < 1e-12);
    }
}

TEST_CASE("trace identities on random instances", "[bipartite]") {
    auto rng = make_rng(22);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 2 + static_cast<int>(rng() % 3), n = 2 + static_cast<int>(rng() % 2);
        Mat a = random_hermitian(rng, m * n), b = random_hermitian(rng, m * n);
        // tr(MN) = tr(N^T M^T)
        REQUIRE(std::abs((a * b).trace() - (b.transpose() * a.transpose()).trace()) < 1e-12);
        BipartiteOperator opA(a, m, n), opB(b, m, n);
        // tr(M N^G) = tr(M^G N)
        REQUIRE(std::abs((a * partial_transpose(opB).matrix()).trace() -
                         (partial_transpose(opA).matrix() * b).trace()) < 1e-12);
        // (M+)^G = (M^G)+
        REQUIRE(max_abs(partial_transpose(real_part(opA)).matrix() -
                        real_part(partial_transpose(opA)).matrix()) < 1e-14);
        // (M*)^G = (M^G)*
        REQUIRE(max_abs(partial_transpose(conjugate(opA)).matrix() -
                        conjugate(partial_transpose(opA)).matrix()) < 1e-14);
    }
}

TEST_CASE("apply_local matches the Kronecker product", "[bipartite]") {
    auto rng = make_rng(23);
    BipartiteOperator op = random_op(rng, 2, 3);
    Mat a = random_unitary(rng, 2), b = random_unitary(rng, 3);
    Mat x = Eigen::kroneckerProduct(a, b).eval();
    BipartiteOperator moved = apply_local(op, a, b);
    REQUIRE(max_abs(moved.matrix() - x * op.matrix() * x.adjoint()) < 1e-13);
}

TEST_CASE("apply_local supports rectangular isometries", "[bipartite]") {
    auto rng = make_rng(24);
    BipartiteOperator op = random_op(rng, 3, 3);
    Mat iso = random_unitary(rng, 3).leftCols(2).adjoint();  // 2x3
    BipartiteOperator reduced = apply_local(op, iso, Mat::Identity(3, 3));
    REQUIRE(reduced.dimA() == 2);
    REQUIRE(reduced.dimB() == 3);
}

TEST_CASE("partial traces agree with product structure", "[bipartite]") {
    auto rng = make_rng(25);
    Mat a = random_hermitian(rng, 3), b = random_hermitian(rng, 2);
    BipartiteOperator op(Eigen::kroneckerProduct(a, b).eval(), 3, 2);
    HermitianOperator ta = partial_trace(op, Side::B);
    HermitianOperator tb = partial_trace(op, Side::A);
    REQUIRE(max_abs(ta.matrix() - b.trace() * a) < 1e-12);
    REQUIRE(max_abs(tb.matrix() - a.trace() * b) < 1e-12);
    BipartiteOperator generic = random_op(rng, 3, 2);
    REQUIRE(std::abs(partial_trace(generic, Side::B).matrix().trace() - generic.trace()) < 1e-12);
}

TEST_CASE("swap_sides is a spectrum-preserving involution", "[bipartite]") {
    auto rng = make_rng(26);
    BipartiteOperator op = random_op(rng, 2, 3);
    BipartiteOperator sw = swap_sides(op);
    REQUIRE(sw.dimA() == 3);
    REQUIRE(sw.dimB() == 2);
    REQUIRE(max_abs(swap_sides(sw).matrix() - op.matrix()) < 1e-14);
    EigenSystem e1 = hermitian_eig(op.hermitian());
    EigenSystem e2 = hermitian_eig(sw.hermitian());
    REQUIRE(max_abs(e1.eigenvalues - e2.eigenvalues) < 1e-12);
}

TEST_CASE("DensityMatrix normalizes and validates", "[bipartite]") {
    auto rng = make_rng(27);
    Mat m = random_density(rng, 6) * 3.7;
    DensityMatrix rho(BipartiteOperator(m, 2, 3));
    REQUIRE(std::abs(rho.matrix().trace().real() - 1.0) < 1e-12);
    REQUIRE(std::abs(rho.normFactor() - 3.7) < 1e-12);
    Mat neg = Mat::Identity(4, 4);
    neg(0, 0) = -1.0;
    REQUIRE_THROWS_AS(DensityMatrix(BipartiteOperator(neg, 2, 2)), InvalidInput);
}

TEST_CASE("is_ppt trichotomy examples", "[bipartite]") {
    // maximally entangled: NPT; maximally mixed: PPT
    Vec psi = Vec::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    DensityMatrix ent(BipartiteOperator(Mat(psi * psi.adjoint()), 2, 2));
    REQUIRE_FALSE(is_ppt(ent).ppt);
    REQUIRE(is_ppt(maximally_mixed(2, 2)).ppt);
    // the PPT eigenvector payload matches the reported eigenvalue
    PptReport r = is_ppt(ent);
    Mat g = partial_transpose(ent.base()).matrix();
    REQUIRE(std::abs((r.eigenvector.adjoint() * g * r.eigenvector)(0, 0).real() -
                     r.minEigenvalue) < 1e-12);
}

TEST_CASE("PPT is stable under local unitaries and conjugation", "[bipartite]") {
    auto rng = make_rng(28);
    for (int trial = 0; trial < 20; ++trial) {
        DensityMatrix rho(BipartiteOperator(random_density(rng, 9), 3, 3));
        bool ppt = is_ppt(rho).ppt;
        Mat u = random_unitary(rng, 3), v = random_unitary(rng, 3);
        DensityMatrix moved(apply_local(rho.base(), u, v));
        REQUIRE(is_ppt(moved).ppt == ppt);
        if (ppt) {
            // the real part of any LU conjugate of a PPT state is PPT
            DensityMatrix rp(real_part(moved.base()));
            REQUIRE(is_ppt(rp, 1e-8).ppt);
        }
    }
}
