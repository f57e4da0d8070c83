// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "rewkit/states.hpp"

using namespace rewkit;

TEST_CASE("bell phase state basics", "[states]") {
    DensityMatrix rho = bell_phase_state(0.7);
    REQUIRE(std::abs(rho.matrix().trace().real() - 1.0) < 1e-14);
    REQUIRE_FALSE(is_ppt(rho).ppt);
    // theta = pi/2 has a diagonal (hence separable) real part
    DensityMatrix rp(real_part(bell_phase_state(M_PI / 2).base()));
    REQUIRE(max_abs(rp.matrix() - rp.matrix().diagonal().asDiagonal().toDenseMatrix()) < 1e-14);
}

TEST_CASE("witness theta real part spectrum", "[states]") {
    for (double th : {0.0, M_PI / 6, M_PI / 4, M_PI / 3, 2.0, 5.0}) {
        Witness w = witness_theta(th);
        EigenSystem es = hermitian_eig(real_part(w.op()).hermitian());
        double c = std::abs(std::cos(th)) / 2.0;
        RVec expect(4);
        expect << -c, c, 0.5, 0.5;
        std::sort(expect.data(), expect.data() + 4);
        REQUIRE(max_abs(es.eigenvalues - expect) < 1e-10);
    }
}

TEST_CASE("h counterexample has two negative eigenvalues", "[states]") {
    HermitianOperator h = h_counterexample();
    auto [neg, zero, pos] = inertia(h);
    REQUIRE(neg == 2);
    REQUIRE(zero == 0);
    REQUIRE(pos == 2);
    // its real part is exactly the theta = 0 witness
    Mat hp = h.matrix().real().cast<cplx>();
    REQUIRE(max_abs(hp - witness_theta(0.0).matrix()) < 1e-14);
}

TEST_CASE("upb quintuple is orthonormal for random angles", "[states]") {
    auto rng = make_rng(31);
    std::uniform_real_distribution<double> u(0.1, M_PI / 2 - 0.1);
    for (int trial = 0; trial < 10; ++trial) {
        UpbAngles ang{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        UpbFamily f = upb_family(ang);
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                cplx ov = (f.productVector(i).adjoint() * f.productVector(j))(0, 0);
                REQUIRE(std::abs(ov - (i == j ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }
}

TEST_CASE("upb state is PPT entangled of rank 4", "[states]") {
    UpbFamily f = upb_family(generic_upb_angles());
    Mat p = upb_projector(f);
    REQUIRE(max_abs(p * p - p) < 1e-12);
    DensityMatrix rho = upb_state(f);
    REQUIRE(is_ppt(rho).ppt);
    EigenSystem es = hermitian_eig(rho.base().hermitian());
    int rank = 0, kernel = 0;
    for (int i = 0; i < 9; ++i) (es.eigenvalues(i) > 1e-10 ? rank : kernel)++;
    REQUIRE(rank == 4);
    REQUIRE(kernel == 5);
}

TEST_CASE("upb family rejects a vanishing normalizer", "[states]") {
    UpbAngles bad = generic_upb_angles();
    bad.gammaA = M_PI / 2;
    bad.thetaA = M_PI / 2;
    REQUIRE_THROWS_AS(upb_family(bad), DegenerateParameters);
}

TEST_CASE("dephasing makes the upb state real without moving its spectrum", "[states]") {
    UpbFamily f = upb_family(generic_upb_angles());
    DephasedUpb dp = dephase_upb(f);
    REQUIRE(max_abs(dp.sigma.matrix().imag()) < 1e-12);
    EigenSystem a = hermitian_eig(upb_state(f).base().hermitian());
    EigenSystem b = hermitian_eig(dp.sigma.base().hermitian());
    REQUIRE(max_abs(a.eigenvalues - b.eigenvalues) < 1e-12);
    REQUIRE(is_ppt(dp.sigma).ppt);
}

TEST_CASE("rank4 family: real, PSD, rank 4, PT invariant", "[states]") {
    auto rng = make_rng(32);
    std::uniform_real_distribution<double> u(0.2, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        DensityMatrix s = rank4_state({u(rng), u(rng), u(rng), u(rng)});
        REQUIRE(s.isReal(1e-12));
        EigenSystem es = hermitian_eig(s.base().hermitian());
        REQUIRE(es.eigenvalues(0) > -1e-12);
        int rank = 0;
        for (int i = 0; i < 9; ++i)
            if (es.eigenvalues(i) > 1e-10) rank++;
        REQUIRE(rank == 4);
        REQUIRE(max_abs(partial_transpose(s.base()).matrix() - s.matrix()) < 1e-12);
    }
    REQUIRE_THROWS_AS(rank4_state({-1.0, 1.0, 1.0, 1.0}), InvalidInput);
}

TEST_CASE("quqart pair", "[states]") {
    QuqartPair q = quqart_pair();
    REQUIRE(std::abs(q.rho.normFactor() - 14.0) < 1e-12);
    REQUIRE(is_ppt(q.rho).ppt);
    REQUIRE(is_ppt(q.sigma).ppt);
    REQUIRE(q.rho.isReal(1e-12));
    REQUIRE_FALSE(q.sigma.isReal(1e-12));
    // sigma is the stored LU conjugate of rho
    Mat moved = apply_local(q.rho.base(), q.lu.U, q.lu.V).matrix();
    REQUIRE(max_abs(moved - q.sigma.matrix()) < 1e-13);
    // the real part of sigma drops all cross terms between the two
    // entangled pieces and the product part stays put
    DensityMatrix sp(real_part(q.sigma.base()));
    Vec g1 = Vec::Zero(16), g2 = Vec::Zero(16);
    g1(0) = g1(5) = 1.0;   // |00> + |11>
    g2(1) = g2(4) = 1.0;   // |01> + |10>
    Mat expect = g1 * g1.adjoint() + g2 * g2.adjoint();
    expect(10, 10) += 1.0;  // |22><22|
    expect(15, 15) += 1.0;  // |33><33|
    int prods[8] = {2, 8, 6, 9, 3, 12, 7, 13};
    for (int idx : prods) expect(idx, idx) += 1.0;
    REQUIRE(max_abs(sp.matrix() - expect / 14.0) < 1e-14);
}

TEST_CASE("support reduction strips unused local dimensions", "[states]") {
    // embed a two-qubit state into 3x4 with empty rows and columns
    auto rng = make_rng(33);
    DensityMatrix small(BipartiteOperator(random_density(rng, 4), 2, 2));
    Mat embedA = Mat::Zero(3, 2), embedB = Mat::Zero(4, 2);
    embedA(0, 0) = embedA(2, 1) = 1.0;
    embedB(1, 0) = embedB(3, 1) = 1.0;
    DensityMatrix big(apply_local(small.base(), embedA, embedB));
    SupportReduction sr = support_reduce(big);
    REQUIRE(sr.p == 2);
    REQUIRE(sr.q == 2);
    EigenSystem a = hermitian_eig(small.base().hermitian());
    EigenSystem b = hermitian_eig(sr.reduced.base().hermitian());
    REQUIRE(max_abs(a.eigenvalues - b.eigenvalues) < 1e-10);
}

TEST_CASE("diagonal real part pattern scan", "[states]") {
    // bell phase at pi/2: rho+ is diagonal with zeros at |01> and |10>
    DensityMatrix rho = bell_phase_state(M_PI / 2);
    // NPT input is rejected
    REQUIRE_THROWS_AS(diagonal_realpart_pattern(rho), NotApplicable);
    ZeroPatternReport rep = diagonal_realpart_pattern(maximally_mixed(3, 3));
    REQUIRE(rep.patternHolds);
    REQUIRE_FALSE(rep.permutationForm);  // every diagonal entry is nonzero
    // a classically correlated diagonal state has permutation shape and
    // coincides with its real part
    Mat d = Mat::Zero(4, 4);
    d(0, 0) = d(3, 3) = 0.5;
    ZeroPatternReport perm = diagonal_realpart_pattern(DensityMatrix(BipartiteOperator(d, 2, 2)));
    REQUIRE(perm.patternHolds);
    REQUIRE(perm.permutationForm);
    REQUIRE(perm.equalsRealPart);
}
