// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rewkit/linalg.hpp"

namespace rewkit {

/// Product unitary U (x) V stored together with the
/// orthogonal-diagonal-orthogonal factorization of each factor.
struct LocalUnitary {
    Mat U, V;
    RMat uLeft, uRight;   // U = uLeft * diag(uPhases) * uRight
    Vec uPhases;
    RMat vLeft, vRight;   // V = vLeft * diag(vPhases) * vRight
    Vec vPhases;

    static LocalUnitary from(const Mat &u, const Mat &v) {
        LocalUnitary lu;
        lu.U = u;
        lu.V = v;
        std::tie(lu.uLeft, lu.uPhases, lu.uRight) = unitary_od_decompose(u);
        std::tie(lu.vLeft, lu.vPhases, lu.vRight) = unitary_od_decompose(v);
        return lu;
    }

    static LocalUnitary identity(int dimA, int dimB) {
        return from(Mat::Identity(dimA, dimA), Mat::Identity(dimB, dimB));
    }
};

} // namespace rewkit
