// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "rewkit/local_unitary.hpp"
#include "rewkit/separability.hpp"
#include "rewkit/witness.hpp"

namespace rewkit {

inline int lu_param_count(int m, int n) { return m * (m - 1) / 2 + m + n * (n - 1) / 2 + n; }

/// Smooth chart for product unitaries: per side, a real skew-symmetric
/// generator (exponentiated to a rotation) followed by diagonal phases.
/// x = [skew_A, phases_A, skew_B, phases_B]; x = 0 gives the identity.
inline LocalUnitary lu_parameterize(const RVec &x, int m, int n) {
    if (x.size() != lu_param_count(m, n)) throw InvalidInput("lu_parameterize: wrong length");
    auto build = [](const double *skew, const double *phases, int d) {
        RMat k = RMat::Zero(d, d);
        int t = 0;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                k(i, j) = skew[t];
                k(j, i) = -skew[t];
                ++t;
            }
        Mat u = k.exp().cast<cplx>();
        for (int j = 0; j < d; ++j) u.col(j) *= std::polar(1.0, phases[j]);
        return u;
    };
    const int sa = m * (m - 1) / 2;
    const int sb = n * (n - 1) / 2;
    Mat u = build(x.data(), x.data() + sa, m);
    Mat v = build(x.data() + sa + m, x.data() + sa + m + sb, n);
    return LocalUnitary::from(u, v);
}

struct OrbitSearchOptions {
    int restarts = 16;
    int evalsPerRestart = 2000;   // budget unit: objective evaluations
    std::uint64_t seed = 0;
    int surrogateIters = 300;     // capped Frank-Wolfe iterations per evaluation
    int surrogateOracleRestarts = 2;
    double successThreshold = 2e-2;  // surrogate bound triggering immediate confirmation
    GilbertOptions confirm;          // full-budget rew_detectable on the incumbent
    double delta = 1e-10;
};

struct EluDetection {
    LocalUnitary lu;       // sigma = (U (x) V) rho (U (x) V)† has entangled real part
    Witness rewForSigma;   // real witness detecting sigma
    Witness pulledBack;    // (U (x) V)† W_r (U (x) V), detects rho
    double traceValue = 0.0;  // tr(pulledBack rho) = tr(W_r sigma)
    RVec params;              // chart coordinates of the local unitary found
};

namespace detail {

// Surrogate objective: capped Frank-Wolfe on the real part of the orbit
// point. An Entangled verdict maps above 1, otherwise the residual distance
// after the capped run, which decays toward zero on separable real parts.
inline double orbit_objective(const DensityMatrix &rho, const LocalUnitary &lu,
                              const OrbitSearchOptions &opt, SeparabilityVerdict *out = nullptr) {
    BipartiteOperator sigma = apply_local(rho.base(), lu.U, lu.V);
    DensityMatrix sigmaState(sigma);
    DensityMatrix sigmaPlus(real_part(sigma));
    GilbertOptions g;
    g.epsSep = opt.confirm.epsSep;
    g.maxIter = opt.surrogateIters;
    g.oracleRestarts = opt.surrogateOracleRestarts;
    g.witnessRestarts = 16;
    g.seed = substream_seed(opt.seed, 0x0b1ec7);
    SeparabilityVerdict v = gilbert(sigmaPlus, g);
    if (out) *out = v;
    if (v.tag == SepTag::Entangled) return 1.0 + v.lowerBound;
    return v.distanceTrace.empty() ? 0.0 : v.distanceTrace.back();
}

inline std::optional<EluDetection> confirm_orbit_point(const DensityMatrix &rho, const RVec &x,
                                                       const OrbitSearchOptions &opt) {
    LocalUnitary lu = lu_parameterize(x, rho.dimA(), rho.dimB());
    DensityMatrix sigma(apply_local(rho.base(), lu.U, lu.V));
    GilbertOptions g = opt.confirm;
    g.seed = substream_seed(opt.seed, 0xc0f1);
    RewVerdict rv = rew_detectable(sigma, g);
    if (rv.tag != RewTag::Yes) return std::nullopt;
    EluDetection det;
    det.lu = lu;
    det.rewForSigma = *rv.rew;
    Mat xmat = Eigen::kroneckerProduct(lu.U, lu.V).eval();
    Mat pulled = xmat.adjoint() * rv.rew->matrix() * xmat;
    det.pulledBack = Witness::create(BipartiteOperator(pulled, rho.dimA(), rho.dimB()),
                                     WitnessProvenance::User, opt.confirm.witnessRestarts,
                                     substream_seed(opt.seed, 0x9011));
    det.traceValue = (det.pulledBack.matrix() * rho.matrix()).trace().real();
    det.params = x;
    return det;
}

} // namespace detail

/// Derivative-free search over the local-unitary orbit of a PPT state for a
/// conjugate with entangled real part. Phases-first pattern search (the
/// orthogonal parts can be absorbed into the state), then joint refinement.
/// Success requires a full-budget confirmation on the incumbent.
inline std::optional<EluDetection> search_entangled_real_part(const DensityMatrix &rho,
                                                             OrbitSearchOptions opt = {}) {
    const int m = rho.dimA(), n = rho.dimB();
    const int np = lu_param_count(m, n);
    const int sa = m * (m - 1) / 2, sb = n * (n - 1) / 2;
    std::vector<int> phaseIdx, allIdx;
    for (int i = 0; i < np; ++i) allIdx.push_back(i);
    for (int i = sa; i < sa + m; ++i) phaseIdx.push_back(i);
    for (int i = sa + m + sb; i < np; ++i) phaseIdx.push_back(i);

    for (int r = 0; r < opt.restarts; ++r) {
        int budget = opt.evalsPerRestart;
        RVec x = RVec::Zero(np);
        if (r > 0) {
            auto rng = make_rng(substream_seed(opt.seed, 0x5eedULL + static_cast<std::uint64_t>(r)));
            std::uniform_real_distribution<double> ph(-M_PI, M_PI);
            for (int i : phaseIdx) x(i) = ph(rng);
        }
        double fx = 0.0;
        bool aborted = false;
        auto eval = [&](const RVec &p) {
            --budget;
            LocalUnitary lu = lu_parameterize(p, m, n);
            return detail::orbit_objective(rho, lu, opt);
        };
        std::optional<EluDetection> found;
        auto check_success = [&](const RVec &p, double f) {
            if (f > 1.0 + opt.successThreshold) {
                // surrogate says Entangled; confirm with the full budget
                found = detail::confirm_orbit_point(rho, p, opt);
                return found.has_value();
            }
            return false;
        };
        fx = eval(x);
        if (check_success(x, fx)) return found;
        auto stage = [&](const std::vector<int> &idx, double step0, double minStep) {
            double step = step0;
            while (step > minStep && budget > 0 && !aborted) {
                bool improved = false;
                for (int i : idx) {
                    if (budget <= 0) break;
                    for (double sgn : {+1.0, -1.0}) {
                        if (budget <= 0) break;
                        RVec trial = x;
                        trial(i) += sgn * step;
                        double ft = eval(trial);
                        if (ft > fx + 1e-12) {
                            x = trial;
                            fx = ft;
                            improved = true;
                            if (check_success(x, fx)) { aborted = true; }
                            break;
                        }
                    }
                    if (aborted) break;
                }
                if (!improved) step *= 0.5;
            }
        };
        stage(phaseIdx, M_PI / 4.0, 0.01);
        if (found) return found;
        if (!aborted && budget > 0) stage(allIdx, 0.3, 0.01);
        if (found) return found;
        // final confirmation attempt on the incumbent of this restart
        if (fx > 1.0) {
            auto det = detail::confirm_orbit_point(rho, x, opt);
            if (det) return det;
        }
    }
    return std::nullopt;
}

enum class FlowTag { NptDetected, RewDetected, EluDetected, PrsCandidate, Inconclusive };

inline std::string to_string(FlowTag t) {
    switch (t) {
        case FlowTag::NptDetected: return "npt-detected";
        case FlowTag::RewDetected: return "rew-detected";
        case FlowTag::EluDetected: return "elu-detected";
        case FlowTag::PrsCandidate: return "prs-candidate";
        case FlowTag::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

struct PrsTrial {
    std::string description;
    RewTag tag = RewTag::Inconclusive;
    double bound = 0.0;  // gilbert bound on the transformed state's real part
};

/// Consistency trials against the closure properties of the set of PPT
/// states whose every LU conjugate has separable real part. Failure to
/// refute is evidence only, never a membership claim.
struct PrsEvidence {
    std::vector<PrsTrial> trials;
    bool refuted = false;
    int refutedIndex = -1;
    std::optional<RewVerdict> detection;          // the refuting verdict
    std::optional<LocalUnitary> refutingUnitary;  // set when an LU trial refutes
};

struct PrsOptions {
    int randomTrials = 8;
    std::uint64_t seed = 0;
    GilbertOptions gilbert;
    double pptTol = 1e-9;
};

inline PrsEvidence prs_evidence(const DensityMatrix &rho, PrsOptions opt = {}) {
    PptReport ppt = is_ppt(rho, opt.pptTol);
    if (!ppt.ppt) throw NotApplicable("prs_evidence: state is NPT");
    PrsEvidence ev;
    auto run = [&](const std::string &desc, const DensityMatrix &s,
                   std::optional<LocalUnitary> lu) {
        if (ev.refuted) return;
        GilbertOptions g = opt.gilbert;
        g.seed = substream_seed(opt.seed, ev.trials.size());
        RewVerdict rv = rew_detectable(s, g);
        PrsTrial t;
        t.description = desc;
        t.tag = rv.tag;
        t.bound = rv.realPart.tag == SepTag::Entangled ? rv.realPart.lowerBound
                                                       : rv.realPart.bestLowerBound;
        ev.trials.push_back(t);
        if (rv.tag == RewTag::Yes) {
            ev.refuted = true;
            ev.refutedIndex = static_cast<int>(ev.trials.size()) - 1;
            ev.detection = rv;
            ev.refutingUnitary = lu;
        }
    };
    run("identity", rho, LocalUnitary::identity(rho.dimA(), rho.dimB()));
    run("conjugate", DensityMatrix(conjugate(rho.base())), std::nullopt);
    run("partial-transpose", DensityMatrix(partial_transpose(rho.base())), std::nullopt);
    run("swap", DensityMatrix(swap_sides(rho.base())), std::nullopt);
    for (int k = 0; k < opt.randomTrials && !ev.refuted; ++k) {
        auto rng = make_rng(substream_seed(opt.seed, 0x10ba + static_cast<std::uint64_t>(k)));
        Mat u = random_unitary(rng, rho.dimA());
        Mat v = random_unitary(rng, rho.dimB());
        LocalUnitary lu = LocalUnitary::from(u, v);
        run("random-lu-" + std::to_string(k), DensityMatrix(apply_local(rho.base(), u, v)), lu);
    }
    return ev;
}

struct FlowchartOptions {
    double pptTol = 1e-9;
    double delta = 1e-10;
    GilbertOptions gilbert;
    OrbitSearchOptions search;
    PrsOptions prs;
    std::uint64_t seed = 0;
};

struct FlowchartVerdict {
    FlowTag tag = FlowTag::Inconclusive;
    std::optional<NptWitness> npt;
    std::optional<RewVerdict> rew;
    std::optional<EluDetection> elu;
    std::optional<SeparabilityVerdict> separable;  // direct gilbert evidence on rho
    std::optional<PrsEvidence> evidence;
    std::uint64_t seed = 0;
};

/// End-to-end classification: (1) NPT states are detected by the partial
/// transpose of a pure eigenvector; (2) PPT states with entangled real part
/// are REW-detectable; (3) otherwise search the LU orbit; (4) failing that,
/// collect failure-to-refute evidence (or separable evidence).
inline FlowchartVerdict flowchart_classify(const DensityMatrix &rho, FlowchartOptions opt = {}) {
    FlowchartVerdict out;
    out.seed = opt.seed;
    PptReport ppt = is_ppt(rho, opt.pptTol);
    if (!ppt.ppt) {
        out.tag = FlowTag::NptDetected;
        out.npt = witness_from_npt(rho, opt.pptTol, 64, substream_seed(opt.seed, 1));
        return out;
    }
    GilbertOptions g = opt.gilbert;
    g.seed = substream_seed(opt.seed, 2);
    RewVerdict rv = rew_detectable(rho, g);
    if (rv.tag == RewTag::Yes) {
        out.tag = FlowTag::RewDetected;
        out.rew = rv;
        return out;
    }
    out.rew = rv;
    // direct separability probe: separable states are not entangled at all
    GilbertOptions gd = opt.gilbert;
    gd.seed = substream_seed(opt.seed, 3);
    SeparabilityVerdict direct = gilbert(rho, gd);
    out.separable = direct;
    if (direct.tag == SepTag::Separable) {
        out.tag = FlowTag::PrsCandidate;
        return out;
    }
    OrbitSearchOptions so = opt.search;
    so.seed = substream_seed(opt.seed, 4);
    auto det = search_entangled_real_part(rho, so);
    if (det) {
        out.tag = FlowTag::EluDetected;
        out.elu = det;
        return out;
    }
    PrsOptions po = opt.prs;
    po.seed = substream_seed(opt.seed, 5);
    PrsEvidence ev = prs_evidence(rho, po);
    out.evidence = ev;
    if (ev.refuted && ev.refutingUnitary) {
        // an LU trial found a conjugate with entangled real part; pull the
        // witness back to rho
        const LocalUnitary &lu = *ev.refutingUnitary;
        EluDetection d;
        d.lu = lu;
        d.rewForSigma = *ev.detection->rew;
        Mat xmat = Eigen::kroneckerProduct(lu.U, lu.V).eval();
        Mat pulled = xmat.adjoint() * d.rewForSigma.matrix() * xmat;
        d.pulledBack = Witness::create(BipartiteOperator(pulled, rho.dimA(), rho.dimB()),
                                       WitnessProvenance::User, opt.gilbert.witnessRestarts,
                                       substream_seed(opt.seed, 6));
        d.traceValue = (d.pulledBack.matrix() * rho.matrix()).trace().real();
        out.elu = d;
        out.tag = FlowTag::EluDetected;
        return out;
    }
    out.tag = ev.refuted ? FlowTag::Inconclusive : FlowTag::PrsCandidate;
    return out;
}

} // namespace rewkit
