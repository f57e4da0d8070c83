// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "rewkit/io.hpp"
#include "rewkit/states.hpp"

using namespace rewkit;

namespace {

DensityMatrix state_from_file(const std::string &path) {
    MatrixFile mf = load_matrix_file(path);
    if (mf.kind != "state") throw InvalidInput(path + ": expected kind \"state\"");
    return DensityMatrix(BipartiteOperator(mf.matrix, mf.dimA, mf.dimB));
}

std::string default_cert_path(const std::string &in) { return in + ".cert.json"; }

void print_report(const json &j, bool asJson) {
    if (asJson) {
        std::printf("%s\n", j.dump(1).c_str());
        return;
    }
    for (const auto &[k, v] : j.items()) {
        if (v.is_string())
            std::printf("%s: %s\n", k.c_str(), v.get<std::string>().c_str());
        else
            std::printf("%s: %s\n", k.c_str(), v.dump().c_str());
    }
}

struct GlobalFlags {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    int budget = 0;  // 0 means module default
    bool asJson = false;
};

int cmd_construct(const std::string &family, const std::string &out, double theta,
                  const std::vector<double> &abcd, const std::vector<double> &angles,
                  const GlobalFlags &g) {
    MatrixFile mf;
    double normFactor = 1.0;
    auto fromState = [&](const DensityMatrix &s) {
        mf.kind = "state";
        mf.dimA = s.dimA();
        mf.dimB = s.dimB();
        mf.matrix = s.matrix();
        normFactor = s.normFactor();
    };
    UpbAngles ua = generic_upb_angles();
    if (angles.size() == 6) ua = {angles[0], angles[1], angles[2], angles[3], angles[4], angles[5]};
    if (family == "bell-phase") {
        fromState(bell_phase_state(theta));
    } else if (family == "witness-theta") {
        Witness w = witness_theta(theta, 64, g.seed);
        mf.kind = "witness";
        mf.dimA = mf.dimB = 2;
        mf.matrix = w.matrix();
    } else if (family == "h-example") {
        mf.kind = "hermitian";
        mf.dimA = mf.dimB = 2;
        mf.matrix = h_counterexample().matrix();
    } else if (family == "upb") {
        mf.kind = "hermitian";
        mf.dimA = mf.dimB = 3;
        mf.matrix = upb_projector(upb_family(ua));
    } else if (family == "upb-state") {
        fromState(upb_state(upb_family(ua)));
    } else if (family == "upb-dephased") {
        fromState(dephase_upb(upb_family(ua)).sigma);
    } else if (family == "rank4") {
        if (abcd.size() != 4) throw InvalidInput("rank4 needs --a --b --c --d");
        fromState(rank4_state({abcd[0], abcd[1], abcd[2], abcd[3]}));
    } else if (family == "quqart-rho") {
        fromState(quqart_pair().rho);
    } else if (family == "quqart-sigma") {
        fromState(quqart_pair().sigma);
    } else {
        throw InvalidInput("unknown family: " + family);
    }
    write_json_file(out, to_json(mf));
    json rep;
    rep["family"] = family;
    rep["file"] = out;
    rep["trace_pre_normalization"] = normFactor;
    rep["real"] = max_abs(mf.matrix.imag()) < 1e-12 * std::max(1.0, max_abs(mf.matrix));
    if (mf.kind == "state") {
        PptReport r = is_ppt(state_from_file(out), g.tol);
        rep["ppt"] = r.ppt;
        rep["min_gamma_eigenvalue"] = r.minEigenvalue;
    }
    print_report(rep, g.asJson);
    return 0;
}

int cmd_analyze(const std::string &in, const std::string &cert, const GlobalFlags &g) {
    DensityMatrix rho = state_from_file(in);
    json rep;
    PptReport r = is_ppt(rho, g.tol);
    rep["ppt"] = r.ppt;
    rep["min_gamma_eigenvalue"] = r.minEigenvalue;
    bool real = rho.isReal(1e-12);
    rep["real"] = real;
    SupportReduction sr = support_reduce(rho);
    rep["reduced_ranks"] = {sr.p, sr.q};
    GilbertOptions go;
    go.seed = g.seed;
    if (g.budget > 0) go.maxIter = g.budget;
    RewVerdict rv = rew_detectable(rho, go);
    std::string certPath = cert.empty() ? default_cert_path(in) : cert;
    switch (rv.tag) {
        case RewTag::Yes:
            rep["rew_detectable"] = "yes";
            rep["trace_value"] = rv.traceValue;
            write_json_file(certPath, certificate_rew(rho, rv));
            rep["certificate"] = certPath;
            break;
        case RewTag::No:
            rep["rew_detectable"] = "no";
            if (real) rep["separable"] = true;  // rho+ = rho for real states
            write_json_file(certPath, certificate_separable(DensityMatrix(real_part(rho.base())),
                                                            rv.realPart));
            rep["certificate"] = certPath;
            break;
        case RewTag::Inconclusive:
            rep["rew_detectable"] = "inconclusive";
            break;
    }
    print_report(rep, g.asJson);
    return 0;
}

int cmd_flowchart(const std::string &in, const std::string &cert, const GlobalFlags &g) {
    DensityMatrix rho = state_from_file(in);
    FlowchartOptions fo;
    fo.pptTol = g.tol;
    fo.seed = g.seed;
    if (g.budget > 0) fo.search.evalsPerRestart = g.budget;
    FlowchartVerdict fv = flowchart_classify(rho, fo);
    json rep;
    rep["verdict"] = to_string(fv.tag);
    std::string certPath = cert.empty() ? default_cert_path(in) : cert;
    bool wrote = false;
    switch (fv.tag) {
        case FlowTag::NptDetected:
            write_json_file(certPath, certificate_npt(rho, *fv.npt));
            rep["trace_value"] = fv.npt->traceValue;
            wrote = true;
            break;
        case FlowTag::RewDetected:
            write_json_file(certPath, certificate_rew(rho, *fv.rew));
            rep["trace_value"] = fv.rew->traceValue;
            wrote = true;
            break;
        case FlowTag::EluDetected:
            write_json_file(certPath, certificate_elu(rho, *fv.elu));
            rep["trace_value"] = fv.elu->traceValue;
            wrote = true;
            break;
        case FlowTag::PrsCandidate:
            if (fv.separable && fv.separable->tag == SepTag::Separable) {
                write_json_file(certPath, certificate_separable(rho, *fv.separable));
                rep["separable_evidence"] = true;
                wrote = true;
            } else if (fv.evidence) {
                rep["prs_trials"] = fv.evidence->trials.size();
                rep["prs_refuted"] = fv.evidence->refuted;
            }
            break;
        case FlowTag::Inconclusive:
            break;
    }
    if (wrote) rep["certificate"] = certPath;
    print_report(rep, g.asJson);
    if (fv.tag == FlowTag::PrsCandidate) return 2;
    if (fv.tag == FlowTag::Inconclusive) return 3;
    return 0;
}

int cmd_gilbert(const std::string &in, const std::string &cert, double eps, const GlobalFlags &g) {
    DensityMatrix rho = state_from_file(in);
    GilbertOptions go;
    go.seed = g.seed;
    if (eps > 0) go.epsSep = eps;
    if (g.budget > 0) go.maxIter = g.budget;
    SeparabilityVerdict v = gilbert(rho, go);
    json rep;
    rep["iterations"] = v.iterations;
    rep["distance"] = v.distance;
    std::string certPath = cert.empty() ? default_cert_path(in) : cert;
    switch (v.tag) {
        case SepTag::Separable:
            rep["verdict"] = "separable";
            rep["ensemble_size"] = v.ensemble.size();
            write_json_file(certPath, certificate_separable(rho, v));
            rep["certificate"] = certPath;
            break;
        case SepTag::Entangled:
            rep["verdict"] = "entangled";
            rep["lower_bound"] = v.lowerBound;
            write_json_file(certPath, certificate_entangled(rho, v));
            rep["certificate"] = certPath;
            break;
        case SepTag::Inconclusive:
            rep["verdict"] = "inconclusive";
            rep["best_lower_bound"] = v.bestLowerBound;
            break;
    }
    print_report(rep, g.asJson);
    return v.tag == SepTag::Inconclusive ? 3 : 0;
}

int cmd_verify(const std::string &certPath, const std::string &statePath, const GlobalFlags &g) {
    json cert = read_json_file(certPath);
    DensityMatrix rho = state_from_file(statePath);
    VerifyResult vr = verify_certificate(cert, rho);
    json rep;
    rep["pass"] = vr.pass;
    rep["message"] = vr.message;
    print_report(rep, g.asJson);
    return vr.pass ? 0 : 1;
}

int cmd_project(const std::string &in, const std::string &out, const GlobalFlags &g) {
    MatrixFile mf = load_matrix_file(in);
    json rep, outFile;
    if (mf.kind == "state") {
        DensityMatrix rho(BipartiteOperator(mf.matrix, mf.dimA, mf.dimB));
        ProjectedState ps = project_npt(rho, g.tol);
        MatrixFile pm;
        pm.kind = "state";
        pm.dimA = pm.dimB = ps.p;
        pm.matrix = ps.state.matrix();
        outFile = to_json(pm);
        outFile["transform"] = {{"u", io_detail::complex_payload(ps.U)},
                                {"v", io_detail::complex_payload(ps.V)},
                                {"p", ps.p},
                                {"norm_factor", ps.normFactor}};
        rep["p"] = ps.p;
        rep["norm_factor"] = ps.normFactor;
    } else if (mf.kind == "witness") {
        Witness w = Witness::create(BipartiteOperator(mf.matrix, mf.dimA, mf.dimB),
                                    WitnessProvenance::User, 64, g.seed);
        ProjectedWitness pw = project_witness(w, 64, g.seed);
        MatrixFile pm;
        pm.kind = "witness";
        pm.dimA = pm.dimB = pw.p;
        pm.matrix = pw.witness.matrix();
        outFile = to_json(pm);
        outFile["transform"] = {{"u", io_detail::complex_payload(pw.U)},
                                {"v", io_detail::complex_payload(pw.V)},
                                {"p", pw.p}};
        rep["p"] = pw.p;
        rep["corner_expectation"] = pw.cornerExpectation;
    } else {
        throw InvalidInput("project: input must be a state or witness file");
    }
    std::string outPath = out.empty() ? in + ".projected.json" : out;
    write_json_file(outPath, outFile);
    rep["file"] = outPath;
    print_report(rep, g.asJson);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"rewkit: real entanglement witness toolkit"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--tol", g.tol, "numerical tolerance for PPT tests");
    app.add_option("--seed", g.seed, "seed for all randomized searches");
    app.add_option("--budget", g.budget, "iteration or evaluation budget override");
    app.add_flag("--json", g.asJson, "machine-readable report on stdout");

    std::string family, in, out, cert, statePath;
    double theta = 0.0, eps = 0.0;
    std::vector<double> abcd, angles;

    auto *c = app.add_subcommand("construct", "build a state or witness family");
    c->add_option("family", family,
                  "bell-phase | witness-theta | h-example | upb | upb-state | upb-dephased | "
                  "rank4 | quqart-rho | quqart-sigma")
        ->required();
    c->add_option("-o,--output", out, "output matrix file")->required();
    c->add_option("--theta", theta, "phase parameter");
    double pa = 0, pb = 0, pc = 0, pd = 0;
    c->add_option("--a", pa);
    c->add_option("--b", pb);
    c->add_option("--c", pc);
    c->add_option("--d", pd);
    c->add_option("--angles", angles, "six UPB angles: gammaA thetaA phiA gammaB thetaB phiB")
        ->expected(6);

    auto *a = app.add_subcommand("analyze", "PPT, realness, reduced ranks, REW detectability");
    a->add_option("file", in)->required();
    a->add_option("--cert", cert, "certificate output path");

    auto *f = app.add_subcommand("flowchart", "full classification");
    f->add_option("file", in)->required();
    f->add_option("--cert", cert, "certificate output path");

    auto *gi = app.add_subcommand("gilbert", "projection onto the separable set");
    gi->add_option("file", in)->required();
    gi->add_option("--cert", cert, "certificate output path");
    gi->add_option("--eps", eps, "separability tolerance (Frobenius)");

    auto *v = app.add_subcommand("verify", "re-check a certificate against a state");
    v->add_option("certificate", cert)->required();
    v->add_option("state", statePath)->required();

    auto *p = app.add_subcommand("project", "local projection of a state or witness");
    p->add_option("file", in)->required();
    p->add_option("-o,--output", out, "output path for the projected file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c->parsed()) {
            if (c->count("--a") || c->count("--b") || c->count("--c") || c->count("--d"))
                abcd = {pa, pb, pc, pd};
            return cmd_construct(family, out, theta, abcd, angles, g);
        }
        if (a->parsed()) return cmd_analyze(in, cert, g);
        if (f->parsed()) return cmd_flowchart(in, cert, g);
        if (gi->parsed()) return cmd_gilbert(in, cert, eps, g);
        if (v->parsed()) return cmd_verify(cert, statePath, g);
        if (p->parsed()) return cmd_project(in, out, g);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
