// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>

#include <catch2/catch_amalgamated.hpp>

#include "rewkit/io.hpp"
#include "rewkit/states.hpp"

using namespace rewkit;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    fs::path p = fs::temp_directory_path() / "rewkit_cli_tests";
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string &args) {
    std::string cmd = std::string(REW_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

void write_state_file(const fs::path &path, const DensityMatrix &rho) {
    MatrixFile mf;
    mf.kind = "state";
    mf.dimA = rho.dimA();
    mf.dimB = rho.dimB();
    mf.matrix = rho.matrix();
    write_json_file(path.string(), to_json(mf));
}

}  // namespace

TEST_CASE("matrix file json round trip is bit exact", "[io]") {
    auto rng = make_rng(71);
    MatrixFile mf;
    mf.kind = "state";
    mf.dimA = 2;
    mf.dimB = 3;
    mf.matrix = random_density(rng, 6);
    fs::path p = work_dir() / "roundtrip.json";
    write_json_file(p.string(), to_json(mf));
    MatrixFile back = load_matrix_file(p.string());
    REQUIRE(back.kind == mf.kind);
    REQUIRE(back.dimA == 2);
    REQUIRE(back.dimB == 3);
    REQUIRE(max_abs(back.matrix - mf.matrix) == 0.0);
}

TEST_CASE("matrix file validation", "[io]") {
    json j;
    j["kind"] = "state";
    j["dims"] = {2, 2};
    Mat m = Mat::Identity(4, 4) / 4.0;
    j["re"] = io_detail::real_grid(m.real());
    j["im"] = io_detail::real_grid(m.imag());
    REQUIRE_NOTHROW(matrix_file_from_json(j));
    SECTION("unknown kind") {
        j["kind"] = "banana";
        REQUIRE_THROWS_AS(matrix_file_from_json(j), InvalidInput);
    }
    SECTION("bad dims") {
        j["dims"] = {2};
        REQUIRE_THROWS_AS(matrix_file_from_json(j), InvalidInput);
        j["dims"] = {0, 2};
        REQUIRE_THROWS_AS(matrix_file_from_json(j), InvalidInput);
    }
    SECTION("shape mismatch") {
        j["dims"] = {2, 3};
        REQUIRE_THROWS_AS(matrix_file_from_json(j), InvalidInput);
    }
    SECTION("hermiticity is enforced for states") {
        json bad = j;
        bad["re"][0][1] = 0.25;  // symmetric counterpart left at 0
        REQUIRE_THROWS_AS(matrix_file_from_json(bad), InvalidInput);
        bad["kind"] = "hermitian";  // the unconstrained kind accepts it
        REQUIRE_NOTHROW(matrix_file_from_json(bad));
    }
}

TEST_CASE("separable certificate verifies and detects tampering", "[io]") {
    DensityMatrix mm = maximally_mixed(2, 2);
    SeparabilityVerdict v = gilbert(mm);
    REQUIRE(v.tag == SepTag::Separable);
    json cert = certificate_separable(mm, v);
    REQUIRE(verify_certificate(cert, mm).pass);
    // against a different state the reconstruction no longer matches
    REQUIRE_FALSE(verify_certificate(cert, bell_phase_state(0.0)).pass);
    // tampering with a weight breaks normalization
    json bad = cert;
    bad["ensemble"]["weights"][0] = bad["ensemble"]["weights"][0].get<double>() + 0.1;
    REQUIRE_FALSE(verify_certificate(bad, mm).pass);
}

TEST_CASE("entangled certificate replays the witness evidence", "[io]") {
    DensityMatrix bell = bell_phase_state(0.0);
    SeparabilityVerdict v = gilbert(bell);
    REQUIRE(v.tag == SepTag::Entangled);
    json cert = certificate_entangled(bell, v);
    VerifyResult vr = verify_certificate(cert, bell);
    REQUIRE(vr.pass);
    // flip the stored trace value: the replay must notice
    json bad = cert;
    bad["trace_value"] = -bad["trace_value"].get<double>();
    REQUIRE_FALSE(verify_certificate(bad, bell).pass);
    // corrupt one witness entry: Hermiticity or the pairing breaks
    json bad2 = cert;
    bad2["witness"]["re"][0][1] = bad2["witness"]["re"][0][1].get<double>() + 0.5;
    REQUIRE_FALSE(verify_certificate(bad2, bell).pass);
}

TEST_CASE("npt certificate ties the witness to the stored pure vector", "[io]") {
    DensityMatrix bell = bell_phase_state(1.0);
    NptWitness nw = witness_from_npt(bell);
    json cert = certificate_npt(bell, nw);
    REQUIRE(verify_certificate(cert, bell).pass);
    json bad = cert;
    bad["pure_vector"]["re"][0] = 0.99;
    REQUIRE_FALSE(verify_certificate(bad, bell).pass);
}

TEST_CASE("rew certificate requires a real witness payload", "[io]") {
    DensityMatrix rho = bell_phase_state(0.3);
    RewVerdict rv = rew_detectable(rho);
    REQUIRE(rv.tag == RewTag::Yes);
    json cert = certificate_rew(rho, rv);
    REQUIRE(verify_certificate(cert, rho).pass);
    json bad = cert;
    bad["witness"]["im"][0][1] = 0.3;
    bad["witness"]["im"][1][0] = -0.3;
    REQUIRE_FALSE(verify_certificate(bad, rho).pass);
}

TEST_CASE("unknown certificate kinds fail gracefully", "[io]") {
    json cert = {{"kind", "mystery"}, {"dims", {2, 2}}};
    VerifyResult vr = verify_certificate(cert, maximally_mixed(2, 2));
    REQUIRE_FALSE(vr.pass);
}

TEST_CASE("cli end-to-end: construct, flowchart, verify", "[cli]") {
    fs::path dir = work_dir();
    fs::path state = dir / "bell.json";
    fs::path cert = dir / "bell.cert.json";
    REQUIRE(run_cli("construct bell-phase --theta 0 -o " + state.string()) == 0);
    REQUIRE(run_cli("flowchart " + state.string() + " --cert " + cert.string()) == 0);
    REQUIRE(run_cli("verify " + cert.string() + " " + state.string()) == 0);
    // verifying against the wrong state fails with exit 1
    fs::path other = dir / "bell2.json";
    REQUIRE(run_cli("construct bell-phase --theta 1.5 -o " + other.string()) == 0);
    REQUIRE(run_cli("verify " + cert.string() + " " + other.string()) == 1);
}

TEST_CASE("cli flowchart exit code on unrefuted candidates", "[cli]") {
    fs::path state = work_dir() / "mm.json";
    write_state_file(state, maximally_mixed(2, 2));
    REQUIRE(run_cli("flowchart " + state.string()) == 2);
}

TEST_CASE("cli gilbert writes a verifiable separable certificate", "[cli]") {
    fs::path dir = work_dir();
    fs::path state = dir / "prod.json";
    fs::path cert = dir / "prod.cert.json";
    Mat d = Mat::Zero(4, 4);
    d(0, 0) = 0.25;
    d(1, 1) = 0.25;
    d(2, 2) = 0.25;
    d(3, 3) = 0.25;
    write_state_file(state, DensityMatrix(BipartiteOperator(d, 2, 2)));
    REQUIRE(run_cli("gilbert " + state.string() + " --cert " + cert.string()) == 0);
    json c = read_json_file(cert.string());
    REQUIRE(c.at("kind") == "separable");
    REQUIRE(verify_certificate(c, maximally_mixed(2, 2)).pass);
    REQUIRE(run_cli("verify " + cert.string() + " " + state.string()) == 0);
}

TEST_CASE("cli rejects malformed input files", "[cli]") {
    fs::path bad = work_dir() / "bad.json";
    std::ofstream(bad) << "{ not json";
    REQUIRE(run_cli("analyze " + bad.string()) == 1);
    REQUIRE(run_cli("flowchart " + bad.string()) == 1);
}
