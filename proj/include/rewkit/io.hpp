// Copyright (c) 2026 The rewkit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "rewkit/orbit.hpp"
#include "rewkit/separability.hpp"

namespace rewkit {

inline constexpr const char *kVersion = "0.1.0";

using nlohmann::json;

namespace io_detail {

inline json real_grid(const RMat &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

inline RMat real_grid_parse(const json &j, Eigen::Index rows, Eigen::Index cols,
                            const char *field) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
        throw InvalidInput(std::string("matrix file: bad shape for ") + field);
    RMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json &row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw InvalidInput(std::string("matrix file: bad shape for ") + field);
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<size_t>(k)].get<double>();
    }
    return m;
}

inline json complex_payload(const Mat &m) {
    return {{"re", real_grid(m.real())}, {"im", real_grid(m.imag())}};
}

inline Mat complex_parse(const json &j, Eigen::Index rows, Eigen::Index cols) {
    RMat re = real_grid_parse(j.at("re"), rows, cols, "re");
    RMat im = real_grid_parse(j.at("im"), rows, cols, "im");
    return re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>();
}

inline json vec_payload(const Vec &v) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        re.push_back(v(i).real());
        im.push_back(v(i).imag());
    }
    return {{"re", re}, {"im", im}};
}

inline Vec vec_parse(const json &j, Eigen::Index n) {
    const json &re = j.at("re");
    const json &im = j.at("im");
    if (static_cast<Eigen::Index>(re.size()) != n || static_cast<Eigen::Index>(im.size()) != n)
        throw InvalidInput("matrix file: bad vector length");
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = cplx(re[static_cast<size_t>(i)].get<double>(), im[static_cast<size_t>(i)].get<double>());
    return v;
}

} // namespace io_detail

/// On-disk matrix: kind tag, local dimensions, and the complex matrix split
/// into real arrays. Hermiticity is enforced for states and witnesses.
struct MatrixFile {
    std::string kind;  // state, witness, hermitian
    int dimA = 0, dimB = 0;
    Mat matrix;
};

inline json to_json(const MatrixFile &mf) {
    json j;
    j["kind"] = mf.kind;
    j["dims"] = {mf.dimA, mf.dimB};
    j["re"] = io_detail::real_grid(mf.matrix.real());
    j["im"] = io_detail::real_grid(mf.matrix.imag());
    return j;
}

inline MatrixFile matrix_file_from_json(const json &j) {
    MatrixFile mf;
    mf.kind = j.at("kind").get<std::string>();
    if (mf.kind != "state" && mf.kind != "witness" && mf.kind != "hermitian")
        throw InvalidInput("matrix file: unknown kind " + mf.kind);
    if (!j.at("dims").is_array() || j["dims"].size() != 2)
        throw InvalidInput("matrix file: dims must be [m, n]");
    mf.dimA = j["dims"][0].get<int>();
    mf.dimB = j["dims"][1].get<int>();
    if (mf.dimA < 1 || mf.dimB < 1) throw InvalidInput("matrix file: dims must be positive");
    const Eigen::Index d = static_cast<Eigen::Index>(mf.dimA) * mf.dimB;
    RMat re = io_detail::real_grid_parse(j.at("re"), d, d, "re");
    RMat im = io_detail::real_grid_parse(j.at("im"), d, d, "im");
    if (mf.kind != "hermitian") {
        double scale = std::max({1.0, max_abs(re), max_abs(im)});
        if (max_abs(re - re.transpose()) > 1e-12 * scale ||
            max_abs(im + im.transpose()) > 1e-12 * scale)
            throw InvalidInput("matrix file: kind " + mf.kind + " requires a Hermitian matrix");
    }
    mf.matrix = re.cast<cplx>() + cplx(0, 1) * im.cast<cplx>();
    return mf;
}

inline void write_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open for writing: " + path);
    out << j.dump(1) << "\n";
}

inline json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw InvalidInput("parse error in " + path + ": " + e.what());
    }
    return j;
}

inline MatrixFile load_matrix_file(const std::string &path) {
    return matrix_file_from_json(read_json_file(path));
}

// ---- certificates ----------------------------------------------------------

struct VerifyResult {
    bool pass = false;
    std::string message;
};

namespace io_detail {

inline json witness_payload(const Witness &w) {
    json j = complex_payload(w.matrix());
    j["dims"] = {w.dimA(), w.dimB()};
    j["provenance"] = to_string(w.provenance());
    j["min_eigenvalue"] = w.minEigenvalue();
    const BlockPositivityEvidence &ev = w.evidence();
    j["evidence"] = {{"min_product_expectation", ev.minProductExpectation},
                     {"restarts", ev.restarts},
                     {"seed", ev.seed},
                     {"threshold", ev.threshold}};
    return j;
}

// Re-check a serialized witness against a state: Hermitian, indefinite,
// negative trace pairing matching the stored value, and block positivity
// replayed with the stored seed. No new search is run.
inline VerifyResult replay_witness(const json &jw, const DensityMatrix &rho, double delta,
                                   double storedTrace) {
    int m = jw.at("dims")[0].get<int>(), n = jw.at("dims")[1].get<int>();
    if (m != rho.dimA() || n != rho.dimB()) return {false, "witness/state dimension mismatch"};
    const Eigen::Index d = static_cast<Eigen::Index>(m) * n;
    Mat w = complex_parse(jw, d, d);
    double scale = std::max(max_abs(w), 1e-300);
    if (max_abs(w - w.adjoint()) > 1e-10 * scale) return {false, "witness payload not Hermitian"};
    EigenSystem es = hermitian_eig(HermitianOperator(w));
    if (es.eigenvalues(0) >= -1e-10 * scale) return {false, "witness payload has no negative eigenvalue"};
    double tr = (w * rho.matrix()).trace().real();
    if (std::abs(tr - storedTrace) > 1e-12 * std::max(1.0, std::abs(storedTrace)))
        return {false, "stored trace value does not replay (got " + std::to_string(tr) + ")"};
    if (tr >= -delta) return {false, "witness does not detect the state"};
    const json &ev = jw.at("evidence");
    ProductExtremum e = min_product_expectation(BipartiteOperator(w, m, n),
                                                ev.at("restarts").get<int>(),
                                                ev.at("seed").get<std::uint64_t>());
    if (e.value < ev.at("threshold").get<double>())
        return {false, "block positivity replay failed (min product expectation " +
                           std::to_string(e.value) + ")"};
    return {true, "ok"};
}

} // namespace io_detail

inline json certificate_separable(const DensityMatrix &rho, const SeparabilityVerdict &v) {
    if (v.tag != SepTag::Separable) throw InvalidInput("certificate_separable: wrong verdict tag");
    json ens;
    ens["weights"] = v.ensemble.weights;
    json pairs = json::array();
    for (const auto &[a, b] : v.ensemble.pairs)
        pairs.push_back({{"a", io_detail::vec_payload(a)}, {"b", io_detail::vec_payload(b)}});
    ens["pairs"] = pairs;
    return {{"version", kVersion},
            {"kind", "separable"},
            {"dims", {rho.dimA(), rho.dimB()}},
            {"eps_sep", v.options.epsSep},
            {"distance", v.distance},
            {"seed", v.options.seed},
            {"ensemble", ens}};
}

inline json certificate_entangled(const DensityMatrix &rho, const SeparabilityVerdict &v,
                                  double delta = 1e-10) {
    if (v.tag != SepTag::Entangled || !v.witness)
        throw InvalidInput("certificate_entangled: wrong verdict tag");
    double tr = (v.witness->matrix() * rho.matrix()).trace().real();
    return {{"version", kVersion},
            {"kind", "entangled"},
            {"dims", {rho.dimA(), rho.dimB()}},
            {"delta", delta},
            {"lower_bound", v.lowerBound},
            {"seed", v.options.seed},
            {"trace_value", tr},
            {"witness", io_detail::witness_payload(*v.witness)}};
}

inline json certificate_rew(const DensityMatrix &rho, const RewVerdict &v, double delta = 1e-10) {
    if (v.tag != RewTag::Yes || !v.rew) throw InvalidInput("certificate_rew: wrong verdict tag");
    return {{"version", kVersion},
            {"kind", "rew"},
            {"dims", {rho.dimA(), rho.dimB()}},
            {"delta", delta},
            {"trace_value", v.traceValue},
            {"witness", io_detail::witness_payload(*v.rew)}};
}

inline json certificate_npt(const DensityMatrix &rho, const NptWitness &v, double delta = 1e-10) {
    return {{"version", kVersion},
            {"kind", "npt"},
            {"dims", {rho.dimA(), rho.dimB()}},
            {"delta", delta},
            {"trace_value", v.traceValue},
            {"pure_vector", io_detail::vec_payload(v.pureVector)},
            {"witness", io_detail::witness_payload(v.witness)}};
}

inline json certificate_elu(const DensityMatrix &rho, const EluDetection &v, double delta = 1e-10) {
    double sigmaTrace = (v.rewForSigma.matrix() *
                         apply_local(rho.base(), v.lu.U, v.lu.V).matrix()).trace().real();
    return {{"version", kVersion},
            {"kind", "elu"},
            {"dims", {rho.dimA(), rho.dimB()}},
            {"delta", delta},
            {"trace_value", v.traceValue},
            {"sigma_trace_value", sigmaTrace},
            {"unitary_a", io_detail::complex_payload(v.lu.U)},
            {"unitary_b", io_detail::complex_payload(v.lu.V)},
            {"rew_for_sigma", io_detail::witness_payload(v.rewForSigma)},
            {"witness", io_detail::witness_payload(v.pulledBack)}};
}

/// Deterministic re-check of a certificate against a state. Separable
/// certificates are verified by pure arithmetic; witness certificates replay
/// the block-positivity evidence with the stored seed.
inline VerifyResult verify_certificate(const json &cert, const DensityMatrix &rho) {
    try {
        std::string kind = cert.at("kind").get<std::string>();
        int m = cert.at("dims")[0].get<int>(), n = cert.at("dims")[1].get<int>();
        if (m != rho.dimA() || n != rho.dimB())
            return {false, "certificate/state dimension mismatch"};
        if (kind == "separable") {
            double eps = cert.at("eps_sep").get<double>();
            const json &ens = cert.at("ensemble");
            std::vector<double> weights = ens.at("weights").get<std::vector<double>>();
            const json &pairs = ens.at("pairs");
            if (weights.empty() || weights.size() != pairs.size())
                return {false, "separable: empty or mismatched ensemble"};
            double sum = 0.0;
            ProductEnsemble pe;
            pe.dimA = m;
            pe.dimB = n;
            for (size_t k = 0; k < weights.size(); ++k) {
                if (weights[k] <= 0) return {false, "separable: nonpositive weight"};
                sum += weights[k];
                Vec a = io_detail::vec_parse(pairs[k].at("a"), m);
                Vec b = io_detail::vec_parse(pairs[k].at("b"), n);
                if (std::abs(a.norm() - 1.0) > 1e-9 || std::abs(b.norm() - 1.0) > 1e-9)
                    return {false, "separable: ensemble vector not normalized"};
                pe.weights.push_back(weights[k]);
                pe.pairs.emplace_back(a, b);
            }
            if (std::abs(sum - 1.0) > 1e-9) return {false, "separable: weights do not sum to 1"};
            double dist = (rho.matrix() - pe.reconstruct()).norm();
            if (dist > eps)
                return {false, "separable: reconstruction distance " + std::to_string(dist) +
                                   " exceeds " + std::to_string(eps)};
            return {true, "ok (distance " + std::to_string(dist) + ")"};
        }
        double delta = cert.value("delta", 1e-10);
        double storedTrace = cert.at("trace_value").get<double>();
        if (kind == "entangled") {
            return io_detail::replay_witness(cert.at("witness"), rho, delta, storedTrace);
        }
        if (kind == "rew") {
            const json &jw = cert.at("witness");
            const Eigen::Index d = static_cast<Eigen::Index>(m) * n;
            Mat w = io_detail::complex_parse(jw, d, d);
            if (max_abs(w.imag()) > 1e-12 * std::max(1.0, max_abs(w)))
                return {false, "rew: witness payload is not real"};
            return io_detail::replay_witness(jw, rho, delta, storedTrace);
        }
        if (kind == "npt") {
            const Eigen::Index d = static_cast<Eigen::Index>(m) * n;
            Vec psi = io_detail::vec_parse(cert.at("pure_vector"), d);
            if (std::abs(psi.norm() - 1.0) > 1e-9) return {false, "npt: pure vector not normalized"};
            Mat w = io_detail::complex_parse(cert.at("witness"), d, d);
            Mat expect = partial_transpose(BipartiteOperator(psi * psi.adjoint(), m, n)).matrix();
            if (max_abs(w - expect) > 1e-12)
                return {false, "npt: witness is not the partial transpose of the pure projector"};
            return io_detail::replay_witness(cert.at("witness"), rho, delta, storedTrace);
        }
        if (kind == "elu") {
            Mat u = io_detail::complex_parse(cert.at("unitary_a"), m, m);
            Mat v = io_detail::complex_parse(cert.at("unitary_b"), n, n);
            if (max_abs(u.adjoint() * u - Mat::Identity(m, m)) > 1e-10 ||
                max_abs(v.adjoint() * v - Mat::Identity(n, n)) > 1e-10)
                return {false, "elu: stored factors are not unitary"};
            const Eigen::Index d = static_cast<Eigen::Index>(m) * n;
            Mat wr = io_detail::complex_parse(cert.at("rew_for_sigma"), d, d);
            if (max_abs(wr.imag()) > 1e-12 * std::max(1.0, max_abs(wr)))
                return {false, "elu: witness for the conjugate is not real"};
            Mat x = Eigen::kroneckerProduct(u, v).eval();
            Mat pulled = io_detail::complex_parse(cert.at("witness"), d, d);
            if (max_abs(pulled - x.adjoint() * wr * x) > 1e-10 * std::max(1.0, max_abs(wr)))
                return {false, "elu: pulled-back witness does not match the stored factors"};
            double sigmaTrace = (wr * (x * rho.matrix() * x.adjoint())).trace().real();
            double storedSigma = cert.at("sigma_trace_value").get<double>();
            if (std::abs(sigmaTrace - storedSigma) > 1e-12 * std::max(1.0, std::abs(storedSigma)))
                return {false, "elu: sigma trace value does not replay"};
            return io_detail::replay_witness(cert.at("witness"), rho, delta, storedTrace);
        }
        return {false, "unknown certificate kind: " + kind};
    } catch (const json::exception &e) {
        return {false, std::string("malformed certificate: ") + e.what()};
    } catch (const std::exception &e) {
        return {false, std::string("verification error: ") + e.what()};
    }
}

} // namespace rewkit
