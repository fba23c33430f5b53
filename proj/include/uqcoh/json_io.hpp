#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "uqcoh/pipeline.hpp"
#include "uqcoh/version.hpp"

// JSON views of the library types. Reports use insertion-ordered objects so
// a fixed field order plus a fixed seed gives byte-identical output; complex
// numbers appear as [re, im] pairs and non-finite gaps as the string
// "infinite", since JSON has no literal for them.

namespace uqcoh::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const ComplexVector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
    return a;
}

inline Json to_json(const RealVector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json gap_json(double g) { return std::isfinite(g) ? Json(g) : Json("infinite"); }

inline Json to_json(const spectrum::BlockSpectrum& s) {
    Json j;
    j["values"] = s.values;
    j["multiplicities"] = s.mults;
    j["dimension"] = s.dim();
    return j;
}

inline Json to_json(const reps::OperatorMatrix& r) {
    Json j;
    j["d"] = r.d;
    j["m"] = r.m;
    j["kind"] = r.kind == reps::Kind::Exact ? "exact" : "truncated";
    j["buffer"] = r.buffer;
    j["spectrum"] = to_json(r.S);
    Json rows = Json::array();
    for (int a = 0; a < r.d; ++a) {
        Json row = Json::array();
        for (int b = 0; b < r.d; ++b) row.push_back(to_json(r.block(a, b)));
        rows.push_back(std::move(row));
    }
    j["blocks"] = std::move(rows);
    return j;
}

inline Json to_json(const cup::TwoCocycleTable& t) {
    Json j;
    j["spectrum"] = to_json(t.S);
    j["normalized"] = t.normalized;
    auto tensor = [&](const std::vector<Complex>& data) {
        Json a = Json::array();
        for (int jj = 0; jj < t.d; ++jj) {
            Json b = Json::array();
            for (int k = 0; k < t.d; ++k) {
                Json c = Json::array();
                for (int r = 0; r < t.d; ++r) {
                    Json e = Json::array();
                    for (int l = 0; l < t.d; ++l) e.push_back(to_json(data[t.idx(jj, k, r, l)]));
                    c.push_back(std::move(e));
                }
                b.push_back(std::move(c));
            }
            a.push_back(std::move(b));
        }
        return a;
    };
    j["uu"] = tensor(t.uu);
    j["us"] = tensor(t.us);
    j["su"] = tensor(t.su);
    j["ss"] = tensor(t.ss);
    return j;
}

inline Json to_json(const cup::DefectReport& r) {
    Json j;
    j["a"] = to_json(r.ab.a);
    j["b"] = to_json(r.ab.b);
    j["discrepancy_a"] = r.ab.discrepancy_a;
    j["discrepancy_b"] = r.ab.discrepancy_b;
    j["defect"] = to_json(r.defect);
    j["delta"] = to_json(r.delta);
    Json traces = Json::array();
    for (const Complex& t : r.partial_traces) traces.push_back(to_json(t));
    j["partial_traces"] = std::move(traces);
    j["trace_q"] = to_json(r.trace_q);
    j["trace_q_inv"] = to_json(r.trace_q_inv);
    j["slq_ok"] = r.slq_ok;
    return j;
}

inline Json to_json(const cocycle::CocycleResiduals& r) {
    Json j;
    j["rw_v"] = r.rw_v;
    j["rstar_v_w"] = r.rstar_v_w;
    j["v_rqw"] = r.v_rqw;
    j["qw_rv"] = r.qw_rv;
    return j;
}

inline Json to_json(const reps::RelationResiduals& r) {
    Json j;
    j["unitarity_left"] = r.unitarity_left;
    j["unitarity_right"] = r.unitarity_right;
    j["transpose_left"] = r.transpose_left;
    j["transpose_right"] = r.transpose_right;
    return j;
}

inline Json to_json(const pipeline::TripleSelection& sel) {
    Json j;
    Json triples = Json::array();
    for (const auto& t : sel.triples) triples.push_back(Json::array({t[0], t[1], t[2]}));
    j["triples"] = std::move(triples);
    Json order = Json::array();
    for (const auto& [pos, block] : sel.elimination_order)
        order.push_back(Json::array({pos, block}));
    j["elimination_order"] = std::move(order);
    return j;
}

inline Json to_json(const pipeline::BasisElement& e) {
    Json j;
    if (e.kind == pipeline::DefectKind::BlockSample) {
        j["kind"] = "block_sample";
        j["sample_index"] = e.sample_index;
    } else {
        j["kind"] = "triple";
        j["blocks"] = Json::array({e.blocks[0], e.blocks[1], e.blocks[2]});
        j["coords"] = Json::array({e.coords[0], e.coords[1], e.coords[2]});
        j["regime"] = e.case_which;
        j["carrier"] = e.n_used;
    }
    j["delta"] = to_json(e.delta);
    return j;
}

inline Json to_json(const pipeline::H2Result& r) {
    Json j;
    j["status"] =
        r.status == pipeline::H2Status::Computed ? "computed" : "unsupported_gp_case";
    j["dimension"] = r.dimension;
    j["selection"] = to_json(r.selection);
    Json basis = Json::array();
    for (const auto& e : r.basis) basis.push_back(to_json(e));
    j["basis"] = std::move(basis);
    j["rank_certificate"] = to_json(r.rank_certificate);
    j["certificate_gap"] = gap_json(r.certificate_gap);
    return j;
}

inline Json to_json(const pipeline::IndependenceReport& r) {
    Json j;
    Json steps = Json::array();
    for (const auto& [e, b] : r.steps) steps.push_back(Json::array({e, b}));
    j["steps"] = std::move(steps);
    j["max_block_sample_trace"] = r.max_block_sample_trace;
    j["min_private_trace"] = r.min_private_trace;
    j["max_outside_trace"] = r.max_outside_trace;
    j["block_rank"] = r.block_rank;
    return j;
}

inline Json to_json(const pipeline::NogoReport& r) {
    Json j;
    j["samples"] = r.samples;
    j["max_scaled_partial_trace"] = r.max_scaled_partial_trace;
    j["max_delta_norm"] = r.max_delta_norm;
    return j;
}

inline Json to_json(const pipeline::PipelineConfig& c) {
    Json j;
    j["tail_tol"] = c.tail_tol;
    j["truncation_cap"] = c.truncation_cap;
    j["seed"] = c.seed;
    j["max_samples"] = c.max_samples;
    j["sv_tol"] = c.sv_tol;
    j["gp_tol"] = c.gp_tol;
    j["trace_tol"] = c.trace_tol;
    return j;
}

// Common header of every report the command-line tool emits.
inline Json report_envelope(const std::string& kind) {
    Json j;
    j["schema"] = report_schema;
    j["version"] = version_string;
    j["kind"] = kind;
    return j;
}

}  // namespace uqcoh::io
