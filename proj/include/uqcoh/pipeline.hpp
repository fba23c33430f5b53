#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "uqcoh/q_recurrence.hpp"

// End-to-end computation of the second cohomology space attached to a block
// spectrum. The target space is sl_Q(d): its dimension is sum d_i^2 - 2 once
// the spectrum has at least two blocks (d^2 - 1 for a single block), and a
// certified basis of cup-product defects realizes every dimension:
//
//   block part: cup products of random Q-block 1-cocycles over the counit
//   representation; their defects are per-block commutators, spanning the
//   blockwise-traceless subspace of dimension sum d_i^2 - n;
//
//   triple part: for every selected block triple, the self cup product of
//   the regime cocycle over the triple's corner representation, transplanted
//   onto representative coordinates; each contributes an independent
//   partial-trace pattern, closing the remaining n - 2 dimensions.
//
// Triples are chosen so that none is a geometric progression and so that a
// greedy elimination retires each by a block it alone touches; a spectrum
// of exactly three blocks in geometric progression admits no such choice
// and is reported as unsupported. The no-go experiment complements the
// construction: every finite-dimensional cup-product defect it draws stays
// blockwise traceless, which is why the triple part cannot be replaced by
// more sampling.

namespace uqcoh::pipeline {

using cocycle::OneCocycle;
using reps::RepPtr;
using spectrum::BlockSpectrum;

struct PipelineConfig {
    double tail_tol = 1e-10;   // truncation rule for the regime cocycles
    int truncation_cap = 400;  // hard ceiling on the corner carrier
    std::uint64_t seed = 1;
    int max_samples = 64;      // budget for block-part cup products
    double sv_tol = 1e-10;     // rank cutoff, relative to the largest singular value
    double gp_tol = 1e-9;      // geometric-progression detection
    double trace_tol = 1e-8;   // sl_Q membership and partial-trace support
};

enum class H2Status { Computed, UnsupportedGPCase };

struct H2Dimension {
    H2Status status = H2Status::Computed;
    int dimension = 0;
};

inline H2Dimension h2_dimension(const BlockSpectrum& s, double gp_tol = 1e-9) {
    if (s.blocks() == 3 &&
        spectrum::is_geometric_triple(s.values[0], s.values[1], s.values[2], gp_tol))
        return {H2Status::UnsupportedGPCase, 0};
    return {H2Status::Computed, spectrum::slq_dimension(s)};
}

struct TripleSelection {
    std::vector<std::array<int, 3>> triples;             // block indices, ascending
    std::vector<std::pair<int, int>> elimination_order;  // (triple position, private block)
};

namespace detail {

// Retires every support set by a block index it alone still touches,
// scanning blocks in ascending order; fails when no remaining set holds a
// private block.
inline bool greedy_elimination(const std::vector<std::vector<int>>& support, int blocks,
                               std::vector<std::pair<int, int>>* order) {
    order->clear();
    std::vector<bool> alive(support.size(), true);
    std::size_t remaining = support.size();
    while (remaining > 0) {
        int pick_elem = -1, pick_block = -1;
        for (int b = 0; b < blocks && pick_elem < 0; ++b) {
            int count = 0, owner = -1;
            for (std::size_t e = 0; e < support.size(); ++e) {
                if (!alive[e]) continue;
                if (std::find(support[e].begin(), support[e].end(), b) != support[e].end()) {
                    ++count;
                    owner = static_cast<int>(e);
                }
            }
            if (count == 1) {
                pick_elem = owner;
                pick_block = b;
            }
        }
        if (pick_elem < 0) return false;
        order->emplace_back(pick_elem, pick_block);
        alive[static_cast<std::size_t>(pick_elem)] = false;
        --remaining;
    }
    return true;
}

inline bool covers_all_blocks(const std::vector<std::array<int, 3>>& triples, int blocks) {
    std::vector<bool> seen(static_cast<std::size_t>(blocks), false);
    for (const auto& t : triples)
        for (int b : t) seen[static_cast<std::size_t>(b)] = true;
    return std::all_of(seen.begin(), seen.end(), [](bool v) { return v; });
}

inline bool admissible_selection(const std::vector<std::array<int, 3>>& triples, int blocks,
                                 std::vector<std::pair<int, int>>* order) {
    if (!covers_all_blocks(triples, blocks)) return false;
    std::vector<std::vector<int>> support;
    support.reserve(triples.size());
    for (const auto& t : triples) support.push_back({t[0], t[1], t[2]});
    return greedy_elimination(support, blocks, order);
}

}  // namespace detail

// n - 2 non-geometric block triples covering every block, each retirable by
// a private block. The constructive path seeds two triples on the four
// largest values and adjoins each further value with a non-geometric pair;
// if verification rejects it, a budgeted search over all admissible triples
// runs before giving up.
inline TripleSelection select_triples(const BlockSpectrum& s, double gp_tol = 1e-9) {
    const int n = s.blocks();
    require(n >= 4, ErrorCode::DimensionMismatch, "need at least four blocks");
    const std::vector<double>& w = s.values;
    auto non_gp = [&](int i, int j, int k) {
        return !spectrum::is_geometric_triple(w[static_cast<std::size_t>(i)],
                                              w[static_cast<std::size_t>(j)],
                                              w[static_cast<std::size_t>(k)], gp_tol);
    };

    TripleSelection sel;
    bool constructive_ok = true;
    for (int i = 0; i < 4 && static_cast<int>(sel.triples.size()) < 2; ++i)
        for (int j = i + 1; j < 4 && static_cast<int>(sel.triples.size()) < 2; ++j)
            for (int k = j + 1; k < 4 && static_cast<int>(sel.triples.size()) < 2; ++k)
                if (non_gp(i, j, k)) sel.triples.push_back({i, j, k});
    constructive_ok = sel.triples.size() == 2;
    for (int m = 4; m < n && constructive_ok; ++m) {
        bool found = false;
        for (int i = 0; i < m && !found; ++i)
            for (int j = i + 1; j < m && !found; ++j)
                if (non_gp(i, j, m)) {
                    sel.triples.push_back({i, j, m});
                    found = true;
                }
        constructive_ok = found;
    }
    if (constructive_ok && detail::admissible_selection(sel.triples, n, &sel.elimination_order))
        return sel;

    // Fallback: depth-first search over collections of non-geometric
    // triples, bounded by a fixed number of admissibility checks.
    std::vector<std::array<int, 3>> pool;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (non_gp(i, j, k)) pool.push_back({i, j, k});
    const int need = n - 2;
    long budget = 200000;
    std::vector<std::array<int, 3>> pick;
    auto dfs = [&](auto&& self, std::size_t start) -> bool {
        if (static_cast<int>(pick.size()) == need) {
            require(--budget >= 0, ErrorCode::NoValidSelection,
                    "selection search budget exhausted over " + std::to_string(pool.size()) +
                        " admissible triples");
            return detail::admissible_selection(pick, n, &sel.elimination_order);
        }
        for (std::size_t t = start; t < pool.size(); ++t) {
            pick.push_back(pool[t]);
            if (self(self, t + 1)) return true;
            pick.pop_back();
        }
        return false;
    };
    require(dfs(dfs, 0), ErrorCode::NoValidSelection,
            "no covering non-geometric triple collection admits an elimination order");
    sel.triples = pick;
    return sel;
}

enum class DefectKind { BlockSample, Triple };

struct BasisElement {
    DefectKind kind = DefectKind::BlockSample;
    ComplexMatrix delta;                      // d x d defect, blockwise by construction
    int sample_index = -1;                    // block samples: draw number
    std::array<int, 3> blocks{{-1, -1, -1}};  // triples: block indices
    std::array<int, 3> coords{{-1, -1, -1}};  // triples: representative coordinates
    int case_which = 0;                       // triples: recurrence regime
    int n_used = 0;                           // triples: corner carrier length
};

struct H2Result {
    H2Status status = H2Status::Computed;
    int dimension = 0;
    std::vector<BasisElement> basis;
    TripleSelection selection;    // trivial single triple when n = 3
    RealVector rank_certificate;  // singular values of the stacked vectorized basis
    double certificate_gap = 0;
};

namespace detail {

// Over the counit representation every Q-block matrix is a 1-cocycle.
inline OneCocycle random_block_cocycle(const RepPtr& eps, rnd::Stream& rng) {
    const int d = eps->d;
    std::vector<ComplexVector> v(static_cast<std::size_t>(d) * d, ComplexVector::Zero(1));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            if (eps->S.same_block(j, k)) v[static_cast<std::size_t>(j * d + k)][0] = rng.cgaussian();
    return cocycle::make_cocycle(eps, v);
}

inline ComplexVector vectorize(const ComplexMatrix& a) {
    return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

}  // namespace detail

// Builds and certifies the full defect basis. The block part is sampled
// until its span reaches the blockwise-traceless dimension; the triple part
// is deterministic. The stacked basis must reach the sl_Q dimension with a
// clean singular-value cutoff.
inline H2Result assemble_basis(const BlockSpectrum& s, const PipelineConfig& cfg = {}) {
    const H2Dimension dim = h2_dimension(s, cfg.gp_tol);
    require(dim.status == H2Status::Computed, ErrorCode::UnsupportedGPCase,
            "three-block geometric spectrum has no supported construction");
    H2Result out;
    out.dimension = dim.dimension;
    const int d = s.dim();
    const int n = s.blocks();
    const int block_target = s.sum_mult_squares() - n;

    const RepPtr eps = reps::epsilon(s);
    rnd::Stream rng(cfg.seed);
    ComplexMatrix span(d * d, block_target);  // orthonormal accepted directions
    int accepted = 0;
    for (int i = 0; i < cfg.max_samples && accepted < block_target; ++i) {
        const OneCocycle c1 = detail::random_block_cocycle(eps, rng);
        const OneCocycle c2 = detail::random_block_cocycle(eps, rng);
        const cup::DefectReport rep = cup::defect(cup::cup_product(c1, c2), cfg.trace_tol);
        require(rep.slq_ok, ErrorCode::CrossCheckFailed, "sampled defect leaves sl_Q");
        const ComplexVector x = detail::vectorize(rep.delta);
        const double xn = x.norm();
        if (xn <= 0) continue;
        ComplexVector r = x;
        if (accepted > 0) {
            auto u = span.leftCols(accepted);
            r -= u * (u.adjoint() * x);
        }
        if (r.norm() <= 1e-6 * xn) continue;  // dependent draw
        span.col(accepted) = r / r.norm();
        BasisElement e;
        e.kind = DefectKind::BlockSample;
        e.delta = rep.delta;
        e.sample_index = i;
        out.basis.push_back(std::move(e));
        ++accepted;
    }
    require(accepted == block_target, ErrorCode::SpanShortfall,
            "block-part span reached " + std::to_string(accepted) + " of " +
                std::to_string(block_target) + " within the sample budget");

    if (n >= 3) {
        if (n == 3) {
            out.selection.triples = {{0, 1, 2}};
            out.selection.elimination_order = {{0, 0}};
        } else {
            out.selection = select_triples(s, cfg.gp_tol);
        }
        for (const auto& t : out.selection.triples) {
            const recurrence::TripleParams tp = recurrence::triple_parameters(
                s.values[static_cast<std::size_t>(t[0])], s.values[static_cast<std::size_t>(t[1])],
                s.values[static_cast<std::size_t>(t[2])], cfg.gp_tol);
            const recurrence::CaseCocycle cc =
                recurrence::build_case_cocycle(tp.p, tp.q, cfg.tail_tol, cfg.truncation_cap);
            const cup::TwoCocycleTable small = cup::cup_product(cc.eta, cc.eta);
            const std::vector<int> coords = {s.block_coords(t[0])[0], s.block_coords(t[1])[0],
                                             s.block_coords(t[2])[0]};
            const cup::TwoCocycleTable big = cup::embed_table(small, s, coords);
            const cup::DefectReport rep = cup::defect(big, cfg.trace_tol);
            require(rep.slq_ok, ErrorCode::CrossCheckFailed, "triple defect leaves sl_Q");
            BasisElement e;
            e.kind = DefectKind::Triple;
            e.delta = rep.delta;
            e.blocks = t;
            e.coords = {coords[0], coords[1], coords[2]};
            e.case_which = cc.which;
            e.n_used = cc.n_used;
            out.basis.push_back(std::move(e));
        }
    }

    if (out.basis.empty()) {
        // One-coordinate spectrum: the target space is zero-dimensional.
        require(out.dimension == 0, ErrorCode::SpanShortfall,
                "no defects available for dimension " + std::to_string(out.dimension));
        out.certificate_gap = std::numeric_limits<double>::infinity();
        return out;
    }
    ComplexMatrix stack(static_cast<Eigen::Index>(out.basis.size()), d * d);
    for (std::size_t i = 0; i < out.basis.size(); ++i)
        stack.row(static_cast<Eigen::Index>(i)) = detail::vectorize(out.basis[i].delta).transpose();
    const NullspaceResult cert = certified_nullspace(stack, cfg.sv_tol);
    const int rank = d * d - static_cast<int>(cert.basis.cols());
    require(rank == out.dimension, ErrorCode::SpanShortfall,
            "stacked basis rank " + std::to_string(rank) + " of " + std::to_string(out.dimension));
    out.rank_certificate = cert.singular_values.head(static_cast<Eigen::Index>(out.basis.size()));
    out.certificate_gap = cert.gap;
    return out;
}

struct IndependenceReport {
    std::vector<std::pair<int, int>> steps;  // (basis index, private block) per triple element
    double max_block_sample_trace = 0;       // scaled by 1 + |delta|
    double min_private_trace = 0;
    double max_outside_trace = 0;
    int block_rank = 0;
};

namespace detail {

inline std::string trace_row(const std::vector<double>& row) {
    std::string s = "[";
    for (std::size_t b = 0; b < row.size(); ++b)
        s += (b ? ", " : "") + std::to_string(row[b]);
    return s + "]";
}

}  // namespace detail

// Recomputes every partial-trace pattern and certifies the independence
// argument: block samples are blockwise traceless, each triple element is
// supported inside its triple and retired by a private block, and the
// residual block part has full rank.
inline IndependenceReport verify_independence(const H2Result& h2, const BlockSpectrum& s,
                                              double tol = 1e-8) {
    const int n = s.blocks();
    const int d = s.dim();
    IndependenceReport rep;
    std::vector<std::vector<double>> scaled(h2.basis.size(), std::vector<double>(n, 0.0));
    for (std::size_t e = 0; e < h2.basis.size(); ++e) {
        const double scale = 1.0 + h2.basis[e].delta.norm();
        for (int b = 0; b < n; ++b)
            scaled[e][static_cast<std::size_t>(b)] =
                std::abs(spectrum::partial_trace(h2.basis[e].delta, s, b)) / scale;
    }

    std::vector<std::size_t> triple_elems;
    for (std::size_t e = 0; e < h2.basis.size(); ++e) {
        const BasisElement& el = h2.basis[e];
        if (el.kind == DefectKind::BlockSample) {
            for (int b = 0; b < n; ++b) {
                rep.max_block_sample_trace =
                    std::max(rep.max_block_sample_trace, scaled[e][static_cast<std::size_t>(b)]);
                require(scaled[e][static_cast<std::size_t>(b)] <= tol, ErrorCode::EliminationFailed,
                        "block sample " + std::to_string(e) + " has partial traces " +
                            detail::trace_row(scaled[e]));
            }
        } else {
            triple_elems.push_back(e);
            for (int b = 0; b < n; ++b) {
                const bool inside = b == el.blocks[0] || b == el.blocks[1] || b == el.blocks[2];
                if (inside) continue;
                rep.max_outside_trace =
                    std::max(rep.max_outside_trace, scaled[e][static_cast<std::size_t>(b)]);
                require(scaled[e][static_cast<std::size_t>(b)] <= tol, ErrorCode::EliminationFailed,
                        "triple element " + std::to_string(e) + " leaks outside its triple: " +
                            detail::trace_row(scaled[e]));
            }
        }
    }

    std::vector<std::vector<int>> support;
    support.reserve(triple_elems.size());
    for (std::size_t e : triple_elems) {
        std::vector<int> sup;
        for (int b = 0; b < n; ++b)
            if (scaled[e][static_cast<std::size_t>(b)] > tol) sup.push_back(b);
        support.push_back(std::move(sup));
    }
    std::vector<std::pair<int, int>> order;
    if (!detail::greedy_elimination(support, n, &order)) {
        std::string table;
        for (std::size_t i = 0; i < triple_elems.size(); ++i)
            table += " " + std::to_string(triple_elems[i]) + ": " +
                     detail::trace_row(scaled[triple_elems[i]]);
        fail(ErrorCode::EliminationFailed, "no elimination order; partial traces:" + table);
    }
    rep.min_private_trace =
        order.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& [pos, block] : order) {
        const std::size_t e = triple_elems[static_cast<std::size_t>(pos)];
        rep.steps.emplace_back(static_cast<int>(e), block);
        rep.min_private_trace =
            std::min(rep.min_private_trace, scaled[e][static_cast<std::size_t>(block)]);
    }

    const int block_count = static_cast<int>(h2.basis.size() - triple_elems.size());
    rep.block_rank = 0;
    if (block_count > 0) {
        ComplexMatrix stack(block_count, d * d);
        Eigen::Index row = 0;
        for (const BasisElement& el : h2.basis)
            if (el.kind == DefectKind::BlockSample)
                stack.row(row++) = detail::vectorize(el.delta).transpose();
        const NullspaceResult cert = certified_nullspace(stack, 1e-10);
        rep.block_rank = d * d - static_cast<int>(cert.basis.cols());
    }
    require(rep.block_rank == s.sum_mult_squares() - n, ErrorCode::EliminationFailed,
            "block part rank " + std::to_string(rep.block_rank) + " of " +
                std::to_string(s.sum_mult_squares() - n));
    return rep;
}

struct NogoReport {
    int samples = 0;
    double max_scaled_partial_trace = 0;  // max over samples and blocks, scaled by 1 + |delta|
    double max_delta_norm = 0;
};

// Draws finite-dimensional cup products over the spectrum, alternating
// between Q-block cocycles on the counit representation and solved cocycle
// spaces of random exact block representations, and records how close every
// partial trace stays to zero. Violations would be findings worth keeping,
// not errors.
inline NogoReport nogo_experiment(const BlockSpectrum& s, int samples, std::uint64_t seed) {
    require(samples >= 1, ErrorCode::DimensionMismatch, "need at least one sample");
    NogoReport rep;
    rep.samples = samples;
    const RepPtr eps = reps::epsilon(s);
    rnd::Stream rng(seed);
    for (int i = 0; i < samples; ++i) {
        OneCocycle c1, c2;
        if (i % 2 == 0) {
            c1 = detail::random_block_cocycle(eps, rng);
            c2 = detail::random_block_cocycle(eps, rng);
        } else {
            const int m = 1 + (i / 2) % 3;
            const RepPtr r = reps::random_block_unitary(s, m, seed + 7919u * static_cast<unsigned>(i));
            const cocycle::SolveResult sol = cocycle::solve_space(r);
            if (sol.basis.empty()) continue;
            const int d = r->d;
            std::vector<ComplexVector> v1(static_cast<std::size_t>(d) * d,
                                          ComplexVector::Zero(r->m)),
                v2 = v1;
            for (const OneCocycle& b : sol.basis) {
                const Complex z1 = rng.cgaussian(), z2 = rng.cgaussian();
                for (std::size_t e = 0; e < v1.size(); ++e) {
                    v1[e] += z1 * b.v[e];
                    v2[e] += z2 * b.v[e];
                }
            }
            c1 = cocycle::make_cocycle(r, v1);
            c2 = cocycle::make_cocycle(r, v2);
        }
        const cup::DefectReport d = cup::defect(cup::cup_product(c1, c2));
        const double scale = 1.0 + d.delta.norm();
        rep.max_delta_norm = std::max(rep.max_delta_norm, d.delta.norm());
        for (const Complex& t : d.partial_traces)
            rep.max_scaled_partial_trace =
                std::max(rep.max_scaled_partial_trace, std::abs(t) / scale);
    }
    return rep;
}

}  // namespace uqcoh::pipeline
