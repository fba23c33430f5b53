#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "uqcoh/linalg.hpp"

// Block structure of a positive diagonal matrix Q = diag(q_1, ..., q_d).
// Coordinates whose entries agree up to a relative tolerance form a block;
// the distinct block values are kept sorted decreasing and normalized so the
// largest equals 1 (the relations defining the algebra are scale-invariant,
// so nothing is lost). sl_Q(d) below denotes the Q-block matrices that are
// traceless against both Q and Q^{-1}.

namespace uqcoh::spectrum {

struct BlockSpectrum {
    std::vector<double> values;   // distinct block values, decreasing, values[0] == 1
    std::vector<int> mults;       // block multiplicities, same order as values
    std::vector<int> index_block; // coordinate -> block
    double grouping_tol = 1e-12;

    int dim() const { return static_cast<int>(index_block.size()); }
    int blocks() const { return static_cast<int>(values.size()); }

    // Q-entry at a coordinate.
    double q(int coord) const { return values[static_cast<std::size_t>(index_block[coord])]; }

    std::vector<int> block_coords(int b) const {
        std::vector<int> out;
        for (int j = 0; j < dim(); ++j)
            if (index_block[j] == b) out.push_back(j);
        return out;
    }

    bool same_block(int j, int k) const { return index_block[j] == index_block[k]; }

    int sum_mult_squares() const {
        int s = 0;
        for (int m : mults) s += m * m;
        return s;
    }

    bool operator==(const BlockSpectrum& o) const {
        return values == o.values && mults == o.mults && index_block == o.index_block;
    }
};

inline BlockSpectrum build(const std::vector<double>& diag, double grouping_tol = 1e-12) {
    require(!diag.empty(), ErrorCode::DimensionMismatch, "empty diagonal");
    for (std::size_t i = 0; i < diag.size(); ++i)
        require(diag[i] > 0.0, ErrorCode::NonPositiveEntry,
                "entry " + std::to_string(i + 1) + " = " + std::to_string(diag[i]));

    const int d = static_cast<int>(diag.size());
    std::vector<int> order(diag.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return diag[a] > diag[b]; });

    // Single-linkage grouping on the sorted entries. A chain that joins
    // entries further apart than the tolerance has no consistent block
    // assignment, so it is rejected rather than split arbitrarily.
    BlockSpectrum s;
    s.grouping_tol = grouping_tol;
    s.index_block.assign(diag.size(), -1);
    std::vector<double> sums;
    double cluster_top = 0.0;
    for (int r = 0; r < d; ++r) {
        const double v = diag[static_cast<std::size_t>(order[r])];
        const bool joins = r > 0 && (diag[static_cast<std::size_t>(order[r - 1])] - v) <=
                                        grouping_tol * diag[static_cast<std::size_t>(order[r - 1])];
        if (!joins) {
            s.mults.push_back(0);
            sums.push_back(0.0);
            cluster_top = v;
        } else {
            require(cluster_top - v <= grouping_tol * cluster_top, ErrorCode::AmbiguousGrouping,
                    "entries " + std::to_string(cluster_top) + " and " + std::to_string(v) +
                        " chain through the tolerance without agreeing pairwise");
        }
        s.index_block[static_cast<std::size_t>(order[r])] = static_cast<int>(s.mults.size()) - 1;
        s.mults.back() += 1;
        sums.back() += v;
    }
    s.values.resize(sums.size());
    for (std::size_t b = 0; b < sums.size(); ++b) s.values[b] = sums[b] / s.mults[b];
    const double top = s.values[0];
    for (double& v : s.values) v /= top;
    return s;
}

// Zeroes every entry that couples distinct blocks.
inline ComplexMatrix block_project(const ComplexMatrix& a, const BlockSpectrum& s) {
    require(a.rows() == s.dim() && a.cols() == s.dim(), ErrorCode::DimensionMismatch,
            "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                ", spectrum has dimension " + std::to_string(s.dim()));
    ComplexMatrix out = a;
    for (int j = 0; j < s.dim(); ++j)
        for (int k = 0; k < s.dim(); ++k)
            if (!s.same_block(j, k)) out(j, k) = Complex(0, 0);
    return out;
}

// Trace over the coordinates of one block.
inline Complex partial_trace(const ComplexMatrix& a, const BlockSpectrum& s, int block) {
    require(a.rows() == s.dim() && a.cols() == s.dim(), ErrorCode::DimensionMismatch,
            "matrix dimension does not match spectrum");
    require(block >= 0 && block < s.blocks(), ErrorCode::BlockOutOfRange,
            "block " + std::to_string(block) + " of " + std::to_string(s.blocks()));
    Complex t(0, 0);
    for (int j = 0; j < s.dim(); ++j)
        if (s.index_block[j] == block) t += a(j, j);
    return t;
}

struct SlqResiduals {
    double off_block;  // Frobenius distance to the block projection
    Complex trace_q;
    Complex trace_q_inv;
};

// How far a matrix is from sl_Q(d).
inline SlqResiduals slq_residuals(const ComplexMatrix& a, const BlockSpectrum& s) {
    SlqResiduals r{};
    r.off_block = (a - block_project(a, s)).norm();
    Complex tq(0, 0), tqi(0, 0);
    for (int j = 0; j < s.dim(); ++j) {
        tq += a(j, j) * s.q(j);
        tqi += a(j, j) / s.q(j);
    }
    r.trace_q = tq;
    r.trace_q_inv = tqi;
    return r;
}

// dim sl_Q(d): two trace conditions once the spectrum has at least two
// blocks, a single one when Q is a scalar.
inline int slq_dimension(const BlockSpectrum& s) {
    const int sq = s.sum_mult_squares();
    return s.blocks() >= 2 ? sq - 2 : sq - 1;
}

// Whether {x, y, z} can be ordered into a geometric progression. The test is
// on the sorted triple, so it is order-independent.
inline bool is_geometric_triple(double x, double y, double z, double rel_tol = 1e-9) {
    for (double v : {x, y, z})
        require(v > 0.0, ErrorCode::NonPositiveEntry, "triple entry " + std::to_string(v));
    double a = x, b = y, c = z;
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    require(b - a > rel_tol * b && c - b > rel_tol * c, ErrorCode::DegenerateTriple,
            "entries coincide within tolerance");
    return std::abs(b * b - a * c) <= rel_tol * (a * c);
}

}  // namespace uqcoh::spectrum
