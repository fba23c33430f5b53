#pragma once

#include <memory>
#include <string>
#include <vector>

#include "uqcoh/spectrum.hpp"

// Representations of the universal unitary quantum group attached to a
// positive diagonal Q. The generator matrix u = (u_jk) satisfies
//
//   (R1)  u u* = u* u = 1          (u unitary)
//   (R3)  u^t Q ubar Q^{-1} = Q ubar Q^{-1} u^t = 1,
//
// where ubar is the entrywise adjoint. A representation on a Hilbert space H
// is a d x d matrix R of operators on H subject to the same relations; every
// finite-dimensional one is a Q-block matrix (entries coupling distinct
// blocks of Q vanish), and for Q-block R relation (R3) collapses to
// "R^t is unitary".
//
// Infinite-dimensional representations are handled through their compression
// to the leading M coordinates of a weighted-shift model: the relations then
// hold exactly on the first M coordinates for a declared buffer M < m, the
// only loss sitting at the top coordinate where the raising part of a shift
// leaves the truncation window.

namespace uqcoh::reps {

using spectrum::BlockSpectrum;

enum class Kind { Exact, Truncated };

struct OperatorMatrix {
    BlockSpectrum S;
    int d = 0;       // matrix size (= S.dim())
    int m = 0;       // carrier dimension of each operator entry
    Kind kind = Kind::Exact;
    int buffer = 0;  // relations certified on this many leading coordinates; == m when Exact
    std::vector<ComplexMatrix> entries;  // d*d, row-major

    const ComplexMatrix& block(int j, int k) const {
        return entries[static_cast<std::size_t>(j * d + k)];
    }
    ComplexMatrix& block(int j, int k) { return entries[static_cast<std::size_t>(j * d + k)]; }

    double q(int coord) const { return S.q(coord); }
};

using RepPtr = std::shared_ptr<const OperatorMatrix>;

inline OperatorMatrix make_zero(const BlockSpectrum& s, int m, Kind kind, int buffer) {
    OperatorMatrix r;
    r.S = s;
    r.d = s.dim();
    r.m = m;
    r.kind = kind;
    r.buffer = buffer;
    r.entries.assign(static_cast<std::size_t>(r.d) * r.d, ComplexMatrix::Zero(m, m));
    return r;
}

// Counit: u_jk -> delta_jk on H = C.
inline RepPtr epsilon(const BlockSpectrum& s) {
    OperatorMatrix r = make_zero(s, 1, Kind::Exact, 1);
    for (int j = 0; j < r.d; ++j) r.block(j, j)(0, 0) = Complex(1, 0);
    return std::make_shared<OperatorMatrix>(std::move(r));
}

// Seeded random exact representation on H = C^m. Per block of size D the
// entries are W_a u_ab with u Haar on U(D) and W_1..W_D Haar on U(m); then
// both R and R^t are unitary, so (R1) and (R3) hold exactly. (A plain Haar
// unitary of size D*m rearranged into operator blocks satisfies (R1) only:
// for operator entries the block transpose of a unitary need not be unitary.)
inline RepPtr random_block_unitary(const BlockSpectrum& s, int m, std::uint64_t seed) {
    require(m >= 1, ErrorCode::DimensionMismatch, "carrier dimension must be positive");
    rnd::Stream rng(seed);
    OperatorMatrix r = make_zero(s, m, Kind::Exact, m);
    for (int b = 0; b < s.blocks(); ++b) {
        const std::vector<int> coords = s.block_coords(b);
        const int D = static_cast<int>(coords.size());
        const ComplexMatrix u = rnd::haar_unitary(D, rng);
        std::vector<ComplexMatrix> w;
        w.reserve(static_cast<std::size_t>(D));
        for (int a = 0; a < D; ++a) w.push_back(rnd::haar_unitary(m, rng));
        for (int a = 0; a < D; ++a)
            for (int c = 0; c < D; ++c) r.block(coords[a], coords[c]) = w[a] * u(a, c);
    }
    return std::make_shared<OperatorMatrix>(std::move(r));
}

// Truncated quantum-SU(2) generator pair on C^N:
//   alpha e_0 = 0,  alpha e_k = sqrt(1 - q^{2k}) e_{k-1},  gamma e_l = q^l e_l.
// alpha gamma = q gamma alpha, gamma gamma* = gamma* gamma and
// alpha* alpha + gamma* gamma = 1 hold on all N coordinates;
// alpha alpha* + q^2 gamma* gamma = 1 fails only at coordinate N-1.
struct Suq2 {
    ComplexMatrix alpha, gamma;
    double q = 0;
    int n = 0;
};

inline Suq2 suq2_generators(double q, int N) {
    require(q > 0.0 && q < 1.0, ErrorCode::QOutOfRange, "q = " + std::to_string(q));
    require(N >= 2, ErrorCode::DimensionMismatch, "need at least two coordinates");
    Suq2 g;
    g.q = q;
    g.n = N;
    g.alpha = ComplexMatrix::Zero(N, N);
    g.gamma = ComplexMatrix::Zero(N, N);
    double ql = 1.0;
    for (int l = 0; l < N; ++l, ql *= q) g.gamma(l, l) = ql;
    for (int k = 1; k < N; ++k) g.alpha(k - 1, k) = std::sqrt(1.0 - std::pow(q, 2.0 * k));
    return g;
}

inline void check_pq(double p, double q) {
    require(q > 0.0 && q < 1.0 && p > 0.0 && p < 1.0, ErrorCode::QOutOfRange,
            "p, q must lie in (0, 1)");
    require(q < p, ErrorCode::ParameterOrderViolation,
            "need q < p, got p = " + std::to_string(p) + ", q = " + std::to_string(q));
}

// Representation over Q = diag(1, p^2, q^2) with the SU_q(2) pair in the
// four corners and the identity in the centre:
//
//   [ alpha   0   -q gamma* ]
//   [   0     1       0     ]
//   [ gamma   0    alpha*   ]
//
// Truncated with buffer N-1. This is the carrier of all explicit 2-cocycle
// constructions below.
inline RepPtr suq2_corner_rep(double p, double q, int N) {
    check_pq(p, q);
    const Suq2 g = suq2_generators(q, N);
    OperatorMatrix r = make_zero(spectrum::build({1.0, p * p, q * q}), N, Kind::Truncated, N - 1);
    r.block(0, 0) = g.alpha;
    r.block(0, 2) = -q * g.gamma.adjoint();
    r.block(1, 1) = ComplexMatrix::Identity(N, N);
    r.block(2, 0) = g.gamma;
    r.block(2, 2) = g.alpha.adjoint();
    return std::make_shared<OperatorMatrix>(std::move(r));
}

// Same pair placed on the trailing two coordinates of Q = diag(p^2, 1, q^2):
//
//   [ 1     0          0     ]
//   [ 0   alpha   -q gamma*  ]
//   [ 0   gamma    alpha*    ]
inline RepPtr suq2_tail_rep(double p, double q, int N) {
    check_pq(p, q);
    const Suq2 g = suq2_generators(q, N);
    OperatorMatrix r = make_zero(spectrum::build({p * p, 1.0, q * q}), N, Kind::Truncated, N - 1);
    r.block(0, 0) = ComplexMatrix::Identity(N, N);
    r.block(1, 1) = g.alpha;
    r.block(1, 2) = -q * g.gamma.adjoint();
    r.block(2, 1) = g.gamma;
    r.block(2, 2) = g.alpha.adjoint();
    return std::make_shared<OperatorMatrix>(std::move(r));
}

struct RelationResiduals {
    double unitarity_left = 0;    // || sum_p R_jp R_kp^* - delta ||
    double unitarity_right = 0;   // || sum_p R_pj^* R_pk - delta ||
    double transpose_left = 0;    // || sum_p (Q_p/Q_k) R_pj R_pk^* - delta ||
    double transpose_right = 0;   // || sum_p (Q_j/Q_p) R_jp^* R_kp - delta ||

    double max() const {
        return std::max(std::max(unitarity_left, unitarity_right),
                        std::max(transpose_left, transpose_right));
    }
};

// Defining-relation defects, each compressed to the leading M x M corner and
// measured in operator norm, maximized over entry positions. Products are
// formed at full size first; only the defect is compressed.
inline RelationResiduals relation_residuals(const OperatorMatrix& r, int M) {
    require(M >= 1 && M <= r.m, ErrorCode::CompressionTooLarge,
            "buffer " + std::to_string(M) + " exceeds carrier " + std::to_string(r.m));
    RelationResiduals out;
    const ComplexMatrix id = ComplexMatrix::Identity(r.m, r.m);
    for (int j = 0; j < r.d; ++j) {
        for (int k = 0; k < r.d; ++k) {
            ComplexMatrix a1 = ComplexMatrix::Zero(r.m, r.m);
            ComplexMatrix a2 = a1, a3 = a1, a4 = a1;
            for (int p = 0; p < r.d; ++p) {
                a1 += r.block(j, p) * r.block(k, p).adjoint();
                a2 += r.block(p, j).adjoint() * r.block(p, k);
                a3 += (r.q(p) / r.q(k)) * r.block(p, j) * r.block(p, k).adjoint();
                a4 += (r.q(j) / r.q(p)) * r.block(j, p).adjoint() * r.block(k, p);
            }
            if (j == k) { a1 -= id; a2 -= id; a3 -= id; a4 -= id; }
            out.unitarity_left = std::max(out.unitarity_left, operator_norm(a1.topLeftCorner(M, M)));
            out.unitarity_right = std::max(out.unitarity_right, operator_norm(a2.topLeftCorner(M, M)));
            out.transpose_left = std::max(out.transpose_left, operator_norm(a3.topLeftCorner(M, M)));
            out.transpose_right = std::max(out.transpose_right, operator_norm(a4.topLeftCorner(M, M)));
        }
    }
    return out;
}

inline RelationResiduals relation_residuals(const OperatorMatrix& r) {
    return relation_residuals(r, r.buffer);
}

}  // namespace uqcoh::reps
