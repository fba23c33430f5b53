#pragma once

#include <vector>

#include "uqcoh/representations.hpp"

// 1-cocycles for a representation R twisted by the counit: linear maps eta
// from the algebra to the carrier with eta(xy) = R(x) eta(y) + eta(x) eps(y).
// Such a map is determined by the matrix V of its generator values
// V_jk = eta(u_jk), and V qualifies precisely when
//
//   (R* V)^t = Rbar Q^{-1} V^t Q.                                 (*)
//
// The star values W_jk = eta(u*_jk) are then forced:
// W = -Rbar Q^{-1} V^t Q, and the pair (V, W) satisfies
//
//   (1)  R W^t = -V          (2)  R* V = -W^t
//   (3)  V^t = -R^t Q W Q^{-1}   (4)  Q W Q^{-1} = -Q Rbar Q^{-1} V^t.
//
// Against the counit there are no coboundaries, so the kernel of (*) is the
// whole first cohomology; for the counit representation itself its dimension
// is the sum of the squared block multiplicities, and for any Q-block R every
// solution V is again a Q-block matrix (entries across blocks vanish).
//
// Vectorization contract: V is flattened row-major over (j, k), coordinates
// innermost, i.e. position ((j*d + k)*M + t). Truncated representations are
// solved in their buffer-sized corner; returned vectors are zero-padded back
// to the carrier.

namespace uqcoh::cocycle {

using reps::OperatorMatrix;
using reps::RepPtr;
using spectrum::BlockSpectrum;

struct OneCocycle {
    RepPtr rep;
    std::vector<ComplexVector> v, w;  // d*d row-major, each of length rep->m

    const ComplexVector& V(int j, int k) const {
        return v[static_cast<std::size_t>(j * rep->d + k)];
    }
    const ComplexVector& W(int j, int k) const {
        return w[static_cast<std::size_t>(j * rep->d + k)];
    }

    double norm() const {
        double s = 0;
        for (const auto& x : v) s += x.squaredNorm();
        return std::sqrt(s);
    }
};

// W = -Rbar Q^{-1} V^t Q, i.e. W_jk = -sum_p (Q_k/Q_p) R_jp^* V_kp.
inline std::vector<ComplexVector> derive_w(const OperatorMatrix& r,
                                           const std::vector<ComplexVector>& v) {
    std::vector<ComplexVector> w(static_cast<std::size_t>(r.d) * r.d);
    for (int j = 0; j < r.d; ++j) {
        for (int k = 0; k < r.d; ++k) {
            ComplexVector acc = ComplexVector::Zero(r.m);
            for (int p = 0; p < r.d; ++p)
                acc -= (r.q(k) / r.q(p)) * (r.block(j, p).adjoint() * v[static_cast<std::size_t>(k * r.d + p)]);
            w[static_cast<std::size_t>(j * r.d + k)] = acc;
        }
    }
    return w;
}

// Builds a cocycle from generator values, padding to the carrier and deriving
// the star values.
inline OneCocycle make_cocycle(const RepPtr& rep, std::vector<ComplexVector> v) {
    require(v.size() == static_cast<std::size_t>(rep->d) * rep->d, ErrorCode::DimensionMismatch,
            "need d*d generator values");
    for (auto& x : v) {
        require(x.size() <= rep->m, ErrorCode::DimensionMismatch, "value longer than the carrier");
        x = pad(x, rep->m);
    }
    OneCocycle c;
    c.rep = rep;
    c.w = derive_w(*rep, v);
    c.v = std::move(v);
    return c;
}

// The linear map V -> (R* V)^t - Rbar Q^{-1} V^t Q as an explicit
// (d^2 M) x (d^2 M) matrix over the buffer-sized corner, M = r.buffer.
// Entrywise: L(V)_jk = sum_p [ R_pk^* V_pj - (Q_k/Q_p) R_jp^* V_kp ].
inline ComplexMatrix constraint_operator(const OperatorMatrix& r) {
    const int d = r.d;
    const Eigen::Index M = r.buffer;
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d * M;
    ComplexMatrix L = ComplexMatrix::Zero(n, n);
    auto at = [&](int j, int k) { return (static_cast<Eigen::Index>(j) * d + k) * M; };
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            for (int p = 0; p < d; ++p) {
                L.block(at(j, k), at(p, j), M, M) +=
                    r.block(p, k).adjoint().topLeftCorner(M, M);
                L.block(at(j, k), at(k, p), M, M) -=
                    (r.q(k) / r.q(p)) * r.block(j, p).adjoint().topLeftCorner(M, M);
            }
        }
    }
    return L;
}

struct SolveResult {
    std::vector<OneCocycle> basis;  // orthonormal as vectors in C^{d^2 m}
    RealVector singular_values;
    double gap = 0;
};

inline SolveResult solve_space(const RepPtr& rep, double sv_tol = 1e-10) {
    const ComplexMatrix L = constraint_operator(*rep);
    NullspaceResult ns = certified_nullspace(L, sv_tol);
    const int d = rep->d;
    const Eigen::Index M = rep->buffer;
    SolveResult out;
    out.singular_values = ns.singular_values;
    out.gap = ns.gap;
    out.basis.reserve(static_cast<std::size_t>(ns.basis.cols()));
    for (Eigen::Index c = 0; c < ns.basis.cols(); ++c) {
        std::vector<ComplexVector> v(static_cast<std::size_t>(d) * d);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                v[static_cast<std::size_t>(j * d + k)] =
                    ns.basis.col(c).segment((static_cast<Eigen::Index>(j) * d + k) * M, M);
        out.basis.push_back(make_cocycle(rep, std::move(v)));
    }
    return out;
}

struct CocycleResiduals {
    double rw_v = 0;      // (1)
    double rstar_v_w = 0; // (2)
    double v_rqw = 0;     // (3)
    double qw_rv = 0;     // (4)

    double max() const { return std::max(std::max(rw_v, rstar_v_w), std::max(v_rqw, qw_rv)); }
};

// Residual norms of identities (1)-(4), evaluated at full carrier size and
// reported on the leading M coordinates (the representation's certified
// window). Maximized over entry positions.
inline CocycleResiduals verify(const OneCocycle& c, int M) {
    const OperatorMatrix& r = *c.rep;
    require(M >= 1 && M <= r.m, ErrorCode::CompressionTooLarge, "bad verification window");
    CocycleResiduals out;
    for (int j = 0; j < r.d; ++j) {
        for (int k = 0; k < r.d; ++k) {
            ComplexVector i1 = c.V(j, k), i2 = c.W(k, j);
            ComplexVector i3 = c.V(k, j), i4 = (r.q(j) / r.q(k)) * c.W(j, k);
            for (int p = 0; p < r.d; ++p) {
                i1 += r.block(j, p) * c.W(k, p);
                i2 += r.block(p, j).adjoint() * c.V(p, k);
                i3 += (r.q(p) / r.q(k)) * (r.block(p, j) * c.W(p, k));
                i4 += (r.q(j) / r.q(p)) * (r.block(j, p).adjoint() * c.V(k, p));
            }
            out.rw_v = std::max(out.rw_v, i1.head(M).norm());
            out.rstar_v_w = std::max(out.rstar_v_w, i2.head(M).norm());
            out.v_rqw = std::max(out.v_rqw, i3.head(M).norm());
            out.qw_rv = std::max(out.qw_rv, i4.head(M).norm());
        }
    }
    return out;
}

inline CocycleResiduals verify(const OneCocycle& c) { return verify(c, c.rep->buffer); }

// First cohomology dimension: sum of squared block multiplicities. The
// closed form is cross-checked against the kernel of the counit constraint.
inline int h1_dimension(const BlockSpectrum& s, double sv_tol = 1e-10) {
    const int expected = s.sum_mult_squares();
    const SolveResult sol = solve_space(reps::epsilon(s), sv_tol);
    require(static_cast<int>(sol.basis.size()) == expected, ErrorCode::CrossCheckFailed,
            "counit kernel has dimension " + std::to_string(sol.basis.size()) + ", closed form " +
                std::to_string(expected));
    return expected;
}

}  // namespace uqcoh::cocycle
