#pragma once

#include <array>
#include <vector>

#include "uqcoh/one_cocycles.hpp"

// Normalized 2-cocycles against the counit, tabulated on generator pairs. A
// bilinear form omega with omega(1 (x) 1) = 0 vanishes whenever either slot
// is scalar, so its generator-pair values are faithful data; they are held
// in four rank-4 tensors, one per star pattern:
//
//   uu[j,k,r,l] = omega(u_jk   (x) u_rl)    us[j,k,r,l] = omega(u_jk   (x) u_rl^*)
//   su[j,k,r,l] = omega(u_jk^* (x) u_rl)    ss[j,k,r,l] = omega(u_jk^* (x) u_rl^*)
//
// The cup product of 1-cocycles eta1, eta2 valued in the same carrier is
// omega(x (x) y) = <eta1(x^*), eta2(y)>, conjugate-linear in the first slot.
//
// Applying omega to the defining relations compresses the table to two
// matrices,
//
//   A_jk = sum_p omega(u_pj^* (x) u_pk),
//   B_jk = sum_p (Q_j/Q_p) omega(u_jp^* (x) u_kp),
//
// each of which has an equivalent expression through the opposite star
// pattern; the mismatch between the two expressions measures how far the
// table is from a genuine cocycle. Subtracting a coboundary d psi with psi
// supported on generators cancels A and the cross-block part of B entirely,
// so everything that survives is the Q-block part Delta of D = A - B^t: the
// table is a coboundary precisely when Delta vanishes, and D satisfies the
// weighted trace constraints tr(D Q) = tr(D Q^{-1}) = 0 up to truncation
// error, placing Delta in sl_Q(d).

namespace uqcoh::cup {

using cocycle::OneCocycle;
using reps::Kind;
using reps::RepPtr;
using spectrum::BlockSpectrum;

struct TwoCocycleTable {
    BlockSpectrum S;
    int d = 0;
    bool normalized = true;               // omega(1 (x) 1) = 0
    std::vector<Complex> uu, us, su, ss;  // d^4 each, index ((j*d + k)*d + r)*d + l

    std::size_t idx(int j, int k, int r, int l) const {
        return static_cast<std::size_t>(((j * d + k) * d + r) * d + l);
    }

    double sup_norm() const {
        double s = 0;
        for (const auto* t : {&uu, &us, &su, &ss})
            for (const Complex& z : *t) s = std::max(s, std::abs(z));
        return s;
    }
};

inline TwoCocycleTable make_table(const BlockSpectrum& s) {
    TwoCocycleTable t;
    t.S = s;
    t.d = s.dim();
    const std::size_t n = static_cast<std::size_t>(t.d) * t.d * t.d * t.d;
    t.uu.assign(n, Complex(0, 0));
    t.us.assign(n, Complex(0, 0));
    t.su.assign(n, Complex(0, 0));
    t.ss.assign(n, Complex(0, 0));
    return t;
}

// omega(x (x) y) = <eta1(x^*), eta2(y)>. Inner products are taken over the
// full carrier; both cocycles must live on the same representation object.
inline TwoCocycleTable cup_product(const OneCocycle& c1, const OneCocycle& c2) {
    require(c1.rep == c2.rep, ErrorCode::RepresentationMismatch,
            "cup product needs cocycles over one representation");
    TwoCocycleTable t = make_table(c1.rep->S);
    for (int j = 0; j < t.d; ++j)
        for (int k = 0; k < t.d; ++k)
            for (int r = 0; r < t.d; ++r)
                for (int l = 0; l < t.d; ++l) {
                    const std::size_t i = t.idx(j, k, r, l);
                    t.uu[i] = c1.W(j, k).dot(c2.V(r, l));
                    t.us[i] = c1.W(j, k).dot(c2.W(r, l));
                    t.su[i] = c1.V(j, k).dot(c2.V(r, l));
                    t.ss[i] = c1.V(j, k).dot(c2.W(r, l));
                }
    return t;
}

struct ABMatrices {
    ComplexMatrix a;  // A_jk = sum_p su[p,j,p,k]
    ComplexMatrix b;  // B_jk = sum_p (Q_j/Q_p) su[j,p,k,p]
    // Each matrix recomputed through the opposite star pattern, minus the
    // primary expression, in Frobenius norm. Zero for an exact cocycle; for
    // a truncated one the mismatch is controlled by the discarded tail.
    double discrepancy_a = 0;
    double discrepancy_b = 0;
};

inline ABMatrices compute_ab(const TwoCocycleTable& t) {
    require(t.normalized, ErrorCode::NotNormalized, "table must vanish on scalar slots");
    const int d = t.d;
    ABMatrices out;
    out.a = ComplexMatrix::Zero(d, d);
    out.b = ComplexMatrix::Zero(d, d);
    ComplexMatrix alt_a = ComplexMatrix::Zero(d, d);
    ComplexMatrix alt_b = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            for (int p = 0; p < d; ++p) {
                out.a(j, k) += t.su[t.idx(p, j, p, k)];
                alt_a(j, k) += t.us[t.idx(j, p, k, p)];
                out.b(j, k) += (t.S.q(j) / t.S.q(p)) * t.su[t.idx(j, p, k, p)];
                alt_b(j, k) += (t.S.q(p) / t.S.q(k)) * t.us[t.idx(p, j, p, k)];
            }
    out.discrepancy_a = (out.a - alt_a).norm();
    out.discrepancy_b = (out.b - alt_b).norm();
    return out;
}

struct DefectReport {
    ABMatrices ab;
    ComplexMatrix defect;                 // D = A - B^t
    ComplexMatrix delta;                  // Q-block part of D
    std::vector<Complex> partial_traces;  // of delta, one per block
    Complex trace_q, trace_q_inv;         // weighted traces of delta
    bool slq_ok = false;                  // both weighted traces <= tol * (1 + |delta|)
};

inline DefectReport defect(const TwoCocycleTable& t, double slq_tol = 1e-8) {
    DefectReport out;
    out.ab = compute_ab(t);
    out.defect = out.ab.a - out.ab.b.transpose();
    out.delta = spectrum::block_project(out.defect, t.S);
    const spectrum::SlqResiduals r = spectrum::slq_residuals(out.delta, t.S);
    out.trace_q = r.trace_q;
    out.trace_q_inv = r.trace_q_inv;
    const double scale = slq_tol * (1.0 + out.delta.norm());
    out.slq_ok = std::abs(out.trace_q) <= scale && std::abs(out.trace_q_inv) <= scale;
    out.partial_traces.reserve(static_cast<std::size_t>(t.S.blocks()));
    for (int blk = 0; blk < t.S.blocks(); ++blk)
        out.partial_traces.push_back(spectrum::partial_trace(out.delta, t.S, blk));
    return out;
}

// A table is a coboundary exactly when A_jk = B_kj at every same-block
// position (j, k), i.e. when the Q-block part of D vanishes; cross-block
// mismatches are always removable.
struct CoboundaryCheck {
    bool coboundary = false;
    double max_violation = 0;  // max same-block |A_jk - B_kj|
    double scale = 1;          // 1 + |A| + |B| (Frobenius)
    int witness_j = -1, witness_k = -1;
};

inline CoboundaryCheck is_coboundary(const TwoCocycleTable& t, double tol = 1e-8) {
    const ABMatrices ab = compute_ab(t);
    CoboundaryCheck c;
    c.scale = 1.0 + ab.a.norm() + ab.b.norm();
    for (int j = 0; j < t.d; ++j)
        for (int k = 0; k < t.d; ++k) {
            if (!t.S.same_block(j, k)) continue;
            const double v = std::abs(ab.a(j, k) - ab.b(k, j));
            if (v > c.max_violation) {
                c.max_violation = v;
                c.witness_j = j;
                c.witness_k = k;
            }
        }
    c.coboundary = c.max_violation <= tol * c.scale;
    return c;
}

// Functional on generators realizing a coboundary table as d psi:
// psi(u_jk) = lambda_jk, psi(u_jk^*) = mu_jk, psi(1) = 0. The defining
// relations are
//
//   A_jk + lambda_jk + mu_kj = 0                     (all j, k)
//   B_kj + lambda_jk + (Q_k/Q_j) mu_kj = 0           (all j, k)
//
// solvable at cross-block positions for any table and at same-block
// positions exactly when A_jk = B_kj there.
struct PsiFunctional {
    ComplexMatrix lambda;  // psi on u_jk
    ComplexMatrix mu;      // psi on u_jk^*
    double residual_a = 0;
    double residual_b = 0;
};

inline PsiFunctional construct_psi(const TwoCocycleTable& t, double tol = 1e-8) {
    const CoboundaryCheck check = is_coboundary(t, tol);
    require(check.coboundary, ErrorCode::NotACoboundary,
            "same-block mismatch " + std::to_string(check.max_violation) + " at (" +
                std::to_string(check.witness_j) + ", " + std::to_string(check.witness_k) + ")");
    const ABMatrices ab = compute_ab(t);
    const int d = t.d;
    PsiFunctional w;
    w.lambda = ComplexMatrix::Zero(d, d);
    w.mu = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            if (t.S.same_block(j, k)) {
                w.lambda(j, k) = -0.5 * ab.a(j, k);
                w.mu(k, j) = -0.5 * ab.a(j, k);
            } else {
                const double rho = t.S.q(k) / t.S.q(j);
                w.lambda(j, k) = -(ab.b(k, j) - rho * ab.a(j, k)) / (1.0 - rho);
                w.mu(k, j) = (ab.b(k, j) - ab.a(j, k)) / (1.0 - rho);
            }
        }
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const Complex ra = ab.a(j, k) + w.lambda(j, k) + w.mu(k, j);
            const Complex rb = ab.b(k, j) + w.lambda(j, k) + (t.S.q(k) / t.S.q(j)) * w.mu(k, j);
            w.residual_a = std::max(w.residual_a, std::abs(ra));
            w.residual_b = std::max(w.residual_b, std::abs(rb));
        }
    return w;
}

// Tabulates the coboundary of psi = phi o pi (normalized so psi(1) = 0) on
// generator pairs:
//
//   omega(x (x) y) = phi(pi(x) pi(y)) - eps(x) phi(pi(y)) - eps(y) phi(pi(x))
//                  + phi(1) eps(x) eps(y),
//
// where phi(X) = sum_ab f_ab X_ab. Only exact representations qualify: a
// truncated corner is not multiplicative, so pi(xy) would be poisoned.
inline TwoCocycleTable coboundary_from_rep(const RepPtr& rep, const ComplexMatrix& f) {
    require(rep->kind == Kind::Exact, ErrorCode::NotExactRepresentation,
            "coboundary pullback needs an exact representation");
    require(f.rows() == rep->m && f.cols() == rep->m, ErrorCode::DimensionMismatch,
            "functional coefficients must match the carrier");
    const int d = rep->d;
    auto phi = [&](const ComplexMatrix& x) { return f.cwiseProduct(x).sum(); };
    TwoCocycleTable t = make_table(rep->S);
    std::vector<ComplexMatrix> pu(static_cast<std::size_t>(d) * d), ps(pu.size());
    ComplexMatrix phi_u(d, d), phi_s(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            pu[static_cast<std::size_t>(j * d + k)] = rep->block(j, k);
            ps[static_cast<std::size_t>(j * d + k)] = rep->block(j, k).adjoint();
            phi_u(j, k) = phi(pu[static_cast<std::size_t>(j * d + k)]);
            phi_s(j, k) = phi(ps[static_cast<std::size_t>(j * d + k)]);
        }
    const Complex phi_1 = phi(ComplexMatrix::Identity(rep->m, rep->m));
    auto entry = [&](const ComplexMatrix& x, Complex px, double ex, const ComplexMatrix& y,
                     Complex py, double ey) {
        return phi(x * y) - ex * py - ey * px + phi_1 * ex * ey;
    };
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const double ex = j == k ? 1.0 : 0.0;
            const auto& xu = pu[static_cast<std::size_t>(j * d + k)];
            const auto& xs = ps[static_cast<std::size_t>(j * d + k)];
            for (int r = 0; r < d; ++r)
                for (int l = 0; l < d; ++l) {
                    const double ey = r == l ? 1.0 : 0.0;
                    const auto& yu = pu[static_cast<std::size_t>(r * d + l)];
                    const auto& ys = ps[static_cast<std::size_t>(r * d + l)];
                    const std::size_t i = t.idx(j, k, r, l);
                    t.uu[i] = entry(xu, phi_u(j, k), ex, yu, phi_u(r, l), ey);
                    t.us[i] = entry(xu, phi_u(j, k), ex, ys, phi_s(r, l), ey);
                    t.su[i] = entry(xs, phi_s(j, k), ex, yu, phi_u(r, l), ey);
                    t.ss[i] = entry(xs, phi_s(j, k), ex, ys, phi_s(r, l), ey);
                }
        }
    return t;
}

// Transplants a table onto chosen coordinates of a larger spectrum: small
// coordinate j maps to target coordinate coords[j], generators off the
// chosen coordinates map to scalars and contribute nothing by
// normalization. The relation contractions only involve Q-ratios, so the
// transplanted table behaves identically as long as the target values at
// the chosen coordinates are proportional to the source values.
inline TwoCocycleTable embed_table(const TwoCocycleTable& small, const BlockSpectrum& target,
                                   const std::vector<int>& coords, double rel_tol = 1e-9) {
    require(small.normalized, ErrorCode::NotNormalized, "table must vanish on scalar slots");
    require(static_cast<int>(coords.size()) == small.d, ErrorCode::DimensionMismatch,
            "need one target coordinate per source coordinate");
    for (std::size_t j = 0; j < coords.size(); ++j) {
        require(coords[j] >= 0 && coords[j] < target.dim(), ErrorCode::DimensionMismatch,
                "target coordinate " + std::to_string(coords[j]) + " out of range");
        for (std::size_t k = 0; k < j; ++k) {
            require(coords[j] != coords[k], ErrorCode::DimensionMismatch,
                    "target coordinates must be distinct");
            const bool small_same = small.S.same_block(static_cast<int>(j), static_cast<int>(k));
            const bool target_same =
                target.index_block[static_cast<std::size_t>(coords[j])] ==
                target.index_block[static_cast<std::size_t>(coords[k])];
            require(small_same == target_same, ErrorCode::IndexNotInBlock,
                    "coordinates " + std::to_string(coords[j]) + ", " + std::to_string(coords[k]) +
                        " do not respect the source block structure");
        }
    }
    const double kappa = target.q(coords[0]) / small.S.q(0);
    for (std::size_t j = 1; j < coords.size(); ++j) {
        const double want = kappa * small.S.q(static_cast<int>(j));
        require(std::abs(target.q(coords[j]) - want) <= rel_tol * want, ErrorCode::SpectrumMismatch,
                "target values at the chosen coordinates are not proportional to the source");
    }
    TwoCocycleTable t = make_table(target);
    for (int j = 0; j < small.d; ++j)
        for (int k = 0; k < small.d; ++k)
            for (int r = 0; r < small.d; ++r)
                for (int l = 0; l < small.d; ++l) {
                    const std::size_t from = small.idx(j, k, r, l);
                    const std::size_t to =
                        t.idx(coords[static_cast<std::size_t>(j)], coords[static_cast<std::size_t>(k)],
                              coords[static_cast<std::size_t>(r)], coords[static_cast<std::size_t>(l)]);
                    t.uu[to] = small.uu[from];
                    t.us[to] = small.us[from];
                    t.su[to] = small.su[from];
                    t.ss[to] = small.ss[from];
                }
    return t;
}

}  // namespace uqcoh::cup
