#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "uqcoh/two_cocycles.hpp"

// Three-term recurrence underlying the corner-representation cocycles. With
// c_k = (1 - q^{2k})^{-1/2}, kappa = a + b, mu = a b:
//
//   b_0 = 1,  b_1 = kappa c_1,
//   b_{k+1} = kappa c_{k+1} b_k - mu (c_{k+1} / c_k) b_{k-1}.
//
// The normalized quotients g_k = (mu / (kappa c_k)) (b_{k-1} / b_k), g_0 = 0,
// satisfy g_k (1 - g_{k-1}) = mu / (kappa c_k)^2 exactly; they increase from
// 0 toward (1 - sqrt(1 - 4 mu / kappa^2)) / 2 <= 1/2, which keeps every b_k
// strictly positive. Consequently b_{k+1} / b_k converges to max(a, b), and
// the derived coordinate sequences are square-summable precisely when
// max(a, b) < q.
//
// A spectrum block triple normalized to (1, p^2, q^2) feeds the recurrence
// in one of two parameter regimes, split by the sign of p^2 - q:
//
//   regime 1 (p^2 < q):  a = p^2,    b = q^3 / p^2,
//   regime 2 (p^2 > q):  a = q p^2,  b = q^2 / p^2,
//
// both square-summable on their regime, with the boundary p^2 = q excluded:
// there the triple is geometric and no regime applies. The recurrence runs
// in long double; doubles are only produced at the boundary of each routine.

namespace uqcoh::recurrence {

using reps::RepPtr;
using spectrum::BlockSpectrum;

inline constexpr double overflow_limit = 1e300;

struct RecurrenceParams {
    double q = 0, a = 0, b = 0;

    double kappa() const { return a + b; }
    double mu() const { return a * b; }
};

namespace detail {

inline void check_params(const RecurrenceParams& pr) {
    require(pr.q > 0 && pr.q < 1, ErrorCode::QOutOfRange, "q must lie in (0, 1)");
    require(pr.a > 0 && pr.b > 0, ErrorCode::NonPositiveEntry, "a, b must be positive");
}

// b_0 .. b_{k_max} without rescaling; suitable for the moderate lengths the
// vector builders need. Values leaving [1/overflow_limit, overflow_limit]
// abort: callers that need long runs use the rescaled loop in
// run_recurrence.
inline std::vector<long double> recurrence_core(const RecurrenceParams& pr, int k_max) {
    check_params(pr);
    require(k_max >= 1, ErrorCode::DimensionMismatch, "need at least one step");
    const long double q2 = static_cast<long double>(pr.q) * pr.q;
    const long double kappa = static_cast<long double>(pr.a) + pr.b;
    const long double mu = static_cast<long double>(pr.a) * pr.b;
    std::vector<long double> b(static_cast<std::size_t>(k_max) + 1);
    long double q2k = q2;
    long double c_prev = 1.0L / std::sqrt(1.0L - q2);
    b[0] = 1.0L;
    b[1] = kappa * c_prev;
    for (int k = 2; k <= k_max; ++k) {
        q2k *= q2;
        const long double c_k = 1.0L / std::sqrt(1.0L - q2k);
        b[static_cast<std::size_t>(k)] = kappa * c_k * b[static_cast<std::size_t>(k - 1)] -
                                         mu * (c_k / c_prev) * b[static_cast<std::size_t>(k - 2)];
        const long double mag = std::fabs(b[static_cast<std::size_t>(k)]);
        require(mag <= overflow_limit && mag >= 1.0L / overflow_limit, ErrorCode::Overflow,
                "recurrence value left the guarded range at step " + std::to_string(k));
        c_prev = c_k;
    }
    return b;
}

}  // namespace detail

struct RecurrenceResult {
    std::vector<double> b;         // b_0 .. b_K; entries below double range flush to zero
    std::vector<double> g;         // g_0 = 0, then the normalized quotients
    double identity_residual = 0;  // max_k relative error in g_k (1 - g_{k-1}) = mu / (kappa c_k)^2
};

inline RecurrenceResult run_recurrence(const RecurrenceParams& pr, int k_max) {
    detail::check_params(pr);
    require(k_max >= 2, ErrorCode::DimensionMismatch, "need at least two steps");
    const long double q2 = static_cast<long double>(pr.q) * pr.q;
    const long double kappa = static_cast<long double>(pr.a) + pr.b;
    const long double mu = static_cast<long double>(pr.a) * pr.b;
    RecurrenceResult out;
    out.b.resize(static_cast<std::size_t>(k_max) + 1);
    out.g.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    // (x, y) carries (b_{k-1}, b_k) / 2^shift; the pair is renormalized so
    // the quotients stay accurate long after b_k leaves the double range.
    long double q2k = q2;
    long double c_prev = 1.0L / std::sqrt(1.0L - q2);
    long double x = 1.0L, y = kappa * c_prev;
    int shift = 0;
    long double g_prev = mu / (kappa * c_prev) * (x / y);
    long double max_rel = 0.0L;
    out.b[0] = 1.0;
    out.b[1] = static_cast<double>(y);
    out.g[1] = static_cast<double>(g_prev);
    for (int k = 2; k <= k_max; ++k) {
        q2k *= q2;
        const long double c_k = 1.0L / std::sqrt(1.0L - q2k);
        const long double next = kappa * c_k * y - mu * (c_k / c_prev) * x;
        require(next != 0.0L, ErrorCode::Overflow,
                "recurrence value vanished at step " + std::to_string(k));
        x = y;
        y = next;
        c_prev = c_k;
        const int e = std::ilogb(y);
        if (e > 512 || e < -512) {
            x = std::scalbn(x, -e);
            y = std::scalbn(y, -e);
            shift += e;
        }
        const long double g_k = mu / (kappa * c_k) * (x / y);
        const long double rhs = mu / (kappa * kappa * c_k * c_k);
        max_rel = std::max(max_rel, std::fabs(g_k * (1.0L - g_prev) - rhs) / rhs);
        g_prev = g_k;
        out.g[static_cast<std::size_t>(k)] = static_cast<double>(g_k);
        const long double full = std::scalbn(y, shift);
        require(std::fabs(full) <= static_cast<long double>(overflow_limit), ErrorCode::Overflow,
                "recurrence value overflowed at step " + std::to_string(k));
        out.b[static_cast<std::size_t>(k)] = static_cast<double>(full);
    }
    out.identity_residual = static_cast<double>(max_rel);
    return out;
}

struct RatioLimit {
    double estimate = 0;  // first consecutive quotient within tol of max(a, b)
    int k_reached = 0;    // smallest k with |b_k / b_{k-1} - max(a, b)| <= tol
};

inline RatioLimit ratio_limit(const RecurrenceParams& pr, double tol = 1e-6, int k_max = 5000) {
    detail::check_params(pr);
    require(tol > 0, ErrorCode::NonPositiveEntry, "tolerance must be positive");
    require(k_max >= 1, ErrorCode::DimensionMismatch, "need at least one step");
    const long double q2 = static_cast<long double>(pr.q) * pr.q;
    const long double kappa = static_cast<long double>(pr.a) + pr.b;
    const long double mu = static_cast<long double>(pr.a) * pr.b;
    const long double limit = std::max(pr.a, pr.b);
    long double q2k = q2;
    long double c_prev = 1.0L / std::sqrt(1.0L - q2);
    long double x = 1.0L, y = kappa * c_prev;
    long double ratio = y / x;
    for (int k = 1; k <= k_max; ++k) {
        if (std::fabs(ratio - limit) <= static_cast<long double>(tol))
            return {static_cast<double>(ratio), k};
        q2k *= q2;
        const long double c_k = 1.0L / std::sqrt(1.0L - q2k);
        const long double next = kappa * c_k * y - mu * (c_k / c_prev) * x;
        require(next != 0.0L, ErrorCode::Overflow,
                "recurrence value vanished at step " + std::to_string(k + 1));
        ratio = next / y;
        x = y;
        y = next;
        c_prev = c_k;
        if (std::fabs(y) > 1e2400L || std::fabs(y) < 1e-2400L) {
            const int e = std::ilogb(y);
            x = std::scalbn(x, -e);
            y = std::scalbn(y, -e);
        }
    }
    fail(ErrorCode::NoConvergenceWithinBudget,
         "consecutive quotients did not reach the limit within " + std::to_string(k_max) +
             " steps; last ratio " + std::to_string(static_cast<double>(ratio)));
}

inline bool is_square_summable(const RecurrenceParams& pr) {
    detail::check_params(pr);
    return std::max(pr.a, pr.b) < pr.q;
}

// Regime selector for a normalized triple (1, p^2, q^2). The boundary
// p^2 = q is the geometric-triple line and belongs to neither regime.
inline int applicable_case(double p, double q, double boundary_rel_tol = 1e-9) {
    reps::check_pq(p, q);
    require(std::abs(p * p - q) > boundary_rel_tol * q, ErrorCode::CaseMismatch,
            "p^2 = q: geometric triple, no regime applies");
    return p * p < q ? 1 : 2;
}

inline RecurrenceParams case1_params(double p, double q) {
    require(applicable_case(p, q) == 1, ErrorCode::CaseMismatch, "p^2 < q required");
    return {q, p * p, q * q * q / (p * p)};
}

inline RecurrenceParams case2_params(double p, double q) {
    require(applicable_case(p, q) == 2, ErrorCode::CaseMismatch, "p^2 > q required");
    return {q, q * p * p, q * q / (p * p)};
}

inline RecurrenceParams case_params(double p, double q) {
    return applicable_case(p, q) == 1 ? case1_params(p, q) : case2_params(p, q);
}

// Smallest N with r^N / (1 - r) < tail_tol for r = max(a, b) / q, the decay
// rate of the recurrence relative to the carrier weights. Requires r < 1,
// which holds on both regimes.
inline int truncation_length(const RecurrenceParams& pr, double tail_tol, int cap = 400) {
    detail::check_params(pr);
    require(tail_tol > 0, ErrorCode::NonPositiveEntry, "tail tolerance must be positive");
    const double r = std::max(pr.a, pr.b) / pr.q;
    require(r < 1.0, ErrorCode::CaseMismatch, "recurrence does not decay against the carrier");
    double tail = r / (1.0 - r);
    int n = 1;
    while (tail >= tail_tol) {
        tail *= r;
        ++n;
        require(n <= cap, ErrorCode::NoConvergenceWithinBudget,
                "tail tolerance needs more than " + std::to_string(cap) + " coordinates");
    }
    return n;
}

namespace detail {

// Carrier length for the vector builders: the tail rule, floored so the
// verification window stays nontrivial.
inline int carrier_length(const RecurrenceParams& pr, double tail_tol, int cap) {
    return std::max(4, truncation_length(pr, tail_tol, cap));
}

inline double windowed_norm(const ComplexVector& v, int window) {
    return v.head(std::min<Eigen::Index>(window, v.size())).norm();
}

}  // namespace detail

// Regime-1 cocycle coefficients on the carrier, solving
//
//   [(1 + q^3/p^4) I - (1/p^2) alpha - (q^3/p^2) alpha^*] v12 = 0,
//   gamma v32 = [(1/p^2) I - alpha^*] v12,
//
// coefficientwise: v12_k = b_k, v32_k = q^{-k} [(1/p^2) b_k - b_{k-1}/c_k].
struct Case1Vectors {
    ComplexVector v12, v32;
    int n_used = 0;
};

inline Case1Vectors build_case1_vectors(double p, double q, double tail_tol, int cap = 400) {
    const RecurrenceParams pr = case1_params(p, q);
    Case1Vectors out;
    out.n_used = detail::carrier_length(pr, tail_tol, cap);
    const int n = out.n_used;
    const auto b = detail::recurrence_core(pr, n - 1);
    const long double q2 = static_cast<long double>(q) * q;
    const long double p2_inv = 1.0L / (static_cast<long double>(p) * p);
    out.v12.resize(n);
    out.v32.resize(n);
    long double qk_inv = 1.0L, q2k = 1.0L;
    out.v12[0] = static_cast<double>(b[0]);
    out.v32[0] = static_cast<double>(p2_inv);
    for (int k = 1; k < n; ++k) {
        qk_inv /= q;
        q2k *= q2;
        const long double s_k = std::sqrt(1.0L - q2k);
        out.v12[k] = static_cast<double>(b[static_cast<std::size_t>(k)]);
        out.v32[k] =
            static_cast<double>(qk_inv * (p2_inv * b[static_cast<std::size_t>(k)] -
                                          s_k * b[static_cast<std::size_t>(k - 1)]));
    }
    return out;
}

// Regime-2 cocycle coefficients on the carrier, solving
//
//   [(1 + p^4/q) I - (p^2/q^2) alpha - q p^2 alpha^*] v23 = 0,
//   gamma v21 = (1/p^2) [I - (p^2/q^2) alpha] v23,
//
// coefficientwise: v23_k = b_k, v21_k = q^{-k} [(1/p^2) b_k - q^{-2} b_{k+1}/c_{k+1}];
// the recurrence runs one step past the carrier to feed the last entry.
struct Case2Vectors {
    ComplexVector v23, v21;
    int n_used = 0;
};

inline Case2Vectors build_case2_vectors(double p, double q, double tail_tol, int cap = 400) {
    const RecurrenceParams pr = case2_params(p, q);
    Case2Vectors out;
    out.n_used = detail::carrier_length(pr, tail_tol, cap);
    const int n = out.n_used;
    const auto b = detail::recurrence_core(pr, n);
    const long double q2 = static_cast<long double>(q) * q;
    const long double q2_inv = 1.0L / q2;
    const long double p2_inv = 1.0L / (static_cast<long double>(p) * p);
    out.v23.resize(n);
    out.v21.resize(n);
    long double qk_inv = 1.0L, q2k1 = q2;  // q^{-k} and q^{2(k+1)}
    for (int k = 0; k < n; ++k) {
        const long double s_next = std::sqrt(1.0L - q2k1);
        out.v23[k] = static_cast<double>(b[static_cast<std::size_t>(k)]);
        out.v21[k] = static_cast<double>(
            qk_inv * (p2_inv * b[static_cast<std::size_t>(k)] -
                      q2_inv * s_next * b[static_cast<std::size_t>(k + 1)]));
        qk_inv /= q;
        q2k1 *= q2;
    }
    return out;
}

// Residuals of the regime-1 system on given coefficient vectors, evaluated
// with the full generators and measured on the leading window coordinates.
inline std::array<double, 2> case1_residuals(double p, double q, const ComplexVector& v12,
                                             const ComplexVector& v32, int window) {
    require(v12.size() == v32.size(), ErrorCode::DimensionMismatch, "carrier sizes differ");
    const int n = static_cast<int>(v12.size());
    const reps::Suq2 g = reps::suq2_generators(q, n);
    const double p2 = p * p;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexVector e1 = ((1.0 + q * q * q / (p2 * p2)) * id - (1.0 / p2) * g.alpha -
                              (q * q * q / p2) * g.alpha.adjoint()) *
                             v12;
    const ComplexVector e2 = g.gamma * v32 - ((1.0 / p2) * id - g.alpha.adjoint()) * v12;
    return {detail::windowed_norm(e1, window), detail::windowed_norm(e2, window)};
}

// Residuals of the regime-2 system, same conventions.
inline std::array<double, 2> case2_residuals(double p, double q, const ComplexVector& v23,
                                             const ComplexVector& v21, int window) {
    require(v23.size() == v21.size(), ErrorCode::DimensionMismatch, "carrier sizes differ");
    const int n = static_cast<int>(v23.size());
    const reps::Suq2 g = reps::suq2_generators(q, n);
    const double p2 = p * p;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexVector e1 =
        ((1.0 + p2 * p2 / q) * id - (p2 / (q * q)) * g.alpha - q * p2 * g.alpha.adjoint()) * v23;
    const ComplexVector e2 = g.gamma * v21 - (1.0 / p2) * (id - (p2 / (q * q)) * g.alpha) * v23;
    return {detail::windowed_norm(e1, window), detail::windowed_norm(e2, window)};
}

struct CornerVectors {
    ComplexVector v11, v13, v31, v33;
};

// Residuals of the four coupled corner-sector equations.
inline std::array<double, 4> corner_residuals(double q, const CornerVectors& v, int window) {
    const int n = static_cast<int>(v.v11.size());
    require(v.v13.size() == n && v.v31.size() == n && v.v33.size() == n,
            ErrorCode::DimensionMismatch, "carrier sizes differ");
    const reps::Suq2 g = reps::suq2_generators(q, n);
    const ComplexMatrix astar = g.alpha.adjoint();
    const ComplexVector e1 = -(1.0 / q) * (g.gamma * v.v13) - g.gamma * v.v31;
    const ComplexVector e2 =
        q * q * (astar * v.v31) - q * (g.gamma * v.v33) + q * (g.gamma * v.v11) - g.alpha * v.v31;
    const ComplexVector e3 = g.gamma * v.v11 + (1.0 / (q * q)) * (g.alpha * v.v13) -
                             astar * v.v13 - g.gamma * v.v33;
    const ComplexVector e4 = q * q * (g.gamma * v.v31) + q * (g.gamma * v.v13);
    return {detail::windowed_norm(e1, window), detail::windowed_norm(e2, window),
            detail::windowed_norm(e3, window), detail::windowed_norm(e4, window)};
}

// Corner-sector solutions from the free data (v13, v33): the system forces
// v31 = -(1/q) v13 and v11 = v33 + gamma^{-1} (alpha^* - q^{-2} alpha) v13.
// gamma^{-1} amplifies coordinate l by q^{-l}, so the combination is formed
// in long double before narrowing.
inline CornerVectors corner_from_free(double q, const ComplexVector& v13,
                                      const ComplexVector& v33) {
    require(v13.size() == v33.size(), ErrorCode::DimensionMismatch, "carrier sizes differ");
    const int n = static_cast<int>(v13.size());
    const reps::Suq2 g = reps::suq2_generators(q, n);
    const ComplexVector mixed = (g.alpha.adjoint() - (1.0 / (q * q)) * g.alpha) * v13;
    CornerVectors out;
    out.v13 = v13;
    out.v33 = v33;
    out.v31 = -(1.0 / q) * v13;
    out.v11 = v33;
    long double ql_inv = 1.0L;
    for (int l = 0; l < n; ++l) {
        out.v11[l] += Complex(static_cast<double>(ql_inv * mixed[l].real()),
                              static_cast<double>(ql_inv * mixed[l].imag()));
        ql_inv /= q;
    }
    return out;
}

// Random corner solution with free data shaped to the carrier weights: the
// q^{2k} envelope on v13 keeps the gamma^{-1} amplification bounded.
inline CornerVectors sample_corner(double q, int n, rnd::Stream& rng) {
    ComplexVector v13(n), v33(n);
    double envelope = 1.0;
    for (int k = 0; k < n; ++k) {
        v13[k] = envelope * rng.cgaussian();
        v33[k] = rng.cgaussian();
        envelope *= q * q;
    }
    return corner_from_free(q, v13, v33);
}

struct CornerPatternReport {
    int solutions = 0;  // dimension of the compressed corner system's kernel
    double gap = 0;
    double max_pattern_residual = 0;  // max over solutions of |v31 + (1/q) v13|
    double max_norm_mismatch = 0;     // max over solutions of | |v13|^2 - q^2 |v31|^2 |
    double max_defect_norm = 0;       // max over solutions of |Delta| of the self cup product
};

// Solves the compressed corner system outright and checks every kernel
// element for the forced coefficient pattern, the norm relation it implies,
// and a vanishing self-cup-product defect. An empty kernel is a finding,
// not an error.
inline CornerPatternReport corner_pattern_check(double p, double q, int window,
                                                double sv_tol = 1e-10) {
    reps::check_pq(p, q);
    require(window >= 1, ErrorCode::DimensionMismatch, "window must be positive");
    const int m = window;
    const reps::Suq2 g = reps::suq2_generators(q, m + 1);
    const ComplexMatrix al = g.alpha.topLeftCorner(m, m);
    const ComplexMatrix as = g.alpha.adjoint().topLeftCorner(m, m);
    const ComplexMatrix ga = g.gamma.topLeftCorner(m, m);
    ComplexMatrix k = ComplexMatrix::Zero(4 * m, 4 * m);
    // Unknown order (v11, v13, v31, v33); one row band per equation.
    k.block(0, m, m, m) = -(1.0 / q) * ga;
    k.block(0, 2 * m, m, m) = -ga;
    k.block(m, 0, m, m) = q * ga;
    k.block(m, 2 * m, m, m) = q * q * as - al;
    k.block(m, 3 * m, m, m) = -q * ga;
    k.block(2 * m, 0, m, m) = ga;
    k.block(2 * m, m, m, m) = (1.0 / (q * q)) * al - as;
    k.block(2 * m, 3 * m, m, m) = -ga;
    k.block(3 * m, m, m, m) = q * ga;
    k.block(3 * m, 2 * m, m, m) = q * q * ga;
    const NullspaceResult null = certified_nullspace(k, sv_tol);
    CornerPatternReport report;
    report.solutions = static_cast<int>(null.basis.cols());
    report.gap = null.gap;
    const RepPtr rep = reps::suq2_corner_rep(p, q, m + 1);
    for (int s = 0; s < report.solutions; ++s) {
        CornerVectors v;
        v.v11 = pad(null.basis.col(s).segment(0, m), m + 1);
        v.v13 = pad(null.basis.col(s).segment(m, m), m + 1);
        v.v31 = pad(null.basis.col(s).segment(2 * m, m), m + 1);
        v.v33 = pad(null.basis.col(s).segment(3 * m, m), m + 1);
        report.max_pattern_residual =
            std::max(report.max_pattern_residual, (v.v31 + (1.0 / q) * v.v13).norm());
        report.max_norm_mismatch =
            std::max(report.max_norm_mismatch,
                     std::abs(v.v13.squaredNorm() - q * q * v.v31.squaredNorm()));
        std::vector<ComplexVector> entries(9, ComplexVector::Zero(m + 1));
        entries[0 * 3 + 0] = v.v11;
        entries[0 * 3 + 2] = v.v13;
        entries[2 * 3 + 0] = v.v31;
        entries[2 * 3 + 2] = v.v33;
        const cocycle::OneCocycle c = cocycle::make_cocycle(rep, entries);
        const cup::DefectReport d = cup::defect(cup::cup_product(c, c));
        report.max_defect_norm = std::max(report.max_defect_norm, d.delta.norm());
    }
    return report;
}

struct TripleParams {
    double p = 0, q = 0;
};

// Normalizes a value triple to (1, p^2, q^2) with 1 > p > q > 0.
inline TripleParams triple_parameters(double x, double y, double z, double rel_tol = 1e-9) {
    require(x > 0 && y > 0 && z > 0, ErrorCode::NonPositiveEntry, "triple values must be positive");
    std::array<double, 3> v{x, y, z};
    std::sort(v.begin(), v.end(), std::greater<double>());
    require(v[0] - v[1] > rel_tol * v[0] && v[1] - v[2] > rel_tol * v[0],
            ErrorCode::DegenerateTriple, "triple values must be distinct");
    return {std::sqrt(v[1] / v[0]), std::sqrt(v[2] / v[0])};
}

struct CaseCocycle {
    int which = 0;  // regime, 1 or 2
    double p = 0, q = 0;
    RecurrenceParams params;
    int n_used = 0;
    cocycle::OneCocycle eta;
};

// Non-coboundary 1-cocycle over the corner representation of a normalized
// triple, built from the regime vectors at the tail-rule truncation.
inline CaseCocycle build_case_cocycle(double p, double q, double tail_tol = 1e-10, int cap = 400) {
    CaseCocycle out;
    out.which = applicable_case(p, q);
    out.p = p;
    out.q = q;
    out.params = out.which == 1 ? case1_params(p, q) : case2_params(p, q);
    std::vector<ComplexVector> entries(9);
    if (out.which == 1) {
        const Case1Vectors v = build_case1_vectors(p, q, tail_tol, cap);
        out.n_used = v.n_used;
        entries.assign(9, ComplexVector::Zero(v.n_used));
        entries[0 * 3 + 1] = v.v12;
        entries[2 * 3 + 1] = v.v32;
    } else {
        const Case2Vectors v = build_case2_vectors(p, q, tail_tol, cap);
        out.n_used = v.n_used;
        entries.assign(9, ComplexVector::Zero(v.n_used));
        entries[1 * 3 + 2] = v.v23;
        entries[1 * 3 + 0] = v.v21;
    }
    out.eta = cocycle::make_cocycle(reps::suq2_corner_rep(p, q, out.n_used), entries);
    return out;
}

}  // namespace uqcoh::recurrence
