#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>

#include "uqcoh/errors.hpp"

namespace uqcoh {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Spectral (largest-singular-value) norm.
inline double operator_norm(const ComplexMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.jacobiSvd().singularValues()(0);
}

inline ComplexVector compress(const ComplexVector& v, Eigen::Index m) {
    return v.head(std::min(m, v.size()));
}

// Zero-pads (or keeps) v so that it has length m.
inline ComplexVector pad(const ComplexVector& v, Eigen::Index m) {
    ComplexVector out = ComplexVector::Zero(m);
    out.head(std::min(m, v.size())) = v.head(std::min(m, v.size()));
    return out;
}

namespace rnd {

// Deterministic stream; two streams with equal seeds produce equal draws.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : gen_(seed) {}

    double gaussian() { return normal_(gen_); }

    Complex cgaussian() {
        const double re = normal_(gen_);
        const double im = normal_(gen_);
        return Complex(re, im) / std::sqrt(2.0);
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Stream& rng) {
    ComplexMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j)
        for (Eigen::Index k = 0; k < cols; ++k) a(j, k) = rng.cgaussian();
    return a;
}

// Haar-distributed unitary: QR of a Gaussian matrix with the R-diagonal
// phases folded back in (plain Householder Q alone is not Haar).
inline ComplexMatrix haar_unitary(Eigen::Index n, Stream& rng) {
    ComplexMatrix z = gaussian_matrix(n, n, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    }
    return q;
}

}  // namespace rnd

struct NullspaceResult {
    ComplexMatrix basis;         // orthonormal columns spanning the numerical kernel
    RealVector singular_values;  // all of them, decreasing
    double gap;                  // smallest kept / largest discarded; +inf when one side is empty
};

// Kernel of a dense matrix by full SVD. Singular values <= rel_tol * sigma_max
// count as zero. When both kept and discarded values exist, their ratio must
// be at least min_gap, otherwise the split is not trustworthy.
inline NullspaceResult certified_nullspace(const ComplexMatrix& a, double rel_tol,
                                           double min_gap = 10.0) {
    const Eigen::Index n = a.cols();
    NullspaceResult out;
    // BDC is much faster on large systems; Jacobi is the more accurate choice
    // for the small ones.
    Eigen::VectorXd sv;
    ComplexMatrix v;
    if (n <= 128) {
        Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
        sv = svd.singularValues();
        v = svd.matrixV();
    } else {
        Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
        sv = svd.singularValues();
        v = svd.matrixV();
    }
    // Rows < cols leaves trailing V columns with no singular value; they are
    // exact kernel directions.
    RealVector full = RealVector::Zero(n);
    full.head(sv.size()) = sv;
    out.singular_values = full;

    const double smax = full.size() ? full(0) : 0.0;
    if (smax <= 0.0) {
        out.basis = v;  // zero map: everything is kernel
        out.gap = std::numeric_limits<double>::infinity();
        return out;
    }
    const double cutoff = rel_tol * smax;
    Eigen::Index rank = 0;
    while (rank < full.size() && full(rank) > cutoff) ++rank;

    if (rank == n) {
        out.basis = ComplexMatrix(n, 0);
        out.gap = std::numeric_limits<double>::infinity();
        return out;
    }
    const double largest_discarded = full(rank);
    const double smallest_kept = (rank > 0) ? full(rank - 1) : std::numeric_limits<double>::infinity();
    out.gap = (largest_discarded > 0.0) ? smallest_kept / largest_discarded
                                        : std::numeric_limits<double>::infinity();
    if (out.gap < min_gap)
        fail(ErrorCode::IllConditionedGap,
             "kernel cutoff is not separated: smallest kept " + std::to_string(smallest_kept) +
                 " / largest discarded " + std::to_string(largest_discarded) + " < " +
                 std::to_string(min_gap));
    out.basis = v.rightCols(n - rank);
    return out;
}

}  // namespace uqcoh
