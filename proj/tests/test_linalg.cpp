#include <catch2/catch_amalgamated.hpp>

#include "uqcoh/linalg.hpp"

using Catch::Approx;
using namespace uqcoh;

namespace {

template <typename Fn>
ErrorCode thrown_code(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    throw std::logic_error("call was expected to throw");
}

ComplexMatrix diag_matrix(const std::vector<double>& d) {
    ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                          static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return a;
}

}  // namespace

TEST_CASE("pad and compress are mutually consistent") {
    ComplexVector v(2);
    v << Complex(1, 2), Complex(3, -1);
    const ComplexVector padded = pad(v, 5);
    CHECK(padded.size() == 5);
    CHECK(std::abs(padded[1] - Complex(3, -1)) == Approx(0.0).margin(1e-15));
    CHECK(std::abs(padded[4]) == Approx(0.0).margin(1e-15));
    const ComplexVector back = compress(padded, 2);
    CHECK((back - v).norm() == Approx(0.0).margin(1e-15));
}

TEST_CASE("operator norm is the largest singular value") {
    CHECK(operator_norm(diag_matrix({3.0, 1.0})) == Approx(3.0).margin(1e-12));
    CHECK(operator_norm(ComplexMatrix(0, 0)) == 0.0);
}

TEST_CASE("random streams are deterministic and haar matrices unitary") {
    rnd::Stream r1(42), r2(42), r3(43);
    const ComplexMatrix u1 = rnd::haar_unitary(4, r1);
    const ComplexMatrix u2 = rnd::haar_unitary(4, r2);
    const ComplexMatrix u3 = rnd::haar_unitary(4, r3);
    CHECK((u1 - u2).norm() == 0.0);
    CHECK((u1 - u3).norm() > 1e-3);
    CHECK((u1.adjoint() * u1 - ComplexMatrix::Identity(4, 4)).norm() ==
          Approx(0.0).margin(1e-12));
}

TEST_CASE("nullspace of a clean diagonal splits at the cutoff") {
    const NullspaceResult r = certified_nullspace(diag_matrix({1.0, 1e-16}), 1e-10);
    CHECK(r.basis.cols() == 1);
    CHECK(std::abs(std::abs(r.basis(1, 0)) - 1.0) == Approx(0.0).margin(1e-12));
    CHECK(r.gap >= 1e10);
}

TEST_CASE("nullspace of a full-rank matrix is empty with infinite gap") {
    const NullspaceResult r = certified_nullspace(ComplexMatrix::Identity(3, 3), 1e-10);
    CHECK(r.basis.cols() == 0);
    CHECK(std::isinf(r.gap));
}

TEST_CASE("nullspace of the zero matrix is everything") {
    const NullspaceResult r = certified_nullspace(ComplexMatrix::Zero(3, 3), 1e-10);
    CHECK(r.basis.cols() == 3);
    CHECK(std::isinf(r.gap));
}

TEST_CASE("an unseparated cutoff is rejected") {
    // Kept 2e-10 against discarded 0.5e-10: ratio 4 < 10.
    CHECK(thrown_code([] {
              certified_nullspace(diag_matrix({1.0, 2e-10, 0.5e-10}), 1e-10);
          }) == ErrorCode::IllConditionedGap);
}

TEST_CASE("wide matrices expose exact kernel directions past the row count") {
    ComplexMatrix a = ComplexMatrix::Zero(1, 3);
    a(0, 0) = 1.0;
    const NullspaceResult r = certified_nullspace(a, 1e-10);
    CHECK(r.singular_values.size() == 3);
    CHECK(r.singular_values[0] == Approx(1.0).margin(1e-12));
    CHECK(r.singular_values[2] == 0.0);
    CHECK(r.basis.cols() == 2);
    CHECK(std::isinf(r.gap));
    for (Eigen::Index c = 0; c < 2; ++c)
        CHECK(std::abs(r.basis(0, c)) == Approx(0.0).margin(1e-12));
}

TEST_CASE("nullspace dimension matches a planted rank") {
    rnd::Stream rng(7);
    const ComplexMatrix b = rnd::gaussian_matrix(6, 2, rng);
    const ComplexMatrix c = rnd::gaussian_matrix(2, 6, rng);
    const NullspaceResult r = certified_nullspace(b * c, 1e-10);
    CHECK(r.basis.cols() == 4);
    // Kernel columns really annihilate the matrix.
    CHECK(((b * c) * r.basis).norm() == Approx(0.0).margin(1e-12));
}
