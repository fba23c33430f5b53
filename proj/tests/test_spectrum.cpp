#include <catch2/catch_amalgamated.hpp>

#include "uqcoh/spectrum.hpp"

using Catch::Approx;
using namespace uqcoh;
using spectrum::BlockSpectrum;

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

}  // namespace

TEST_CASE("build groups equal entries and normalizes the largest to one") {
    const BlockSpectrum s = spectrum::build({2.0, 2.0, 0.5});
    CHECK(s.dim() == 3);
    CHECK(s.blocks() == 2);
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] == Approx(1.0).margin(1e-15));
    CHECK(s.values[1] == Approx(0.25).margin(1e-15));
    CHECK(s.mults == std::vector<int>{2, 1});
    CHECK(s.q(0) == Approx(1.0).margin(1e-15));
    CHECK(s.q(2) == Approx(0.25).margin(1e-15));
    CHECK(s.same_block(0, 1));
    CHECK_FALSE(s.same_block(0, 2));
}

TEST_CASE("build keeps block order decreasing regardless of input order") {
    const BlockSpectrum s = spectrum::build({0.25, 1.0, 0.5});
    CHECK(s.values == std::vector<double>{1.0, 0.5, 0.25});
    CHECK(s.index_block == std::vector<int>{2, 0, 1});
    CHECK(s.block_coords(0) == std::vector<int>{1});
    CHECK(s.block_coords(2) == std::vector<int>{0});
}

TEST_CASE("build rejects empty and non-positive input") {
    CHECK(thrown_code([] { spectrum::build({}); }) == ErrorCode::DimensionMismatch);
    CHECK(thrown_code([] { spectrum::build({1.0, 0.0}); }) == ErrorCode::NonPositiveEntry);
    CHECK(thrown_code([] { spectrum::build({1.0, -2.0}); }) == ErrorCode::NonPositiveEntry);
}

TEST_CASE("build rejects chains that join entries beyond the tolerance") {
    // Consecutive gaps sit inside the tolerance, the whole chain does not.
    const double tol = 1e-12;
    const std::vector<double> diag{1.0, 1.0 - 0.6e-12, 1.0 - 1.2e-12};
    CHECK(thrown_code([&] { spectrum::build(diag, tol); }) == ErrorCode::AmbiguousGrouping);
    // A wider tolerance admits the same chain as one block.
    const BlockSpectrum s = spectrum::build(diag, 1e-11);
    CHECK(s.blocks() == 1);
    CHECK(s.mults == std::vector<int>{3});
}

TEST_CASE("block projection zeroes exactly the cross-block entries") {
    const BlockSpectrum s = spectrum::build({1.0, 1.0, 0.25});
    ComplexMatrix a = ComplexMatrix::Constant(3, 3, Complex(1.0, -2.0));
    const ComplexMatrix p = spectrum::block_project(a, s);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            const Complex want = s.same_block(j, k) ? Complex(1.0, -2.0) : Complex(0, 0);
            CHECK(std::abs(p(j, k) - want) == Approx(0.0).margin(1e-15));
        }
    CHECK(thrown_code([&] {
              spectrum::block_project(ComplexMatrix::Zero(2, 2), s);
          }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("partial trace sums the diagonal of one block") {
    const BlockSpectrum s = spectrum::build({1.0, 1.0, 0.25});
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = Complex(1, 1);
    a(1, 1) = Complex(2, -1);
    a(2, 2) = Complex(-3, 0);
    CHECK(std::abs(spectrum::partial_trace(a, s, 0) - Complex(3, 0)) ==
          Approx(0.0).margin(1e-15));
    CHECK(std::abs(spectrum::partial_trace(a, s, 1) - Complex(-3, 0)) ==
          Approx(0.0).margin(1e-15));
    CHECK(thrown_code([&] { spectrum::partial_trace(a, s, 2); }) == ErrorCode::BlockOutOfRange);
}

TEST_CASE("slq residuals report weighted traces and the off-block distance") {
    const BlockSpectrum s = spectrum::build({1.0, 0.25});
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = Complex(1, 0);
    a(1, 1) = Complex(-4, 0);
    a(0, 1) = Complex(0, 2);  // cross-block
    const spectrum::SlqResiduals r = spectrum::slq_residuals(a, s);
    CHECK(r.off_block == Approx(2.0).margin(1e-15));
    CHECK(std::abs(r.trace_q - Complex(0, 0)) == Approx(0.0).margin(1e-15));     // 1 - 4*0.25
    CHECK(std::abs(r.trace_q_inv - Complex(-15, 0)) == Approx(0.0).margin(1e-15));  // 1 - 4*4
}

TEST_CASE("slq dimension follows the block multiplicities") {
    CHECK(spectrum::slq_dimension(spectrum::build({1.0})) == 0);
    CHECK(spectrum::slq_dimension(spectrum::build({1.0, 1.0})) == 3);
    CHECK(spectrum::slq_dimension(spectrum::build({1.0, 0.25})) == 0);
    CHECK(spectrum::slq_dimension(spectrum::build({1.0, 1.0, 0.25})) == 3);
    CHECK(spectrum::slq_dimension(spectrum::build({1.0, 1.0, 0.5, 0.5, 0.25})) == 7);
}

TEST_CASE("geometric triple detection is order independent") {
    CHECK(spectrum::is_geometric_triple(1.0, 0.5, 0.25));
    CHECK(spectrum::is_geometric_triple(0.25, 1.0, 0.5));
    CHECK(spectrum::is_geometric_triple(0.5, 0.25, 1.0));
    CHECK_FALSE(spectrum::is_geometric_triple(1.0, 0.5, 0.3));
    CHECK_FALSE(spectrum::is_geometric_triple(1.0, 0.64, 0.25));
}

TEST_CASE("geometric triple detection rejects degenerate and non-positive input") {
    CHECK(thrown_code([] { spectrum::is_geometric_triple(1.0, 1.0, 0.5); }) ==
          ErrorCode::DegenerateTriple);
    CHECK(thrown_code([] { spectrum::is_geometric_triple(1.0, 0.5, 0.0); }) ==
          ErrorCode::NonPositiveEntry);
}
