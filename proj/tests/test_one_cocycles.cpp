#include <catch2/catch_amalgamated.hpp>

#include "uqcoh/one_cocycles.hpp"

using Catch::Approx;
using namespace uqcoh;
using cocycle::OneCocycle;
using reps::RepPtr;

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

double off_block_norm(const OneCocycle& c) {
    double s = 0;
    for (int j = 0; j < c.rep->d; ++j)
        for (int k = 0; k < c.rep->d; ++k)
            if (!c.rep->S.same_block(j, k)) s += c.V(j, k).squaredNorm();
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("the counit cocycle space has dimension sum of squared multiplicities") {
    CHECK(cocycle::h1_dimension(spectrum::build({1.0})) == 1);
    CHECK(cocycle::h1_dimension(spectrum::build({1.0, 1.0})) == 4);
    CHECK(cocycle::h1_dimension(spectrum::build({1.0, 0.25})) == 2);
    CHECK(cocycle::h1_dimension(spectrum::build({1.0, 1.0, 0.25})) == 5);
}

TEST_CASE("counit solutions are exactly the block matrices") {
    const RepPtr eps = reps::epsilon(spectrum::build({1.0, 1.0, 0.25}));
    const cocycle::SolveResult sol = cocycle::solve_space(eps);
    CHECK(sol.basis.size() == 5);
    CHECK(sol.gap > 1e10);
    for (const OneCocycle& c : sol.basis) {
        CHECK(off_block_norm(c) == Approx(0.0).margin(1e-12));
        CHECK(cocycle::verify(c).max() == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("solved cocycles over random block representations verify and stay blockwise") {
    for (std::uint64_t seed : {5u, 6u}) {
        const RepPtr r = reps::random_block_unitary(spectrum::build({1.0, 1.0, 0.5}), 2, seed);
        const cocycle::SolveResult sol = cocycle::solve_space(r);
        for (const OneCocycle& c : sol.basis) {
            CHECK(cocycle::verify(c).max() == Approx(0.0).margin(1e-10));
            CHECK(off_block_norm(c) <= 1e-8 * c.norm());
        }
    }
}

TEST_CASE("the derived star values satisfy the exchange identities") {
    // Hand-checkable case: counit over a two-block spectrum. W_jk reduces to
    // -(Q_k/Q_j) V_kj.
    const auto s = spectrum::build({1.0, 0.25});
    const RepPtr eps = reps::epsilon(s);
    std::vector<ComplexVector> v(4, ComplexVector::Zero(1));
    v[0][0] = Complex(2, 1);   // V_00
    v[3][0] = Complex(-1, 3);  // V_11
    const OneCocycle c = cocycle::make_cocycle(eps, v);
    CHECK(std::abs(c.W(0, 0)[0] - Complex(-2, -1)) == Approx(0.0).margin(1e-15));
    CHECK(std::abs(c.W(1, 1)[0] - Complex(1, -3)) == Approx(0.0).margin(1e-15));
    CHECK(std::abs(c.W(0, 1)[0]) == 0.0);
    CHECK(cocycle::verify(c).max() == Approx(0.0).margin(1e-14));
}

TEST_CASE("make_cocycle pads values and validates the shape") {
    const RepPtr r = reps::random_block_unitary(spectrum::build({1.0, 0.25}), 3, 1);
    std::vector<ComplexVector> v(4, ComplexVector::Zero(2));  // shorter than the carrier
    v[0][0] = Complex(1, 0);
    const OneCocycle c = cocycle::make_cocycle(r, v);
    CHECK(c.v[0].size() == 3);
    CHECK(std::abs(c.v[0][2]) == 0.0);

    CHECK(thrown_code([&] {
              cocycle::make_cocycle(r, std::vector<ComplexVector>(3, ComplexVector::Zero(1)));
          }) == ErrorCode::DimensionMismatch);
    CHECK(thrown_code([&] {
              cocycle::make_cocycle(r, std::vector<ComplexVector>(4, ComplexVector::Zero(5)));
          }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("the constraint operator annihilates exactly the solved space") {
    const RepPtr r = reps::random_block_unitary(spectrum::build({1.0, 1.0}), 2, 9);
    const ComplexMatrix L = cocycle::constraint_operator(*r);
    CHECK(L.rows() == 8);
    CHECK(L.cols() == 8);
    const cocycle::SolveResult sol = cocycle::solve_space(r);
    for (const OneCocycle& c : sol.basis) {
        ComplexVector flat(8);
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) flat.segment((j * 2 + k) * 2, 2) = c.V(j, k);
        CHECK((L * flat).norm() == Approx(0.0).margin(1e-10));
    }
}

TEST_CASE("singular values of the counit constraint are cleanly split") {
    const RepPtr eps = reps::epsilon(spectrum::build({1.0, 1.0, 0.25}));
    const cocycle::SolveResult sol = cocycle::solve_space(eps);
    const Eigen::Index total = sol.singular_values.size();
    CHECK(total == 9);
    // Kernel dimension 5 leaves rank 4.
    CHECK(sol.singular_values[3] > 1e-2);
    CHECK(sol.singular_values[4] < 1e-12);
}
