#include <catch2/catch_amalgamated.hpp>

#include "uqcoh/q_recurrence.hpp"

using Catch::Approx;
using namespace uqcoh;
using recurrence::RecurrenceParams;

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

TEST_CASE("the first recurrence values match their closed forms") {
    // b_1 = (a + b) / sqrt(1 - q^2); b_2 follows from one explicit step.
    const RecurrenceParams pr{0.5, 0.2, 0.1};
    const recurrence::RecurrenceResult r = recurrence::run_recurrence(pr, 8);
    CHECK(r.b[0] == 1.0);
    CHECK(r.b[1] == Approx(0.3464101615137755).margin(1e-14));
    CHECK(r.b[2] == Approx(0.08944271909999162).margin(1e-14));
}

TEST_CASE("normalized quotients increase toward their bound and certify the identity") {
    for (const RecurrenceParams pr :
         {RecurrenceParams{0.5, 0.2, 0.1}, RecurrenceParams{0.7, 0.3, 0.6},
          RecurrenceParams{0.5, 0.3, 0.3}}) {
        const recurrence::RecurrenceResult r = recurrence::run_recurrence(pr, 400);
        CHECK(r.identity_residual <= 1e-12);
        for (std::size_t k = 2; k < r.g.size(); ++k) CHECK(r.g[k] >= r.g[k - 1] - 1e-12);
        for (double g : r.g) CHECK(g <= 0.5 + 1e-12);
        for (std::size_t k = 0; k + 1 < r.b.size() && r.b[k + 1] != 0.0; ++k)
            CHECK(r.b[k] > 0.0);
    }
}

TEST_CASE("deep runs stay accurate after the values leave the double range") {
    const recurrence::RecurrenceResult r =
        recurrence::run_recurrence(RecurrenceParams{0.5, 0.2, 0.1}, 5000);
    CHECK(r.b[5000] == 0.0);  // far below the double range; quotients must survive
    CHECK(r.g[5000] > 0.0);
    CHECK(r.identity_residual <= 1e-12);
    for (std::size_t k = 2; k < r.g.size(); ++k) CHECK(r.g[k] >= r.g[k - 1] - 1e-12);
}

TEST_CASE("consecutive quotients converge to the larger parameter") {
    const recurrence::RatioLimit r1 =
        recurrence::ratio_limit(RecurrenceParams{0.5, 0.2, 0.1}, 1e-6, 5000);
    CHECK(r1.estimate == Approx(0.2).margin(1e-6));
    CHECK(r1.k_reached <= 5000);
    const recurrence::RatioLimit r2 =
        recurrence::ratio_limit(RecurrenceParams{0.7, 0.3, 0.6}, 1e-6, 5000);
    CHECK(r2.estimate == Approx(0.6).margin(1e-6));
}

TEST_CASE("equal parameters converge too slowly for the quotient test") {
    CHECK(thrown_code([] {
              recurrence::ratio_limit(RecurrenceParams{0.5, 0.3, 0.3}, 1e-6, 3000);
          }) == ErrorCode::NoConvergenceWithinBudget);
}

TEST_CASE("square summability is decided by the larger parameter against q") {
    CHECK(recurrence::is_square_summable(RecurrenceParams{0.5, 0.2, 0.1}));
    CHECK_FALSE(recurrence::is_square_summable(RecurrenceParams{0.5, 0.6, 0.1}));
    CHECK_FALSE(recurrence::is_square_summable(RecurrenceParams{0.5, 0.2, 0.5}));
}

TEST_CASE("growing runs abort instead of overflowing") {
    CHECK(thrown_code([] {
              recurrence::run_recurrence(RecurrenceParams{0.5, 5.0, 3.0}, 2000);
          }) == ErrorCode::Overflow);
}

TEST_CASE("parameter validation of the recurrence") {
    CHECK(thrown_code([] { recurrence::run_recurrence(RecurrenceParams{1.0, 0.2, 0.1}, 8); }) ==
          ErrorCode::QOutOfRange);
    CHECK(thrown_code([] { recurrence::run_recurrence(RecurrenceParams{0.5, 0.0, 0.1}, 8); }) ==
          ErrorCode::NonPositiveEntry);
    CHECK(thrown_code([] { recurrence::run_recurrence(RecurrenceParams{0.5, 0.2, 0.1}, 1); }) ==
          ErrorCode::DimensionMismatch);
}

TEST_CASE("the regime selector splits on the square of p against q") {
    CHECK(recurrence::applicable_case(0.6, 0.5) == 1);
    CHECK(recurrence::applicable_case(0.8, 0.5) == 2);
    CHECK(thrown_code([] { recurrence::applicable_case(std::sqrt(0.5), 0.5); }) ==
          ErrorCode::CaseMismatch);
    CHECK(thrown_code([] { recurrence::applicable_case(0.4, 0.5); }) ==
          ErrorCode::ParameterOrderViolation);
}

TEST_CASE("regime parameters take their closed forms") {
    const RecurrenceParams c1 = recurrence::case1_params(0.6, 0.5);
    CHECK(c1.a == Approx(0.36).margin(1e-15));
    CHECK(c1.b == Approx(0.125 / 0.36).margin(1e-15));
    const RecurrenceParams c2 = recurrence::case2_params(0.8, 0.5);
    CHECK(c2.a == Approx(0.32).margin(1e-15));
    CHECK(c2.b == Approx(0.390625).margin(1e-15));
    CHECK(thrown_code([] { recurrence::case1_params(0.8, 0.5); }) == ErrorCode::CaseMismatch);
    CHECK(thrown_code([] { recurrence::case2_params(0.6, 0.5); }) == ErrorCode::CaseMismatch);
    CHECK(recurrence::case_params(0.6, 0.5).a == Approx(0.36).margin(1e-15));
}

TEST_CASE("the truncation rule returns the smallest admissible length") {
    const int n1 = recurrence::truncation_length(recurrence::case1_params(0.6, 0.5), 1e-10);
    CHECK(n1 == 74);
    const int n2 = recurrence::truncation_length(recurrence::case2_params(0.8, 0.5), 1e-10);
    CHECK(n2 == 100);
    const RecurrenceParams pr = recurrence::case1_params(0.6, 0.5);
    const double r = std::max(pr.a, pr.b) / pr.q;
    CHECK(std::pow(r, n1) / (1.0 - r) < 1e-10);
    CHECK(std::pow(r, n1 - 1) / (1.0 - r) >= 1e-10);
    CHECK(thrown_code([] {
              recurrence::truncation_length(recurrence::case1_params(0.6, 0.5), 1e-300, 400);
          }) == ErrorCode::NoConvergenceWithinBudget);
}

TEST_CASE("regime-1 vectors solve their system away from the truncation edge") {
    const recurrence::Case1Vectors v = recurrence::build_case1_vectors(0.6, 0.5, 1e-10);
    CHECK(v.n_used == 74);
    CHECK(v.v12.size() == 74);
    const auto res = recurrence::case1_residuals(0.6, 0.5, v.v12, v.v32, v.n_used - 1);
    CHECK(res[0] <= 1e-8);
    CHECK(res[1] <= 1e-8);
}

TEST_CASE("regime-2 vectors solve their system away from the truncation edge") {
    const recurrence::Case2Vectors v = recurrence::build_case2_vectors(0.8, 0.5, 1e-10);
    CHECK(v.n_used == 100);
    const auto res = recurrence::case2_residuals(0.8, 0.5, v.v23, v.v21, v.n_used - 1);
    CHECK(res[0] <= 1e-8);
    CHECK(res[1] <= 1e-8);
}

TEST_CASE("carrier lengths never drop below the verification floor") {
    // Very loose tail tolerance: the rule alone would allow a single
    // coordinate.
    const recurrence::Case2Vectors v = recurrence::build_case2_vectors(0.5623, 0.1, 0.5);
    CHECK(v.n_used == 4);
}

TEST_CASE("corner solutions built from free data satisfy all four equations") {
    rnd::Stream rng(31);
    const recurrence::CornerVectors v = recurrence::sample_corner(0.5, 20, rng);
    const auto res = recurrence::corner_residuals(0.5, v, 20);
    for (double r : res) CHECK(r <= 1e-10);
    CHECK((v.v31 + 2.0 * v.v13).norm() == Approx(0.0).margin(1e-14));
}

TEST_CASE("the compressed corner system has exactly the forced solution family") {
    const recurrence::CornerPatternReport rep = recurrence::corner_pattern_check(0.6, 0.5, 20);
    CHECK(rep.solutions == 40);  // two free coefficient vectors of window length
    CHECK(rep.gap >= 10.0);
    CHECK(rep.max_pattern_residual <= 1e-10);
    CHECK(rep.max_norm_mismatch <= 1e-10);
    CHECK(rep.max_defect_norm <= 1e-10);
}

TEST_CASE("triple values normalize into the two-parameter form") {
    const recurrence::TripleParams t = recurrence::triple_parameters(0.04, 1.0, 0.25);
    CHECK(t.p == Approx(0.5).margin(1e-14));
    CHECK(t.q == Approx(0.2).margin(1e-14));
    CHECK(thrown_code([] { recurrence::triple_parameters(1.0, 1.0, 0.5); }) ==
          ErrorCode::DegenerateTriple);
    CHECK(thrown_code([] { recurrence::triple_parameters(1.0, -0.5, 0.25); }) ==
          ErrorCode::NonPositiveEntry);
}

TEST_CASE("regime cocycles verify over their corner representation") {
    const recurrence::CaseCocycle c1 = recurrence::build_case_cocycle(0.6, 0.5);
    CHECK(c1.which == 1);
    CHECK(c1.n_used == 74);
    CHECK(cocycle::verify(c1.eta).max() <= 1e-8);
    const recurrence::CaseCocycle c2 = recurrence::build_case_cocycle(0.8, 0.5);
    CHECK(c2.which == 2);
    CHECK(c2.n_used == 100);
    CHECK(cocycle::verify(c2.eta).max() <= 1e-8);
}

TEST_CASE("regime-1 self cup products have the frozen diagonal defect") {
    const recurrence::CaseCocycle c = recurrence::build_case_cocycle(0.6, 0.5);
    const cup::DefectReport r = cup::defect(cup::cup_product(c.eta, c.eta));
    CHECK(r.delta(0, 0).real() == Approx(-5.49519918).margin(1e-6));
    CHECK(r.delta(1, 1).real() == Approx(27.63978726).margin(1e-6));
    CHECK(r.delta(2, 2).real() == Approx(-17.82049691).margin(1e-6));
    CHECK(std::abs(r.trace_q_inv) <= 1e-12 * (1.0 + r.delta.norm()));
    CHECK(std::abs(r.trace_q) <= 1e-6 * r.delta.norm());
    CHECK(r.slq_ok);
    CHECK_FALSE(cup::is_coboundary(cup::cup_product(c.eta, c.eta)).coboundary);
}

TEST_CASE("regime-2 self cup products have the frozen diagonal defect") {
    const recurrence::CaseCocycle c = recurrence::build_case_cocycle(0.8, 0.5);
    const cup::DefectReport r = cup::defect(cup::cup_product(c.eta, c.eta));
    CHECK(r.delta(0, 0).real() == Approx(4.68959737).margin(1e-6));
    CHECK(r.delta(1, 1).real() == Approx(-8.10647773).margin(1e-6));
    CHECK(r.delta(2, 2).real() == Approx(1.99419352).margin(1e-6));
    CHECK(std::abs(r.trace_q_inv) <= 1e-12 * (1.0 + r.delta.norm()));
}

TEST_CASE("the defect diagonal is a function of the two coefficient norms") {
    // Regime 1 over (1, p^2, q^2): the diagonal must be
    // (-s/p^2, s + t, -q^2 t / p^2) for s, t the squared coefficient norms.
    const recurrence::Case1Vectors v = recurrence::build_case1_vectors(0.6, 0.5, 1e-10);
    const double s = v.v12.squaredNorm();
    const double t = v.v32.squaredNorm();
    const recurrence::CaseCocycle c = recurrence::build_case_cocycle(0.6, 0.5);
    const cup::DefectReport r = cup::defect(cup::cup_product(c.eta, c.eta));
    const double p2 = 0.36, q2 = 0.25;
    CHECK(r.delta(0, 0).real() == Approx(-s / p2).margin(1e-6 * (s + t)));
    CHECK(r.delta(1, 1).real() == Approx(s + t).margin(1e-6 * (s + t)));
    CHECK(r.delta(2, 2).real() == Approx(-q2 * t / p2).margin(1e-6 * (s + t)));
}
