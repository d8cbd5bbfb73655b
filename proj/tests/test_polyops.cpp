#include <gtest/gtest.h>

#include "hirzebruch/symmetric.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace hirz;
using testgen::cst;
using testgen::elementary;
using testgen::random_poly;
using testgen::random_symmetric;
using testgen::var;

namespace {

Rational factorial(int n) { return oracle::factorial(n); }

} // namespace

TEST(MultiPoly, ArithmeticAndEvaluation) {
    auto l = VarLayout::make(2, {"q"});
    auto x0 = var(l, 0), x1 = var(l, 1), q = MultiPoly::variable(l, "q");
    auto p = (x0 + x1) * (x0 - x1) + q * x0 * cst(l, ratio(1, 2));
    std::vector<Rational> at = {2, 3, 5, 4};
    EXPECT_EQ(p.evaluate(std::span<const Rational>(at)), Rational(4 - 9) + Rational(4));
    EXPECT_EQ(p.degree_in(0), 2);
    EXPECT_EQ(p.total_degree(), 2);
    EXPECT_TRUE((p - p).is_zero());
    EXPECT_EQ(pow(x0 + x1, 3), (x0 + x1) * (x0 + x1) * (x0 + x1));
}

TEST(MultiPoly, ExactDivisionByDifference) {
    auto l = VarLayout::make(1);
    auto x0 = var(l, 0), x1 = var(l, 1);
    auto p = x0 * x0 * x0 - x1 * x1 * x1;
    EXPECT_EQ(exact_divide_by_difference(p, 0, 1), x0 * x0 + x0 * x1 + x1 * x1);
    EXPECT_THROW(exact_divide_by_difference(x0 * x0 + x1, 0, 1), InexactDivision);
}

TEST(MultiPoly, JsonRoundTrip) {
    auto l = VarLayout::make(2, {"q", "eta"});
    Rng rng(4);
    auto p = random_poly(l, rng, 5, 12) * MultiPoly::variable(l, "eta");
    nlohmann::json j = p;
    EXPECT_EQ(multipoly_from_json(j), p);
}

TEST(DividedDifference, BasicValues) {
    auto l = VarLayout::make(1);
    auto x0 = var(l, 0), x1 = var(l, 1);
    EXPECT_EQ(divided_difference(x1, 1), cst(l, 1));
    EXPECT_TRUE(divided_difference(x0 * x1 + x0 + x1, 1).is_zero());
    // (x0^2 x1 - x0 x1^2) / (x1 - x0) = -x0 x1
    EXPECT_EQ(divided_difference(x0 * x0 * x1, 1), -(x0 * x1));
}

TEST(DividedDifference, LeibnizAndInvarianceOnRandomInstances) {
    Rng rng(17);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.integer(1, 3));
        auto l = VarLayout::make(n);
        auto P = random_poly(l, rng, 4, 4), Q = random_poly(l, rng, 3, 3);
        const std::size_t i = static_cast<std::size_t>(rng.integer(1, n));
        auto lhs = divided_difference(P * Q, i);
        auto rhs = divided_difference(P, i) * Q + tau(P, i) * divided_difference(Q, i);
        if (!(lhs == rhs)) ++failures;
        auto d = divided_difference(P, i);
        if (!(tau(d, i) == d)) ++failures;
        if (!divided_difference(d, i).is_zero()) ++failures;
        auto sym = P + tau(P, i);
        if (!divided_difference(sym, i).is_zero()) ++failures;
    }
    EXPECT_EQ(failures, 0);
}

TEST(Vandermonde, SmallCases) {
    auto l = VarLayout::make(1);
    EXPECT_EQ(vandermonde(l), var(l, 0) - var(l, 1));
    auto l2 = VarLayout::make(2);
    auto d = vandermonde(l2);
    EXPECT_EQ(d.size(), 6u);
    EXPECT_EQ(d, (var(l2, 0) - var(l2, 1)) * (var(l2, 0) - var(l2, 2)) * (var(l2, 1) - var(l2, 2)));
    EXPECT_EQ(d.swapped(0, 1), -d);
    EXPECT_TRUE(is_skew_symmetric(d));
}

TEST(Alternation, ElementaryValues) {
    for (int n = 1; n <= 4; ++n) {
        auto l = VarLayout::make(n);
        EXPECT_TRUE(alternation_L(cst(l, 1)).is_zero());
        EXPECT_EQ(alternation_L(vandermonde(l)), cst(l, factorial(n + 1)));
        EXPECT_EQ(alternation_L_factored(vandermonde(l)), cst(l, factorial(n + 1)));
    }
    auto l = VarLayout::make(1);
    std::vector<int> e = {2, 0};
    EXPECT_EQ(alternation_L(MultiPoly::monomial(l, e, 1)), var(l, 0) + var(l, 1));
}

TEST(Alternation, RecoversSymmetricFactor) {
    Rng rng(23);
    int failures = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 5;
        auto l = VarLayout::make(n);
        auto Q = random_symmetric(l, rng);
        ASSERT_TRUE(is_symmetric(Q));
        auto DQ = vandermonde(l) * Q;
        if (!(alternation_L(DQ) == Q * cst(l, factorial(n + 1)))) ++failures;
        if (n <= 4 && !(alternation_L_factored(DQ) == Q * cst(l, factorial(n + 1)))) ++failures;
    }
    EXPECT_EQ(failures, 0);
}

TEST(Alternation, FactoredFormAgreesWithEnumeration) {
    Rng rng(29);
    int failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 4;
        auto l = VarLayout::make(n);
        auto P = random_poly(l, rng, 6, 5);
        if (!(alternation_L(P) == alternation_L_factored(P))) ++failures;
    }
    EXPECT_EQ(failures, 0);
}

TEST(Schur, DeterminantRatios) {
    auto l = VarLayout::make(1);
    EXPECT_EQ(schur(YoungIndex({1, 0}), l), var(l, 0) + var(l, 1));
    EXPECT_EQ(schur(YoungIndex({1, 1}), l), var(l, 0) * var(l, 1));
    EXPECT_EQ(schur(YoungIndex({0, 0, 0}), 2), cst(VarLayout::make(2), 1));
}

TEST(Schur, AgreesWithBialternantAtRationalPoints) {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 1 + trial % 3;
        std::vector<int> parts;
        int top = static_cast<int>(rng.integer(0, 3));
        for (int i = 0; i <= n; ++i) {
            parts.push_back(top);
            top = static_cast<int>(rng.integer(0, top));
        }
        std::vector<Rational> lam(parts.begin(), parts.end());
        auto s = schur(YoungIndex(lam), n);
        EXPECT_TRUE(is_symmetric(s));
        std::vector<Rational> x;
        for (int i = 0; i <= n; ++i) x.push_back(ratio(rng.integer(-9, 9) * 10 + i, rng.integer(1, 4)));
        EXPECT_EQ(s.evaluate(std::span<const Rational>(x)), oracle::schur_value(parts, x));
    }
}

TEST(PuiseuxSignature, SortingAndZeroDetection) {
    auto s = schur_puiseux_signature({{2, 1, 0}});
    EXPECT_FALSE(s.is_zero);
    EXPECT_EQ(s.sign, 1);
    EXPECT_EQ(s.sorted, (std::vector<Rational>{2, 1, 0}));
    EXPECT_TRUE(schur_puiseux_signature({{1, 1, 0}}).is_zero);
    auto r = schur_puiseux_signature({{ratio(-3, 2), 2, 1}});
    EXPECT_EQ(r.sorted, (std::vector<Rational>{2, 1, ratio(-3, 2)}));
    // (-3/2, 2, 1) -> (2, 1, -3/2) is a 3-cycle: even.
    EXPECT_EQ(r.sign, 1);
    EXPECT_EQ(schur_puiseux_signature({{0, 1}}).sign, -1);
}

TEST(SkewReduction, QuotientByVandermonde) {
    auto l = VarLayout::make(2);
    auto d = vandermonde(l);
    auto r = skew_symmetric_reduce(d);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.quotient, cst(l, 1));
    auto e1 = var(l, 0) + var(l, 1) + var(l, 2);
    auto r3 = skew_symmetric_reduce(d * e1 * cst(l, 3));
    EXPECT_EQ(r3.quotient, e1 * cst(l, 3));
    EXPECT_THROW(skew_symmetric_reduce(e1), PreconditionError);
}

TEST(SkewReduction, ToddSumForOneVariablePair) {
    // sum_k (-1)^k prod_{i != k} (q q_k - q q_i + eta - eta q_i q_k) at n = 1 with coefficients in q, eta.
    auto l = VarLayout::make(1, {"q", "eta"}, "q");
    auto q0 = var(l, 0), q1 = var(l, 1);
    auto q = MultiPoly::variable(l, "q"), eta = MultiPoly::variable(l, "eta");
    auto term0 = q * q0 - q * q1 + eta - eta * q1 * q0;
    auto term1 = q * q1 - q * q0 + eta - eta * q0 * q1;
    auto P = term0 - term1;
    EXPECT_EQ(P, cst(l, 2) * q * (q0 - q1));
    auto r = skew_symmetric_reduce(P);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.quotient, cst(l, 2) * q);
}

TEST(SymmetrizeProjection, FixesSymmetricFunctionsAndAverages) {
    auto l = VarLayout::make(2);
    auto x0 = var(l, 0), x1 = var(l, 1), x2 = var(l, 2);
    // Average of x0^2 x1 x2 / e1 over S_3 is x0 x1 x2 e1 / (3 e1).
    auto avg = symmetrize_projection({x0 * x0 * x1 * x2, x0 + x1 + x2});
    RationalFunction expected{x0 * x1 * x2 * (x0 + x1 + x2) * cst(l, ratio(1, 3)), x0 + x1 + x2};
    EXPECT_EQ(avg, expected);
    RationalFunction r{cst(l, 1), x0 - x1 + cst(l, 3)};
    auto p = symmetrize_projection(r);
    // Projection of a projection is itself.
    EXPECT_EQ(symmetrize_projection(p), p);
}
