#include <gtest/gtest.h>

#include "hirzebruch/genus.hpp"
#include "hirzebruch/verifier.hpp"
#include "oracles.hpp"

using namespace hirz;

namespace {

const Lattice& square() {
    static const Lattice L = Lattice::square(256);
    return L;
}

const Lattice& skew() {
    static const Lattice L = [] {
        PrecisionScope scope(256);
        return Lattice::from_tau(Complex(Real("0.3"), Real("1.1")), 256);
    }();
    return L;
}

Scalar q(long p, long r = 1) { return Scalar(ratio(p, r)); }

VerifyConfig quick(int points = 40) {
    VerifyConfig c;
    c.points = points;
    return c;
}

} // namespace

TEST(Verdicts, NamesAndExitCodes) {
    for (Verdict v : {Verdict::holds, Verdict::fails, Verdict::inconclusive})
        EXPECT_EQ(verdict_from_name(verdict_name(v)), v);
    EXPECT_EQ(exit_code(Verdict::holds), 0);
    EXPECT_EQ(exit_code(Verdict::fails), 1);
    EXPECT_EQ(exit_code(Verdict::inconclusive), 2);
    EXPECT_THROW(verdict_from_name("maybe"), PreconditionError);
}

TEST(ToddNumeric, ConstantMatchesClosedSum) {
    // alpha = eta - q, beta = -eta - q
    const std::vector<std::pair<Rational, Rational>> params = {{0, -1}, {1, 0}, {1, -1}, {ratio(1, 3), -2}};
    for (const auto& [a, b] : params) {
        Rational qq = -(a + b) / 2, eta = (a - b) / 2;
        for (int n = 1; n <= 4; ++n) {
            auto rep = verify_numeric(todd(Scalar(a), Scalar(b), 8), n, quick());
            EXPECT_EQ(rep.verdict, Verdict::holds) << a << "," << b << " n=" << n;
            EXPECT_LT(rep.residual_max, 1e-40);
            PrecisionScope scope(256);
            Complex expected = to_complex(Scalar(oracle::todd_constant(qq, eta, n)));
            EXPECT_LT(abs_double(rep.C_estimate - expected), 1e-40) << a << "," << b << " n=" << n;
        }
    }
}

TEST(ToddNumeric, SignatureAndTodd) {
    // tanh gives 0 or 1 by parity; t/(1 - e^{-t}) gives 1.
    for (int n = 1; n <= 4; ++n) {
        auto tanh_rep = verify_numeric(todd(q(1), q(-1), 8), n, quick(20));
        EXPECT_LT(abs_double(tanh_rep.C_estimate - Complex(n % 2 == 0 ? 1 : 0)), 1e-40) << n;
        auto td = verify_numeric(todd(q(0), q(-1), 8), n, quick(20));
        EXPECT_LT(abs_double(td.C_estimate - Complex(1)), 1e-40) << n;
    }
}

TEST(ToddNumeric, DirectSumAgreesWithLongDoubleEvaluation) {
    auto f = todd(q(1, 2), q(-3, 2), 8);
    PrecisionScope scope(256);
    std::vector<oracle::cld> u = {{0.1L, 0.2L}, {-0.3L, 0.1L}, {0.25L, -0.2L}};
    auto fl = [](oracle::cld t) {
        oracle::cld ea = std::exp(0.5L * t), eb = std::exp(-1.5L * t);
        return (ea - eb) / (0.5L * eb + 1.5L * ea);
    };
    oracle::cld ref = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        oracle::cld p = 1;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (i != k) p /= fl(u[i] - u[k]);
        ref += p;
    }
    std::vector<Complex> uc;
    for (auto z : u) uc.push_back(Complex::from_double(static_cast<double>(z.real()), static_cast<double>(z.imag())));
    EXPECT_LT(std::abs(oracle::to_cld(hirzebruch_sum(f, uc)) - ref), 1e-15L);
}

TEST(ToddExact, IdentityHoldsWithExpectedConstant) {
    for (int n = 1; n <= 5; ++n) {
        auto res = exact_verify_todd(n);
        EXPECT_TRUE(res.holds) << n << " " << res.counterexample;
        EXPECT_TRUE(res.matches_expected) << n << " " << res.C.to_string();
        for (auto [qq, eta] : std::vector<std::pair<Rational, Rational>>{{ratio(1, 2), ratio(1, 2)}, {3, ratio(-2, 7)}}) {
            std::vector<Rational> vals = {qq, eta};
            EXPECT_EQ(res.C.evaluate(vals), oracle::todd_constant(qq, eta, n)) << n;
        }
    }
    EXPECT_THROW(exact_verify_todd(0), PreconditionError);
}

TEST(ToddExact, ExpectedConstantTemplateAgrees) {
    for (int n = 1; n <= 6; ++n)
        EXPECT_EQ(expected_C_todd<Rational>(ratio(2, 3), ratio(-1, 5), n), oracle::todd_constant(ratio(2, 3), ratio(-1, 5), n));
}

TEST(ToddExact, ReportCarriesThePolynomial) {
    auto rep = exact_todd_report(3);
    EXPECT_EQ(rep.verdict, Verdict::holds);
    ASSERT_TRUE(rep.C_exact);
    EXPECT_EQ(*rep.C_exact, expected_C_todd(3));
}

TEST(SingularNumeric, OddFunctionsGiveZeroForOddN) {
    auto s = sinh_family(0, 1, 8);
    auto rep = verify_numeric(s, 1, quick());
    EXPECT_EQ(rep.verdict, Verdict::holds);
    EXPECT_LT(abs_double(rep.C_estimate), 1e-40);
}

TEST(SingularNumeric, GenericSingFails) {
    auto f = sing_krichever(q(1, 3), q(1, 2), q(1), 8);
    auto rep = verify_numeric(f, 2, quick());
    EXPECT_EQ(rep.verdict, Verdict::fails);
    EXPECT_GT(rep.residual_max, 1e-5);
}

TEST(EllipticNumeric, LevelDHoldsExactlyWhenDDividesNPlusOne) {
    VerifyConfig c = quick(30);
    for (auto [d, n, holds] : std::vector<std::tuple<int, int, bool>>{{2, 1, true}, {2, 2, false}, {3, 2, true}, {2, 3, true}}) {
        auto f = level_d(skew(), d, 1, 0, 8);
        auto rep = nondegenerate_criterion(f, n, c);
        EXPECT_EQ(rep.candidate, holds) << d << " " << n;
        EXPECT_EQ(rep.verification.verdict == Verdict::holds, holds) << d << " " << n;
        EXPECT_TRUE(rep.agreement) << d << " " << n;
        if (holds) {
            EXPECT_LT(abs_double(rep.verification.C_estimate), 1e-30);
            ASSERT_TRUE(rep.order);
            EXPECT_EQ(*rep.order, d);
        }
        ASSERT_TRUE(rep.verification.monodromy);
    }
}

TEST(EllipticNumeric, GenericKricheverFails) {
    PrecisionScope scope(256);
    auto f = krichever(Complex::from_double(0.2, -0.1), Complex::from_double(0.8, 0.9), square(), 8);
    auto rep = nondegenerate_criterion(f, 2, quick(30));
    EXPECT_FALSE(rep.candidate);
    EXPECT_EQ(rep.verification.verdict, Verdict::fails);
    EXPECT_TRUE(rep.agreement);
}

TEST(Abelian, CoefficientsArePeriodicAndMatchTheDeterminant) {
    PrecisionScope scope(256);
    for (const Lattice* L : {&square(), &skew()}) {
        auto rep = abelian_coefficient_check(Complex::from_double(0.7, 0.4), *L, 5, 12);
        EXPECT_EQ(rep.samples, 12);
        EXPECT_TRUE(rep.periodic_ok());
        EXPECT_LT(rep.determinant[static_cast<int>(CornerReading::minus_wp_prime_s)], 1e-35);
        EXPECT_GT(rep.determinant[static_cast<int>(CornerReading::wp_prime_s)], 1e-3);
        EXPECT_GT(rep.determinant[static_cast<int>(CornerReading::wp_s)], 1e-3);
        EXPECT_GT(rep.inverted_prefactor, 1e-3);
        EXPECT_LT(rep.limit_residual, 1e-20);
    }
}

TEST(Reports, JsonRoundTrip) {
    auto f = level_d(skew(), 2, 1, 0, 8);
    auto rep = nondegenerate_criterion(f, 1, quick(10)).verification;
    auto j = report_to_json(rep);
    auto back = report_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(report_to_json(back), j);
    EXPECT_EQ(back.verdict, rep.verdict);
    EXPECT_EQ(back.seed, rep.seed);
    ASSERT_TRUE(back.monodromy);
    EXPECT_EQ(back.monodromy->order, rep.monodromy->order);

    auto exact = exact_todd_report(2);
    auto eback = report_from_json(report_to_json(exact));
    EXPECT_EQ(*eback.C_exact, *exact.C_exact);
}

TEST(Reports, SameSeedIsBitIdentical) {
    auto f = sing_krichever(q(1, 3), q(1, 2), q(1), 8);
    VerifyConfig c = quick(25);
    auto a = verify_numeric(f, 3, c), b = verify_numeric(f, 3, c);
    EXPECT_EQ(a, b);
    EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
    c.seed += 1;
    auto other = verify_numeric(f, 3, c);
    EXPECT_NE(other.residual_max, a.residual_max);
    EXPECT_EQ(other.verdict, a.verdict);
}

TEST(Reports, TooManyRejectionsIsInconclusive) {
    // Every sample tuple lies outside the reliability disc.
    auto f = level_d(square(), 2, 1, 0, 8);
    VerifyConfig c = quick(10);
    c.radius = *f.reliability_radius * 50;
    f.global = nullptr;
    auto rep = verify_numeric(f, 2, c);
    EXPECT_EQ(rep.verdict, Verdict::inconclusive);
}
