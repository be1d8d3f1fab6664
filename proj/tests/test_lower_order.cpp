#include <gtest/gtest.h>

#include <radnf/errors.hpp>
#include <radnf/io.hpp>
#include <radnf/lower_order.hpp>

#include "support.hpp"

using namespace radnf;

TEST(LowerOrder, EigenvaluesAndOperator)
{
    const JetCaps c = JetCaps::make(3, 8, 3);
    const Monomial m = make_monomial(c, 2, {1, 1}, {0, 3});
    EXPECT_EQ(homological_eigenvalue(m, 3), 7);
    EXPECT_EQ(printed_homological_eigenvalue(m, 3), 3);
    // H_k b = -{rho^k b, rho^{-1} z} rescaled, i.e. the bracket oracle with weights (-k, 1).
    std::mt19937_64 rng(6);
    const JetSeries z = jet_var(c, Var::z());
    for (int k = 0; k <= 4; ++k) {
        const JetSeries b = random_jet(rng, c, 5, 6);
        EXPECT_EQ(homological_operator(b, k), jet_neg(graded_bracket(b, -k, z, 1)));
    }
}

TEST(LowerOrder, SplitReconstructsInput)
{
    std::mt19937_64 rng(13);
    const JetCaps c = JetCaps::make(2, 6, 4);
    const JetSeries z = jet_var(c, Var::z());
    for (routing r : {routing::z_divisible_to_f, routing::eigen_to_b}) {
        for (int k = 0; k <= 3; ++k) {
            const JetSeries p = random_jet(rng, c, 5, 10);
            const HomologicalSplit s = homological_solve_order_k(p, k, r);
            EXPECT_EQ(jet_add(jet_add(homological_operator(s.b, k), jet_mul(z, s.f)), s.resonant), p);
            if (k > 0) {
                EXPECT_TRUE(s.resonant.is_zero());
            }
            s.resonant.for_each([](const Monomial &m, const Rational &) {
                EXPECT_EQ(m.filtration(), 0);
            });
            if (r == routing::z_divisible_to_f) {
                s.b.for_each([](const Monomial &m, const Rational &) { EXPECT_EQ(m.a, 0); });
            } else {
                EXPECT_TRUE(s.f.is_zero());
            }
        }
    }
}

TEST(LowerOrder, StageZeroKeepsOnlyYTerms)
{
    const JetCaps c = JetCaps::make(2, 5, 3);
    const JetSeries z = jet_var(c, Var::z());
    const JetSeries y = jet_var(c, Var::y(0));
    const JetSeries th = jet_var(c, Var::theta(0));
    // P = z + (y + theta + z) rho: p0 = y, theta goes to b, z to f.
    ClassicalSymbol P(1, {z, jet_add(jet_add(y, th), z)});
    const NormalizationCertificate cert = normalize_full(P, 1, c);
    EXPECT_EQ(cert.p0, y);
    EXPECT_TRUE(cert.replay_pass);
    EXPECT_EQ(with_caps(cert.stages[0].b, c), th);
    EXPECT_EQ(with_caps(cert.stages[0].f, c), jet_constant(c, Rational(1)));
}

TEST(LowerOrder, RandomSymbolsNormalizeAndReplay)
{
    std::mt19937_64 rng(21);
    const JetCaps c = JetCaps::make(2, 5, 2);
    for (int i = 0; i < 4; ++i) {
        const ClassicalSymbol P = test::random_radial_symbol(rng, c, 3);
        const NormalizationCertificate cert = normalize_full(P, 2, c);
        EXPECT_TRUE(cert.replay_pass);
        ASSERT_EQ(cert.replay.size(), 4u);
        EXPECT_EQ(cert.replay[0].target, "z");
        EXPECT_EQ(cert.replay[1].target, "p0(y)");
        cert.p0.for_each([](const Monomial &m, const Rational &) { EXPECT_EQ(m.filtration(), 0); });
        for (const auto &s : cert.stages) {
            EXPECT_TRUE(s.residual.is_zero());
        }
        // Independent replay agrees.
        const auto again = replay_full(cert, P);
        for (const auto &o : again) {
            EXPECT_TRUE(o.pass);
        }
    }
}

TEST(LowerOrder, P0ConstantTermIndependentOfRouting)
{
    std::mt19937_64 rng(77);
    const JetCaps c = JetCaps::make(2, 5, 2);
    for (int i = 0; i < 3; ++i) {
        const ClassicalSymbol P = test::random_radial_symbol(rng, c, 2);
        const auto a = normalize_full(P, 1, c, routing::z_divisible_to_f);
        const auto b = normalize_full(P, 1, c, routing::eigen_to_b);
        EXPECT_TRUE(b.replay_pass);
        EXPECT_EQ(a.p0.constant_term(), b.p0.constant_term());
    }
}

TEST(LowerOrder, HigherOrderInputIsRescaled)
{
    std::mt19937_64 rng(5);
    const JetCaps c = JetCaps::make(2, 5, 2);
    const ClassicalSymbol P = test::random_radial_symbol(rng, c, 2, 3);
    const NormalizationCertificate cert = normalize_full(P, 1, c);
    EXPECT_EQ(cert.input_order, 3);
    EXPECT_TRUE(cert.replay_pass);
}

TEST(LowerOrder, Preconditions)
{
    const JetCaps c = JetCaps::make(2, 3, 2);
    const JetSeries z = jet_var(c, Var::z());
    const JetSeries th = jet_var(c, Var::theta(0));
    EXPECT_THROW(normalize_full(ClassicalSymbol(1, {z}), 3, c), caps_too_small);
    EXPECT_THROW(normalize_full(ClassicalSymbol(1, {th}), 1, c), not_radial);
    // Stage 1 on a symbol whose order-0 part is not y-only.
    ClassicalSymbol bad(1, {z, th, jet_zero(c)});
    EXPECT_THROW(conjugation_discrepancy(bad, 1, jet_zero(c), jet_zero(c)), inductive_hypothesis_violated);
    ClassicalSymbol not_z(1, {jet_add(z, jet_mul(z, th)), jet_zero(c)});
    EXPECT_THROW(conjugation_discrepancy(not_z, 0, jet_zero(c), jet_zero(c)), inductive_hypothesis_violated);
}

TEST(LowerOrder, CertificateJsonRoundTrip)
{
    std::mt19937_64 rng(9);
    const JetCaps c = JetCaps::make(2, 4, 2);
    const ClassicalSymbol P = test::random_radial_symbol(rng, c, 3);
    const NormalizationCertificate cert = normalize_full(P, 2, c);
    const json j = normalization_certificate_to_json(cert);
    const NormalizationCertificate back = normalization_certificate_from_json(json::parse(j.dump()));
    EXPECT_EQ(normalization_certificate_to_json(back), j);
    const auto replay = replay_full(back, P);
    for (const auto &o : replay) {
        EXPECT_TRUE(o.pass);
    }
}
