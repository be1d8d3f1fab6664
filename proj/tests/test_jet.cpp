#include <gtest/gtest.h>

#include <radnf/errors.hpp>
#include <radnf/jet.hpp>
#include <radnf/rational.hpp>

#include "support.hpp"

using namespace radnf;

namespace
{

JetCaps caps23()
{
    return JetCaps::make(3, 6, 4);
}

} // namespace

TEST(Rational, ParsesAndNormalizes)
{
    EXPECT_EQ(Rational::parse("4/6"), Rational(2, 3));
    EXPECT_EQ(Rational::parse("-3"), Rational(-3));
    EXPECT_EQ((Rational(1, 2) + Rational(1, 3)).to_string(), "5/6");
    EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
    EXPECT_DOUBLE_EQ(Rational(-1, 4).to_double(), -0.25);
}

TEST(JetCaps, Validation)
{
    EXPECT_THROW(JetCaps::make(1, 4, 2), dimension_mismatch);
    EXPECT_THROW(JetCaps::make(9, 4, 2), dimension_mismatch);
    EXPECT_THROW(JetCaps::make(2, 0, 2), std::invalid_argument);
    const JetCaps c = JetCaps::make(2, 3, 1);
    EXPECT_TRUE(c.admits(make_monomial(c, 2, {0}, {1})));
    EXPECT_FALSE(c.admits(make_monomial(c, 2, {1}, {0})));
    EXPECT_FALSE(c.admits(make_monomial(c, 0, {0}, {2})));
}

TEST(Jet, MakeRejectsOutOfCapsAndWrongDimension)
{
    const JetCaps c = JetCaps::make(2, 3, 1);
    EXPECT_THROW(make_jet({{make_monomial(c, 3), Rational(1)}}, c), cap_violation);
    EXPECT_THROW(make_jet({{Monomial{1, {0, 0}, {0, 0}}, Rational(1)}}, c), dimension_mismatch);
    EXPECT_THROW(jet_var(c, Var::theta(1)), dimension_mismatch);
}

TEST(Jet, MergesDuplicatesAndDropsZeros)
{
    const JetCaps c = caps23();
    const Monomial m = make_monomial(c, 1, {1, 0}, {0, 2});
    const JetSeries a = make_jet({{m, Rational(1, 2)}, {m, Rational(-1, 2)}, {make_monomial(c, 0), Rational(3)}}, c);
    EXPECT_EQ(a.size(), 1u);
    EXPECT_EQ(a.constant_term(), Rational(3));
    EXPECT_TRUE(a.coefficient(m).is_zero());
}

TEST(Jet, PackingRoundTripsAndOrdersByDegree)
{
    const JetCaps c = caps23();
    const Monomial m = make_monomial(c, 2, {1, 3}, {4, 0});
    EXPECT_EQ(unpack(c, pack(c, m)), m);
    EXPECT_LT(pack(c, make_monomial(c, 1)), pack(c, make_monomial(c, 0, {1, 1})));
}

TEST(Jet, ProductMatchesDenseOracle)
{
    std::mt19937_64 rng(11);
    for (int n : {2, 3, 4}) {
        const JetCaps c = JetCaps::make(n, 6, 4);
        for (int trial = 0; trial < 40; ++trial) {
            const JetSeries a = random_jet(rng, c, 6, 7);
            const JetSeries b = random_jet(rng, c, 6, 7);
            const auto expected = test::dense_truncate(test::dense_mul(test::to_dense(a), test::to_dense(b)), c);
            EXPECT_EQ(test::to_dense(jet_mul(a, b)), expected);
            EXPECT_EQ(jet_mul(a, b), jet_mul(b, a));
        }
    }
}

TEST(Jet, AdditionSubtractionScaling)
{
    std::mt19937_64 rng(5);
    const JetCaps c = caps23();
    for (int i = 0; i < 20; ++i) {
        const JetSeries a = random_jet(rng, c, 5, 6);
        const JetSeries b = random_jet(rng, c, 5, 6);
        EXPECT_EQ(jet_sub(jet_add(a, b), b), a);
        EXPECT_TRUE(jet_add(a, jet_neg(a)).is_zero());
        EXPECT_EQ(jet_scale(a, Rational(2)), jet_add(a, a));
    }
}

TEST(Jet, DerivativeAndLeibniz)
{
    std::mt19937_64 rng(8);
    const JetCaps c = JetCaps::make(3, 8, 6);
    const JetSeries z = jet_var(c, Var::z());
    EXPECT_EQ(jet_derive(jet_mul(z, z), Var::z()), jet_scale(z, Rational(2)));
    for (int i = 0; i < 20; ++i) {
        // Degrees small enough that the product stays inside the caps.
        const JetSeries a = random_jet(rng, c, 3, 5);
        const JetSeries b = random_jet(rng, c, 3, 5);
        for (Var v : {Var::z(), Var::theta(0), Var::theta(1), Var::y(0), Var::y(1)}) {
            EXPECT_EQ(jet_derive(jet_mul(a, b), v),
                      jet_add(jet_mul(jet_derive(a, v), b), jet_mul(a, jet_derive(b, v))));
        }
    }
}

TEST(Jet, FiltrationOrder)
{
    const JetCaps c = caps23();
    EXPECT_EQ(filtration_order(jet_zero(c)), infinite_order);
    EXPECT_EQ(filtration_order(jet_var(c, Var::y(0))), 0);
    EXPECT_EQ(filtration_order(jet_mul(jet_var(c, Var::z()), jet_var(c, Var::theta(1)))), 2);
    // y does not count toward the filtration.
    const JetSeries t = make_jet({{make_monomial(c, 1, {0, 2}, {3, 0}), Rational(1)}}, c);
    EXPECT_EQ(filtration_order(t), 3);
    EXPECT_EQ(level_part(jet_add(t, jet_var(c, Var::z())), 1), jet_var(c, Var::z()));
}

TEST(Jet, InverseIsExactWithinCaps)
{
    std::mt19937_64 rng(3);
    const JetCaps c = caps23();
    for (int i = 0; i < 20; ++i) {
        JetSeries u = jet_add(jet_constant(c, Rational(static_cast<long>(1 + rng() % 4))), random_jet(rng, c, 5, 5));
        if (u.constant_term().is_zero()) {
            continue;
        }
        EXPECT_EQ(jet_mul(u, jet_invert(u)), jet_constant(c, Rational(1)));
    }
    EXPECT_THROW(jet_invert(jet_var(c, Var::z())), not_elliptic);
    // 1 / (1 - y) = sum y^k up to the y cap.
    const JetSeries inv = jet_invert(jet_sub(jet_constant(c, Rational(1)), jet_var(c, Var::y(0))));
    EXPECT_EQ(inv.size(), static_cast<std::size_t>(c.M + 1));
}

TEST(Jet, ToStringIsStable)
{
    const JetCaps c = JetCaps::make(2, 4, 2);
    const JetSeries a = make_jet({{make_monomial(c, 2, {1}), Rational(-2, 3)}, {make_monomial(c, 0, {}, {1}), Rational(1)}}, c);
    EXPECT_EQ(to_string(a), "y1 - 2/3*z^2*theta1");
}

TEST(Jet, WithCapsTruncates)
{
    const JetCaps big = JetCaps::make(2, 6, 4);
    const JetCaps small = JetCaps::make(2, 3, 1);
    const JetSeries a = make_jet({{make_monomial(big, 4), Rational(1)}, {make_monomial(big, 1, {}, {1}), Rational(2)},
                                  {make_monomial(big, 1, {}, {2}), Rational(5)}},
                                 big);
    const JetSeries t = with_caps(a, small);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(t.coefficient(make_monomial(small, 1, {}, {1})), Rational(2));
}
