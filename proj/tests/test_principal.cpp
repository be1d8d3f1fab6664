#include <gtest/gtest.h>

#include <radnf/errors.hpp>
#include <radnf/principal.hpp>
#include <radnf/symbol.hpp>

#include "support.hpp"

using namespace radnf;

namespace
{

struct Fixture {
    JetCaps c = JetCaps::make(2, 6, 4);
    JetSeries z = jet_var(c, Var::z());
    JetSeries th = jet_var(c, Var::theta(0));
    JetSeries y = jet_var(c, Var::y(0));
    JetSeries one = jet_constant(c, Rational(1));
};

} // namespace

TEST(Principal, LinearReduction)
{
    Fixture f;
    const LinearReduction r = linear_reduction(jet_mul(jet_add(jet_scale(f.one, Rational(2)), f.y), f.z));
    EXPECT_EQ(r.lambda, jet_add(jet_scale(f.one, Rational(2)), f.y));
    EXPECT_EQ(level_part(r.reduced, 1), f.z);
    EXPECT_THROW(linear_reduction(f.th), not_radial);
    try {
        linear_reduction(f.th);
    } catch (const not_radial &e) {
        EXPECT_NE(std::string(e.what()).find("∂_θ p|_Λ = 0"), std::string::npos);
    }
}

TEST(Principal, HomologicalSolve)
{
    Fixture f;
    const JetSeries r = jet_add(jet_mul(f.z, f.th), jet_scale(jet_mul(jet_mul(f.z, f.z), f.y), Rational(3)));
    const JetSeries b = homological_solve_principal(r, 2);
    // <<z, b>> = r
    EXPECT_EQ(lagrange_bracket(f.z, b), r);
    EXPECT_THROW(homological_solve_principal(r, 1), bad_filtration);
    EXPECT_THROW(homological_solve_principal(jet_add(r, f.z), 2), bad_filtration);
}

TEST(Principal, ExpAdRequiresFiltrationTwo)
{
    Fixture f;
    EXPECT_THROW(exp_ad_pullback(f.th, f.z), non_convergent);
    EXPECT_EQ(exp_ad_pullback(jet_zero(f.c), f.z), f.z);
}

TEST(Principal, AlreadyNormal)
{
    Fixture f;
    const PrincipalCertificate cert = normalize_principal(f.z, f.c);
    for (const auto &b : cert.generators) {
        EXPECT_TRUE(b.is_zero());
    }
    EXPECT_EQ(with_caps(cert.elliptic_factor, f.c), f.one);
    EXPECT_TRUE(replay_principal(cert, f.z).pass);
}

TEST(Principal, SingleLevelExample)
{
    Fixture f;
    // p = z + z theta1: b_2 = z theta1 removes it; exp(ad b_2) z = z - z theta1.
    const JetSeries p = jet_add(f.z, jet_mul(f.z, f.th));
    const PrincipalCertificate cert = normalize_principal(p, f.c);
    ASSERT_FALSE(cert.generators.empty());
    EXPECT_EQ(with_caps(cert.generators[0], f.c), jet_mul(f.z, f.th));
    const PrincipalReplay r = replay_principal(cert, p);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.normalized, f.z);
}

TEST(Principal, EllipticFactorExample)
{
    Fixture f;
    // p = (2 + y1) z: only the unit is removed.
    const JetSeries lam = jet_add(jet_scale(f.one, Rational(2)), f.y);
    const PrincipalCertificate cert = normalize_principal(jet_mul(lam, f.z), f.c);
    EXPECT_EQ(with_caps(cert.elliptic_factor, f.c), jet_invert(lam));
    EXPECT_TRUE(replay_principal(cert, jet_mul(lam, f.z)).pass);
}

TEST(Principal, RandomRadialSymbolsReplay)
{
    std::mt19937_64 rng(99);
    for (int n : {2, 3}) {
        const JetCaps c = JetCaps::make(n, 5, 3);
        for (int i = 0; i < 6; ++i) {
            const JetSeries p = test::random_radial_principal(rng, c);
            const PrincipalCertificate cert = normalize_principal(p, c);
            const PrincipalReplay r = replay_principal(cert, p);
            EXPECT_TRUE(r.pass) << to_string(p);
            EXPECT_GE(r.defect_order, c.N);
            EXPECT_EQ(cert.generators.size(), static_cast<std::size_t>(cert.working_caps.N - 2));
            // Each generator sits exactly at its level.
            for (std::size_t l = 0; l < cert.generators.size(); ++l) {
                const int fo = filtration_order(cert.generators[l]);
                EXPECT_TRUE(fo == infinite_order || fo == static_cast<int>(l) + 2);
            }
        }
    }
}

TEST(Principal, ReplayDetectsTamperedCertificate)
{
    Fixture f;
    const JetSeries p = jet_add(f.z, jet_mul(f.z, f.th));
    PrincipalCertificate cert = normalize_principal(p, f.c);
    cert.generators[0] = jet_zero(cert.working_caps);
    EXPECT_FALSE(replay_principal(cert, p).pass);
}

TEST(Principal, TruncationIsExactOnRequestedCaps)
{
    // Same input at a larger y cap agrees after restriction.
    std::mt19937_64 rng(4);
    const JetCaps c = JetCaps::make(2, 5, 2);
    const JetCaps big = JetCaps::make(2, 5, 6);
    for (int i = 0; i < 4; ++i) {
        const JetSeries p = test::random_radial_principal(rng, c);
        const PrincipalCertificate small = normalize_principal(p, c);
        const PrincipalCertificate large = normalize_principal(with_caps(p, big), big);
        EXPECT_EQ(with_caps(small.elliptic_factor, c), with_caps(large.elliptic_factor, c));
        for (std::size_t l = 0; l < small.generators.size(); ++l) {
            EXPECT_EQ(with_caps(small.generators[l], c), with_caps(large.generators[l], c));
        }
    }
}
