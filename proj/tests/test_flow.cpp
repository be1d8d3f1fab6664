#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <radnf/errors.hpp>
#include <radnf/flow.hpp>

using namespace radnf;

namespace
{

FlowSpec scalar(double a, std::vector<FlowTerm> terms = {}, int v = 1)
{
    FlowSpec s;
    s.k = 1;
    s.A = Eigen::MatrixXd::Constant(1, 1, a);
    s.perturbation = std::move(terms);
    s.vanishing_order = v;
    return s;
}

Eigen::VectorXd pt(std::initializer_list<double> v)
{
    Eigen::VectorXd x(static_cast<int>(v.size()));
    int i = 0;
    for (double d : v) {
        x[i++] = d;
    }
    return x;
}

// x' = -x - x^(p+1) has W_-(x) = x (1 - x^p)^(-1/p): the conjugacy solves
// W' (-x) = -W - W^(p+1) with W'(0) = 1.
double closed_form_wminus(double x, int p)
{
    return x * std::pow(1 - std::pow(x, p), -1.0 / p);
}

} // namespace

TEST(Splitting, Examples)
{
    const Splitting e = stable_splitting(Eigen::Matrix2d::Identity(), {});
    EXPECT_EQ(e.stable.cols(), 0);
    EXPECT_EQ(e.unstable.cols(), 2);

    Eigen::Matrix2d A;
    A << -1, 0, 0, 1;
    const Splitting s = stable_splitting(A, {});
    ASSERT_EQ(s.stable.cols(), 1);
    ASSERT_EQ(s.unstable.cols(), 1);
    EXPECT_NEAR(std::abs(s.stable(0, 0)), 1, 1e-12);
    EXPECT_NEAR(std::abs(s.unstable(1, 0)), 1, 1e-12);
    EXPECT_LT(s.projection_residual, 1e-10);

    Eigen::Matrix2d J;
    J << 0, 1, 0, 0;
    EXPECT_THROW(stable_splitting(J, {}), non_hyperbolic);
}

TEST(Splitting, NontrivialLAndCoupling)
{
    // A annihilates e1; the stable direction of the quotient lifts to an
    // invariant line that is not the coordinate axis.
    Eigen::Matrix3d A;
    A << 0, 1, 0, 0, -1, 0, 0, 0, 2;
    const Splitting s = stable_splitting(A, {0});
    ASSERT_EQ(s.stable.cols(), 1);
    ASSERT_EQ(s.unstable.cols(), 1);
    ASSERT_EQ(s.L.cols(), 1);
    const Eigen::Vector3d v = s.stable.col(0);
    EXPECT_LT((A * v + v).norm(), 1e-12);
    EXPECT_EQ(s.E_minus.cols(), 2);
    EXPECT_EQ(s.E_plus.cols(), 2);

    Eigen::Matrix2d bad;
    bad << 1, 0, 0, -1;
    EXPECT_THROW(stable_splitting(bad, {0}), invalid_flow_spec);
}

TEST(Flow, LinearExamplesAndSemigroup)
{
    FlowParams p;
    EXPECT_NEAR(integrate_flow(scalar(-1), pt({1}), 1, p)[0], std::exp(-1.0), 1e-10);
    EXPECT_EQ(integrate_flow(scalar(-1, {{0, -1, {5}}}, 5), pt({0.4}), 0, p)[0], 0.4);

    FlowSpec s;
    s.k = 2;
    s.A = -Eigen::Matrix2d::Identity();
    s.vanishing_order = 2;
    s.perturbation = {{0, 1.0, {1, 1}}, {1, -0.5, {2, 0}}, {1, 0.3, {0, 3}}};
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.5, 0.5), tt(0, 2);
    for (int i = 0; i < 20; ++i) {
        const Eigen::VectorXd x = pt({u(rng), u(rng)});
        const double a = tt(rng), b = tt(rng);
        const Eigen::VectorXd lhs = integrate_flow(s, x, a + b, p);
        const Eigen::VectorXd rhs = integrate_flow(s, integrate_flow(s, x, b, p), a, p);
        EXPECT_LT((lhs - rhs).norm(), 1e-8);
    }
}

TEST(Flow, StepFailureOnBlowUp)
{
    FlowParams p;
    // x' = x^2 from x = 1 blows up at t = 1.
    EXPECT_THROW(integrate_flow(scalar(0, {{0, 1.0, {2}}}, 2), pt({1}), 2, p), step_failure);
}

TEST(Flow, SpecValidation)
{
    FlowSpec s = scalar(-1, {{0, 1.0, {3}}}, 5);
    EXPECT_THROW(s.validate(), invalid_flow_spec);
    FlowSpec t = scalar(-1, {{1, 1.0, {3}}}, 1);
    EXPECT_THROW(t.validate(), dimension_mismatch);
}

TEST(WMinus, IdentityCases)
{
    FlowParams p;
    const LimitResult lin = wminus_map(scalar(-1), pt({0.3}), p);
    EXPECT_LT(std::abs(lin.value[0] - 0.3), 1e-10);
    const LimitResult zero = wminus_map(scalar(-1, {{0, -1, {9}}}, 8), pt({0}), p);
    EXPECT_EQ(zero.value[0], 0);

    // Points of L are fixed.
    FlowSpec s;
    s.k = 2;
    s.A = Eigen::Matrix2d::Zero();
    s.A(1, 1) = -1;
    s.L = {0};
    s.vanishing_order = 8;
    s.perturbation = {{0, 1.0, {1, 8}}, {1, -1.0, {0, 9}}};
    const LimitResult onL = wminus_map(s, pt({0.25, 0}), p);
    EXPECT_LT((onL.value - pt({0.25, 0})).norm(), p.abs_tol);
}

TEST(WMinus, ClosedFormOneDimensional)
{
    FlowParams p;
    for (int power : {4, 8}) {
        const FlowSpec s = scalar(-1, {{0, -1, {power + 1}}}, power);
        for (double x : {-0.3, -0.1, 0.2, 0.3}) {
            const LimitResult r = wminus_map(s, pt({x}), p);
            EXPECT_TRUE(r.converged);
            EXPECT_LT(r.cauchy_difference, 1e-8);
            EXPECT_NEAR(r.value[0], closed_form_wminus(x, power), 1e-9) << "power " << power << " x " << x;
        }
    }
}

TEST(WMinus, TightenedRerunAgrees)
{
    FlowParams p;
    const FlowSpec s = scalar(-1, {{0, -1, {5}}}, 4);
    const double a = wminus_map(s, pt({0.3}), p).value[0];
    FlowParams tight = p.tightened(100);
    tight.t_max = 128;
    const double b = wminus_map(s, pt({0.3}), tight).value[0];
    EXPECT_NEAR(a, b, 1e-9);
}

TEST(WMinus, DivergesOutsideDomain)
{
    FlowParams p;
    p.t_max = 16;
    // Expanding linear part: U_0(t) x leaves every neighbourhood of L.
    EXPECT_ANY_THROW(wminus_map(scalar(1, {{0, -1, {3}}}, 2), pt({0.5}), p));
}

TEST(Linearization, ResidualsAndTightening)
{
    FlowParams p;
    EXPECT_LT(linearization_residual(scalar(-1), Box{pt({-0.3}), pt({0.3}), 5}, p), 1e-8);

    const FlowSpec s = scalar(-1, {{0, -1, {5}}}, 4);
    const Box box{pt({-0.3}), pt({0.3}), 7};
    const double r1 = linearization_residual(s, box, p);
    const double r2 = linearization_residual(s, box, p.tightened(10));
    EXPECT_LT(r1, 1e-5);
    EXPECT_GE(r1 / r2, 2.0);
}

TEST(Linearization, ShrinksTowardL)
{
    FlowParams p;
    FlowSpec s;
    s.k = 2;
    s.A = -Eigen::Matrix2d::Identity();
    s.vanishing_order = 10;
    s.perturbation = {{0, 1.0, {6, 4}}, {1, -1.0, {0, 11}}, {1, 0.5, {3, 7}}};
    const Box big{pt({-0.4, -0.4}), pt({0.4, 0.4}), 5};
    const double r0 = linearization_residual(s, big, p);
    const double r1 = linearization_residual(s, big.scaled(0.5), p);
    const double r2 = linearization_residual(s, big.scaled(0.25), p);
    EXPECT_GT(r0, r1);
    EXPECT_GT(r1, r2);
}

TEST(Transport, ClosedForms)
{
    FlowParams p;
    p.abs_tol = 1e-12;
    p.rel_tol = 1e-12;
    const FlowSpec V = scalar(-1);
    const TransportSource g{{{0, 1.0, {4}}}, 0.5, 0.9};
    for (double x : {-0.4, -0.1, 0.0, 0.2, 0.45}) {
        // f = -x^4 / 3 while the trajectory stays where the cutoff is 1.
        EXPECT_NEAR(transport_solve(V, g, 1, pt({x}), p), -std::pow(x, 4) / 3, 1e-11);
        EXPECT_LT(transport_residual(V, g, 1, pt({x}), p), 1e-7);
    }
    // Reverse direction: V = x d_x, f = int e^{-ct} g(x e^{-t}) dt = x^4 / (4 + c).
    const FlowSpec W = scalar(1);
    for (double x : {-0.3, 0.25}) {
        EXPECT_NEAR(transport_solve(W, g, 2, pt({x}), p, transport_direction::reverse), std::pow(x, 4) / 6, 1e-11);
        EXPECT_LT(transport_residual(W, g, 2, pt({x}), p, transport_direction::reverse), 1e-7);
    }
    EXPECT_EQ(transport_solve(V, TransportSource{}, 1, pt({0.3}), p), 0);
    EXPECT_EQ(transport_solve(V, g, 1, pt({0.0}), p), 0);
}

TEST(Transport, Divergent)
{
    FlowParams p;
    p.t_max = 32;
    // e^{5t} x^4 e^{-4t} grows.
    EXPECT_THROW(transport_solve(scalar(-1), TransportSource{{{0, 1.0, {4}}}, 0, 0}, 5, pt({0.3}), p),
                 divergent_integral);
}

TEST(Transport, AnisotropicTwoDimensional)
{
    FlowParams p;
    p.abs_tol = 1e-12;
    p.rel_tol = 1e-12;
    FlowSpec V;
    V.k = 2;
    V.A = Eigen::Matrix2d::Zero();
    V.A(0, 0) = -1;
    V.A(1, 1) = -2;
    V.vanishing_order = 1;
    const TransportSource g{{{0, 1.0, {4, 0}}, {0, 1.0, {2, 1}}, {0, 1.0, {0, 3}}}, 0.6, 0.95};
    for (const auto &x : {pt({0.1, 0.2}), pt({-0.3, 0.15}), pt({0.4, -0.2})}) {
        // Monomial x^a y^b decays like e^{-(a + 2b) t}.
        const double exact = -std::pow(x[0], 4) / 3 - x[0] * x[0] * x[1] / 3 - std::pow(x[1], 3) / 5;
        EXPECT_NEAR(transport_solve(V, g, 1, x, p), exact, 1e-11);
        EXPECT_LT(transport_residual(V, g, 1, x, p), 1e-7);
    }
}

TEST(LimitProbe, LinearModelIsProjection)
{
    FlowParams p;
    FlowSpec s;
    s.k = 2;
    s.A = -Eigen::Matrix2d::Identity();
    s.vanishing_order = 1;
    const LimitProbeReport r = limit_map_probe(s, {{pt({0, 0})}, 0.05, 3}, p);
    EXPECT_TRUE(r.stabilized);
    EXPECT_LT(r.linear_model_error, 1e-8);

    // Nontrivial L, coupled linear part: the limit is the oblique projection.
    FlowSpec t;
    t.k = 2;
    t.A.resize(2, 2);
    t.A << 0, 1, 0, -1;
    t.L = {0};
    t.vanishing_order = 1;
    const LimitProbeReport q = limit_map_probe(t, {{pt({0.1, 0})}, 0.05, 3}, p);
    EXPECT_TRUE(q.stabilized);
    EXPECT_LT(q.linear_model_error, 1e-8);
    // lim (y, z) = (y + z, 0): derivative across L in z is (1, 0).
    EXPECT_NEAR(q.estimates[0].plus.back()[0], 1, 1e-8);
}

TEST(LimitProbe, FlatPerturbationStabilizes)
{
    FlowParams p;
    FlowSpec s;
    s.k = 2;
    s.A = Eigen::Matrix2d::Zero();
    s.A(1, 1) = -1;
    s.L = {0};
    s.vanishing_order = 10;
    s.perturbation = {{0, 2.0, {0, 10}}, {1, 1.0, {2, 10}}, {1, -1.0, {0, 11}}};
    const LimitProbeReport r = limit_map_probe(s, {{pt({0, 0}), pt({0.3, 0})}, 0.05, 3}, p);
    EXPECT_EQ(r.nonconvergent_points, 0u);
    EXPECT_LT(r.refinement_spread, 1e-4);
    EXPECT_TRUE(r.stabilized);
}

TEST(LimitProbe, NegativeControlFlagged)
{
    FlowParams p;
    FlowSpec s;
    s.k = 2;
    s.A = Eigen::Matrix2d::Zero();
    s.A(1, 1) = -1;
    s.L = {0};
    s.vanishing_order = 1;
    s.perturbation = {{1, 1.0, {0, 1}}, {1, -1.0, {0, 3}}, {0, 1.0, {0, 2}}};
    const LimitProbeReport r = limit_map_probe(s, {{pt({0, 0})}, 0.05, 3}, p);
    EXPECT_FALSE(r.stabilized);
    EXPECT_GT(r.nonconvergent_points, 0u);
}

TEST(Parallel, PropagatesExceptions)
{
    std::vector<int> hits(50, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] = 1; });
    EXPECT_EQ(std::accumulate(hits.begin(), hits.end(), 0), 50);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7) {
                         throw step_failure("boom");
                     }
                 }),
                 step_failure);
}
