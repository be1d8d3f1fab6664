#ifndef RADNF_TEST_SUPPORT_HPP
#define RADNF_TEST_SUPPORT_HPP

#include <cmath>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include <radnf/jet.hpp>
#include <radnf/oracle.hpp>
#include <radnf/symbol.hpp>

namespace radnf::test
{

// Dense reference polynomials: independent of the packed kernels.
using DenseKey = std::tuple<int, std::vector<int>, std::vector<int>>;
using Dense = std::map<DenseKey, Rational>;

inline Dense to_dense(const JetSeries &a)
{
    Dense d;
    for (const auto &[m, c] : a.terms()) {
        d[{m.a, m.alpha, m.beta}] = c;
    }
    return d;
}

inline Dense dense_truncate(const Dense &d, const JetCaps &caps)
{
    Dense out;
    for (const auto &[k, c] : d) {
        Monomial m{std::get<0>(k), std::get<1>(k), std::get<2>(k)};
        if (caps.admits(m) && !c.is_zero()) {
            out[k] = c;
        }
    }
    return out;
}

inline Dense dense_mul(const Dense &f, const Dense &g)
{
    Dense out;
    for (const auto &[kf, cf] : f) {
        for (const auto &[kg, cg] : g) {
            auto alpha = std::get<1>(kf);
            auto beta = std::get<2>(kf);
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                alpha[i] += std::get<1>(kg)[i];
                beta[i] += std::get<2>(kg)[i];
            }
            DenseKey k{std::get<0>(kf) + std::get<0>(kg), alpha, beta};
            out[k] = out[k] + cf * cg;
        }
    }
    Dense clean;
    for (const auto &[k, c] : out) {
        if (!c.is_zero()) {
            clean[k] = c;
        }
    }
    return clean;
}

inline double eval_jet(const JetSeries &a, double z, const std::vector<double> &theta, const std::vector<double> &y)
{
    double s = 0;
    for (const auto &[m, c] : a.terms()) {
        double v = c.to_double() * std::pow(z, m.a);
        for (std::size_t i = 0; i < m.alpha.size(); ++i) {
            v *= std::pow(theta[i], m.alpha[i]) * std::pow(y[i], m.beta[i]);
        }
        s += v;
    }
    return s;
}

// lambda(y) z + terms of filtration >= 2, lambda(0) != 0.
inline JetSeries random_radial_principal(std::mt19937_64 &rng, const JetCaps &caps, int terms = 8)
{
    const int d = caps.dims();
    std::vector<std::pair<Monomial, Rational>> lam;
    lam.emplace_back(make_monomial(caps, 1), Rational(static_cast<long>(1 + rng() % 3), 1 + static_cast<long>(rng() % 2)));
    for (int i = 0; i < 3; ++i) {
        std::vector<int> beta(d, 0);
        beta[rng() % d] = 1 + static_cast<int>(rng() % std::max(1, caps.M));
        Monomial m = make_monomial(caps, 1, {}, beta);
        if (caps.admits(m)) {
            lam.emplace_back(m, Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));
        }
    }
    JetSeries higher = jet_filter(random_jet(rng, caps, caps.N - 1, terms),
                                  [](const Monomial &m) { return m.filtration() >= 2; });
    return jet_add(make_jet(lam, caps), higher);
}

// Radial principal part plus random lower-order components.
inline ClassicalSymbol random_radial_symbol(std::mt19937_64 &rng, const JetCaps &caps, int components, int m = 1)
{
    std::vector<JetSeries> comps{random_radial_principal(rng, caps)};
    for (int j = 1; j < components; ++j) {
        comps.push_back(random_jet(rng, caps, caps.N - 1, 6));
    }
    return ClassicalSymbol(m, std::move(comps));
}

} // namespace radnf::test

#endif
