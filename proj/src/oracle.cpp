#include <radnf/oracle.hpp>

#include <radnf/laurent.hpp>
#include <radnf/symbol.hpp>

namespace radnf
{

JetSeries random_jet(std::mt19937_64 &rng, const JetCaps &caps, int max_degree, int terms)
{
    const int d = caps.dims();
    std::vector<std::pair<Monomial, Rational>> entries;
    for (int i = 0; i < terms; ++i) {
        // Spread max_degree over (a, alpha, beta) one unit at a time.
        Monomial m{0, std::vector<int>(d, 0), std::vector<int>(d, 0)};
        const int degree = static_cast<int>(rng() % static_cast<std::uint64_t>(max_degree + 1));
        for (int u = 0; u < degree; ++u) {
            const auto slot = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * d + 1));
            if (slot == 0) {
                ++m.a;
            } else if (slot <= d) {
                ++m.alpha[slot - 1];
            } else {
                ++m.beta[slot - 1 - d];
            }
        }
        if (!caps.admits(m)) {
            continue;
        }
        const long num = static_cast<long>(rng() % 11) - 5;
        const long den = 1 + static_cast<long>(rng() % 4);
        entries.emplace_back(std::move(m), Rational(num, den));
    }
    return make_jet(entries, caps);
}

HamiltonTrial hamilton_oracle_trial(const JetSeries &a, int s, const JetSeries &b, int t)
{
    const JetCaps &caps = a.caps();
    HamiltonTrial out;
    const LaurentRep A = to_canonical(a, s);
    const LaurentRep B = to_canonical(b, t);
    const JetSeries expected = from_canonical(canonical_bracket(A, B), s + t - 1, caps);
    out.bracket_matches = graded_bracket(a, s, b, t) == expected;

    const JetSeries expected_field = from_canonical(canonical_bracket(to_canonical(a, 1), B), t, caps);
    out.field_matches = apply_field(chart_hamilton_field(a), b, t) == expected_field;
    return out;
}

} // namespace radnf
