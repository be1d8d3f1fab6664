#ifndef RADNF_LAURENT_HPP
#define RADNF_LAURENT_HPP

#include <compare>
#include <map>
#include <string>
#include <vector>

#include <radnf/jet.hpp>
#include <radnf/rational.hpp>

// Reference representation in canonical cotangent coordinates (y, z, eta, zeta)
// with theta = eta / zeta and rho = 1 / zeta. Polynomial in y, z, eta and
// Laurent in zeta. This is the oracle the chart formulas are checked against;
// nothing on the production path depends on it.

namespace radnf
{

struct LaurentKey {
    std::vector<int> beta;  // y exponents
    int a = 0;              // z exponent
    std::vector<int> gamma; // eta exponents
    int s = 0;              // zeta exponent, any sign

    friend auto operator<=>(const LaurentKey &, const LaurentKey &) = default;
    friend bool operator==(const LaurentKey &, const LaurentKey &) = default;
};

class LaurentRep
{
public:
    LaurentRep() = default;
    explicit LaurentRep(int n) : m_n(n) {}

    int n() const { return m_n; }
    const std::map<LaurentKey, Rational> &terms() const { return m_terms; }
    bool is_zero() const { return m_terms.empty(); }

    void add(const LaurentKey &k, const Rational &c);

    friend bool operator==(const LaurentRep &, const LaurentRep &) = default;

private:
    int m_n = 2;
    std::map<LaurentKey, Rational> m_terms;
};

enum class canonical_var { y, z, eta, zeta };

LaurentRep laurent_add(const LaurentRep &f, const LaurentRep &g);
LaurentRep laurent_sub(const LaurentRep &f, const LaurentRep &g);
LaurentRep laurent_mul(const LaurentRep &f, const LaurentRep &g);
LaurentRep laurent_derive(const LaurentRep &f, canonical_var v, int index = 0);

// zeta^weight * a(y, z, eta / zeta), expanded exactly.
LaurentRep to_canonical(const JetSeries &a, int weight);

// sum_i (d_eta_i f d_y_i g - d_y_i f d_eta_i g) + d_zeta f d_z g - d_z f d_zeta g
LaurentRep canonical_bracket(const LaurentRep &f, const LaurentRep &g);

// Products whose chart image falls outside caps or below min_weight are
// skipped; chart degrees and weights are additive, so this equals bracketing
// first and truncating afterwards.
struct LaurentWindow {
    JetCaps caps;
    int min_weight = 0;
};
LaurentRep laurent_mul(const LaurentRep &f, const LaurentRep &g, const LaurentWindow &window);
LaurentRep canonical_bracket(const LaurentRep &f, const LaurentRep &g, const LaurentWindow &window);

// Inverse of to_canonical at the given weight, truncated to caps. Throws
// oracle_mismatch when a term is not homogeneous of that weight.
JetSeries from_canonical(const LaurentRep &f, int weight, const JetCaps &caps);

std::string to_string(const LaurentRep &f);

} // namespace radnf

#endif
