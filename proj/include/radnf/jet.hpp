#ifndef RADNF_JET_HPP
#define RADNF_JET_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <radnf/rational.hpp>

// Truncated jets at the model radial set {z = 0, theta = 0}.
//
// A jet is a finite sum of terms c * z^a theta^alpha y^beta with exact
// rational coefficients, representing a degree-0 homogeneous function near
// the boundary point y = z = theta = rho = 0. Two caps truncate it:
//
//   filtration  a + |alpha| < N   (powers of the ideal generated by z, theta)
//   y-degree    |beta| <= M
//
// Products and derivatives are exact for the stored terms; anything outside
// the caps is dropped.

namespace radnf
{

// Largest supported space dimension; exponents of one monomial are packed
// into 16 bytes.
inline constexpr int max_dimension = 8;

// Filtration order of the zero jet.
inline constexpr int infinite_order = std::numeric_limits<int>::max();

struct Monomial {
    int a = 0;
    std::vector<int> alpha; // theta exponents, length n - 1
    std::vector<int> beta;  // y exponents, length n - 1

    int filtration() const;
    int y_degree() const;

    friend bool operator==(const Monomial &, const Monomial &) = default;
};

struct JetCaps {
    int n = 2;
    int N = 1;
    int M = 0;

    // Validates n in [2, max_dimension], N >= 1, M >= 0 and the packing limits.
    static JetCaps make(int n, int N, int M);

    int dims() const { return n - 1; }
    bool admits(const Monomial &m) const { return m.filtration() < N && m.y_degree() <= M; }

    friend bool operator==(const JetCaps &, const JetCaps &) = default;
};

// A coordinate function of the chart.
struct Var {
    enum class kind { z, theta, y };
    kind k = kind::z;
    int index = 0; // 0-based, ignored for z

    static Var z() { return {kind::z, 0}; }
    static Var theta(int i) { return {kind::theta, i}; }
    static Var y(int i) { return {kind::y, i}; }

    std::string name() const;
};

namespace detail
{

// Byte layout: [total degree, a, alpha..., beta..., 0...]. Lexicographic
// comparison of the bytes is the graded lexicographic order on (a, alpha, beta).
struct packed_monomial {
    std::array<std::uint8_t, 2 * max_dimension> bytes{};

    friend auto operator<=>(const packed_monomial &, const packed_monomial &) = default;
    friend bool operator==(const packed_monomial &, const packed_monomial &) = default;
};

struct packed_hash {
    std::size_t operator()(const packed_monomial &m) const noexcept;
};

} // namespace detail

class JetSeries
{
public:
    using term = std::pair<Monomial, Rational>;

    JetSeries() = default;
    explicit JetSeries(const JetCaps &caps) : m_caps(caps) {}

    const JetCaps &caps() const { return m_caps; }
    std::size_t size() const { return m_terms.size(); }
    bool is_zero() const { return m_terms.empty(); }

    Rational coefficient(const Monomial &m) const;
    Rational constant_term() const;
    std::vector<term> terms() const;
    void for_each(const std::function<void(const Monomial &, const Rational &)> &f) const;

    friend bool operator==(const JetSeries &, const JetSeries &) = default;

    // Raw access for the algebra kernels.
    const std::vector<std::pair<detail::packed_monomial, Rational>> &raw() const { return m_terms; }

    // Takes unsorted, possibly repeated, possibly zero terms that all respect caps.
    static JetSeries from_raw(const JetCaps &caps, std::vector<std::pair<detail::packed_monomial, Rational>> terms);

private:
    JetCaps m_caps;
    std::vector<std::pair<detail::packed_monomial, Rational>> m_terms; // sorted, no zeros
};

detail::packed_monomial pack(const JetCaps &caps, const Monomial &m);
Monomial unpack(const JetCaps &caps, const detail::packed_monomial &p);

// Builds a jet, summing duplicates and dropping zeros. Throws dimension_mismatch
// on exponent vectors of the wrong length and cap_violation on out-of-cap terms.
JetSeries make_jet(const std::vector<std::pair<Monomial, Rational>> &entries, const JetCaps &caps);

JetSeries jet_zero(const JetCaps &caps);
JetSeries jet_constant(const JetCaps &caps, const Rational &c);
JetSeries jet_var(const JetCaps &caps, Var v);
Monomial make_monomial(const JetCaps &caps, int a, std::vector<int> alpha = {}, std::vector<int> beta = {});

// Binary operations require identical caps (caps_mismatch otherwise).
JetSeries jet_add(const JetSeries &a, const JetSeries &b);
JetSeries jet_sub(const JetSeries &a, const JetSeries &b);
JetSeries jet_mul(const JetSeries &a, const JetSeries &b);
JetSeries jet_neg(const JetSeries &a);
JetSeries jet_scale(const JetSeries &a, const Rational &c);
JetSeries jet_derive(const JetSeries &a, Var v);

// min(a + |alpha|) over the terms, infinite_order for the zero jet.
int filtration_order(const JetSeries &a);

// Multiplicative inverse within caps; not_elliptic if the constant term vanishes.
JetSeries jet_invert(const JetSeries &a);

// Keeps the terms satisfying pred.
JetSeries jet_filter(const JetSeries &a, const std::function<bool(const Monomial &)> &pred);
// Replaces each coefficient c of monomial m by f(m, c).
JetSeries jet_map(const JetSeries &a, const std::function<Rational(const Monomial &, const Rational &)> &f);
// Terms with a + |alpha| == level.
JetSeries level_part(const JetSeries &a, int level);
// Terms with a + |alpha| < level.
JetSeries below_level(const JetSeries &a, int level);
// Re-expresses a under other caps with the same n, dropping terms that do not fit.
JetSeries with_caps(const JetSeries &a, const JetCaps &caps);
int max_y_degree(const JetSeries &a);

std::string to_string(const JetSeries &a);

inline JetSeries operator+(const JetSeries &a, const JetSeries &b) { return jet_add(a, b); }
inline JetSeries operator-(const JetSeries &a, const JetSeries &b) { return jet_sub(a, b); }
inline JetSeries operator*(const JetSeries &a, const JetSeries &b) { return jet_mul(a, b); }
inline JetSeries operator-(const JetSeries &a) { return jet_neg(a); }
inline JetSeries operator*(const Rational &c, const JetSeries &a) { return jet_scale(a, c); }

} // namespace radnf

#endif
