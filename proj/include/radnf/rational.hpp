#ifndef RADNF_RATIONAL_HPP
#define RADNF_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace radnf
{

// Exact rational number, always in lowest terms with a positive denominator.
class Rational
{
public:
    Rational() = default;
    Rational(long v) : m_value(v) {}
    Rational(int v) : m_value(static_cast<long>(v)) {}
    Rational(long num, long den);

    // Accepts "p", "-p", "p/q"; throws std::invalid_argument otherwise.
    static Rational parse(std::string_view text);

    bool is_zero() const { return sgn(m_value) == 0; }
    int sign() const { return sgn(m_value); }
    bool is_integer() const { return m_value.get_den() == 1; }

    std::string numerator() const { return m_value.get_num().get_str(); }
    std::string denominator() const { return m_value.get_den().get_str(); }
    std::string to_string() const { return m_value.get_str(); }
    double to_double() const { return m_value.get_d(); }

    Rational &operator+=(const Rational &o)
    {
        m_value += o.m_value;
        return *this;
    }
    Rational &operator-=(const Rational &o)
    {
        m_value -= o.m_value;
        return *this;
    }
    Rational &operator*=(const Rational &o)
    {
        m_value *= o.m_value;
        return *this;
    }
    // Division by zero throws std::domain_error.
    Rational &operator/=(const Rational &o);

    // this += a * b without a temporary.
    void add_product(const Rational &a, const Rational &b);

    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }
    Rational operator-() const
    {
        Rational r;
        mpq_neg(r.m_value.get_mpq_t(), m_value.get_mpq_t());
        return r;
    }

    friend bool operator==(const Rational &a, const Rational &b) { return cmp(a.m_value, b.m_value) == 0; }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b)
    {
        const int c = cmp(a.m_value, b.m_value);
        return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

private:
    mpq_class m_value;
};

} // namespace radnf

#endif
