#include <radnf/rational.hpp>

#include <cctype>
#include <stdexcept>

namespace radnf
{

Rational::Rational(long num, long den)
{
    if (den == 0) {
        throw std::domain_error("zero denominator");
    }
    m_value = mpq_class(num, den);
    m_value.canonicalize();
}

namespace
{

bool is_integer_literal(std::string_view s)
{
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

} // namespace

Rational Rational::parse(std::string_view text)
{
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    const auto den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
    if (!is_integer_literal(num) || (slash != std::string_view::npos && !is_integer_literal(den))) {
        throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
    }
    if (!den.empty() && (den.front() == '-' || den.front() == '+')) {
        throw std::invalid_argument("signed denominator in '" + std::string(text) + "'");
    }
    auto strip_plus = [](std::string_view s) { return std::string(!s.empty() && s.front() == '+' ? s.substr(1) : s); };
    Rational r;
    mpz_class n(strip_plus(num), 10);
    mpz_class d(den.empty() ? std::string("1") : std::string(den), 10);
    if (d == 0) {
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    r.m_value = mpq_class(n, d);
    r.m_value.canonicalize();
    return r;
}

Rational &Rational::operator/=(const Rational &o)
{
    if (o.is_zero()) {
        throw std::domain_error("rational division by zero");
    }
    m_value /= o.m_value;
    return *this;
}

void Rational::add_product(const Rational &a, const Rational &b)
{
    thread_local mpq_class tmp;
    mpq_mul(tmp.get_mpq_t(), a.m_value.get_mpq_t(), b.m_value.get_mpq_t());
    m_value += tmp;
}

} // namespace radnf
