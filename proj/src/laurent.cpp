#include <radnf/laurent.hpp>

#include <numeric>
#include <sstream>

#include <radnf/errors.hpp>

namespace radnf
{

void LaurentRep::add(const LaurentKey &k, const Rational &c)
{
    if (c.is_zero()) {
        return;
    }
    auto [it, inserted] = m_terms.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) {
            m_terms.erase(it);
        }
    }
}

LaurentRep laurent_add(const LaurentRep &f, const LaurentRep &g)
{
    LaurentRep r = f;
    for (const auto &[k, c] : g.terms()) {
        r.add(k, c);
    }
    return r;
}

LaurentRep laurent_sub(const LaurentRep &f, const LaurentRep &g)
{
    LaurentRep r = f;
    for (const auto &[k, c] : g.terms()) {
        r.add(k, -c);
    }
    return r;
}

LaurentRep laurent_mul(const LaurentRep &f, const LaurentRep &g)
{
    LaurentRep r(f.n());
    for (const auto &[kf, cf] : f.terms()) {
        for (const auto &[kg, cg] : g.terms()) {
            LaurentKey k = kf;
            k.a += kg.a;
            k.s += kg.s;
            for (std::size_t i = 0; i < k.beta.size(); ++i) {
                k.beta[i] += kg.beta[i];
                k.gamma[i] += kg.gamma[i];
            }
            r.add(k, cf * cg);
        }
    }
    return r;
}

namespace
{

int eta_degree(const LaurentKey &k)
{
    return std::accumulate(k.gamma.begin(), k.gamma.end(), 0);
}

int y_degree(const LaurentKey &k)
{
    return std::accumulate(k.beta.begin(), k.beta.end(), 0);
}

} // namespace

LaurentRep laurent_mul(const LaurentRep &f, const LaurentRep &g, const LaurentWindow &window)
{
    LaurentRep r(f.n());
    for (const auto &[kf, cf] : f.terms()) {
        const int ff = kf.a + eta_degree(kf), yf = y_degree(kf), wf = kf.s + eta_degree(kf);
        for (const auto &[kg, cg] : g.terms()) {
            if (ff + kg.a + eta_degree(kg) >= window.caps.N || yf + y_degree(kg) > window.caps.M
                || wf + kg.s + eta_degree(kg) < window.min_weight) {
                continue;
            }
            LaurentKey k = kf;
            k.a += kg.a;
            k.s += kg.s;
            for (std::size_t i = 0; i < k.beta.size(); ++i) {
                k.beta[i] += kg.beta[i];
                k.gamma[i] += kg.gamma[i];
            }
            r.add(k, cf * cg);
        }
    }
    return r;
}

LaurentRep laurent_derive(const LaurentRep &f, canonical_var v, int index)
{
    LaurentRep r(f.n());
    for (const auto &[k, c] : f.terms()) {
        LaurentKey d = k;
        int e = 0;
        switch (v) {
            case canonical_var::y:
                e = d.beta.at(index)--;
                break;
            case canonical_var::z:
                e = d.a--;
                break;
            case canonical_var::eta:
                e = d.gamma.at(index)--;
                break;
            case canonical_var::zeta:
                e = d.s--;
                break;
        }
        if (e != 0) {
            r.add(d, c * Rational(e));
        }
    }
    return r;
}

LaurentRep to_canonical(const JetSeries &a, int weight)
{
    LaurentRep r(a.caps().n);
    for (const auto &[m, c] : a.terms()) {
        const int theta_degree = std::accumulate(m.alpha.begin(), m.alpha.end(), 0);
        r.add(LaurentKey{m.beta, m.a, m.alpha, weight - theta_degree}, c);
    }
    return r;
}

LaurentRep canonical_bracket(const LaurentRep &f, const LaurentRep &g)
{
    const int d = f.n() - 1;
    LaurentRep r(f.n());
    for (int i = 0; i < d; ++i) {
        r = laurent_add(r, laurent_mul(laurent_derive(f, canonical_var::eta, i), laurent_derive(g, canonical_var::y, i)));
        r = laurent_sub(r, laurent_mul(laurent_derive(f, canonical_var::y, i), laurent_derive(g, canonical_var::eta, i)));
    }
    r = laurent_add(r, laurent_mul(laurent_derive(f, canonical_var::zeta), laurent_derive(g, canonical_var::z)));
    r = laurent_sub(r, laurent_mul(laurent_derive(f, canonical_var::z), laurent_derive(g, canonical_var::zeta)));
    return r;
}

LaurentRep canonical_bracket(const LaurentRep &f, const LaurentRep &g, const LaurentWindow &w)
{
    const int d = f.n() - 1;
    LaurentRep r(f.n());
    for (int i = 0; i < d; ++i) {
        r = laurent_add(r, laurent_mul(laurent_derive(f, canonical_var::eta, i), laurent_derive(g, canonical_var::y, i), w));
        r = laurent_sub(r, laurent_mul(laurent_derive(f, canonical_var::y, i), laurent_derive(g, canonical_var::eta, i), w));
    }
    r = laurent_add(r, laurent_mul(laurent_derive(f, canonical_var::zeta), laurent_derive(g, canonical_var::z), w));
    r = laurent_sub(r, laurent_mul(laurent_derive(f, canonical_var::z), laurent_derive(g, canonical_var::zeta), w));
    return r;
}

JetSeries from_canonical(const LaurentRep &f, int weight, const JetCaps &caps)
{
    std::vector<std::pair<Monomial, Rational>> entries;
    for (const auto &[k, c] : f.terms()) {
        const int eta_degree = std::accumulate(k.gamma.begin(), k.gamma.end(), 0);
        if (k.s != weight - eta_degree) {
            throw oracle_mismatch("canonical term is not homogeneous of degree " + std::to_string(weight));
        }
        Monomial m{k.a, k.gamma, k.beta};
        if (caps.admits(m)) {
            entries.emplace_back(std::move(m), c);
        }
    }
    return make_jet(entries, caps);
}

std::string to_string(const LaurentRep &f)
{
    if (f.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[k, c] : f.terms()) {
        os << (first ? "" : " + ") << c;
        first = false;
        for (std::size_t i = 0; i < k.beta.size(); ++i) {
            if (k.beta[i] != 0) {
                os << "*y" << i + 1 << "^" << k.beta[i];
            }
        }
        if (k.a != 0) {
            os << "*z^" << k.a;
        }
        for (std::size_t i = 0; i < k.gamma.size(); ++i) {
            if (k.gamma[i] != 0) {
                os << "*eta" << i + 1 << "^" << k.gamma[i];
            }
        }
        if (k.s != 0) {
            os << "*zeta^" << k.s;
        }
    }
    return os.str();
}

} // namespace radnf
