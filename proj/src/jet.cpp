#include <radnf/jet.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <radnf/errors.hpp>

namespace radnf
{

int Monomial::filtration() const
{
    return a + std::accumulate(alpha.begin(), alpha.end(), 0);
}

int Monomial::y_degree() const
{
    return std::accumulate(beta.begin(), beta.end(), 0);
}

JetCaps JetCaps::make(int n, int N, int M)
{
    if (n < 2 || n > max_dimension) {
        throw dimension_mismatch("space dimension n = " + std::to_string(n) + " outside [2, "
                                 + std::to_string(max_dimension) + "]");
    }
    if (N < 1 || M < 0) {
        throw std::invalid_argument("jet caps need N >= 1 and M >= 0");
    }
    if (N + M > 256) {
        throw std::invalid_argument("jet caps too large (N + M must not exceed 256)");
    }
    return JetCaps{n, N, M};
}

std::string Var::name() const
{
    switch (k) {
        case kind::z:
            return "z";
        case kind::theta:
            return "theta" + std::to_string(index + 1);
        case kind::y:
            return "y" + std::to_string(index + 1);
    }
    return "?";
}

namespace detail
{

std::size_t packed_hash::operator()(const packed_monomial &m) const noexcept
{
    std::uint64_t lo = 0, hi = 0;
    for (int i = 0; i < 8; ++i) {
        lo |= std::uint64_t(m.bytes[i]) << (8 * i);
        hi |= std::uint64_t(m.bytes[8 + i]) << (8 * i);
    }
    return std::size_t(lo * 0x9e3779b97f4a7c15ULL ^ (hi + 0x7f4a7c159e3779b9ULL + (lo << 6) + (lo >> 2)));
}

} // namespace detail

namespace
{

using detail::packed_monomial;
using raw_terms = std::vector<std::pair<packed_monomial, Rational>>;

packed_monomial add_packed(const packed_monomial &x, const packed_monomial &y)
{
    packed_monomial r;
    for (std::size_t i = 0; i < r.bytes.size(); ++i) {
        r.bytes[i] = static_cast<std::uint8_t>(x.bytes[i] + y.bytes[i]);
    }
    return r;
}

int packed_y_degree(const JetCaps &caps, const packed_monomial &p)
{
    int s = 0;
    for (int i = 0; i < caps.dims(); ++i) {
        s += p.bytes[2 + caps.dims() + i];
    }
    return s;
}

int packed_filtration(const JetCaps &caps, const packed_monomial &p)
{
    return p.bytes[0] - packed_y_degree(caps, p);
}

void require_same_caps(const JetSeries &a, const JetSeries &b)
{
    if (!(a.caps() == b.caps())) {
        throw caps_mismatch("jet caps differ");
    }
}

raw_terms collect(std::unordered_map<packed_monomial, Rational, detail::packed_hash> &&acc)
{
    raw_terms out;
    out.reserve(acc.size());
    for (auto &[k, v] : acc) {
        if (!v.is_zero()) {
            out.emplace_back(k, std::move(v));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    return out;
}

} // namespace

packed_monomial pack(const JetCaps &caps, const Monomial &m)
{
    const int d = caps.dims();
    if (static_cast<int>(m.alpha.size()) != d || static_cast<int>(m.beta.size()) != d) {
        throw dimension_mismatch("monomial exponent vectors must have length n - 1 = " + std::to_string(d));
    }
    packed_monomial p;
    int total = m.a;
    if (m.a < 0) {
        throw std::invalid_argument("negative exponent");
    }
    p.bytes[1] = static_cast<std::uint8_t>(m.a);
    for (int i = 0; i < d; ++i) {
        if (m.alpha[i] < 0 || m.beta[i] < 0) {
            throw std::invalid_argument("negative exponent");
        }
        p.bytes[2 + i] = static_cast<std::uint8_t>(m.alpha[i]);
        p.bytes[2 + d + i] = static_cast<std::uint8_t>(m.beta[i]);
        total += m.alpha[i] + m.beta[i];
    }
    p.bytes[0] = static_cast<std::uint8_t>(total);
    return p;
}

Monomial unpack(const JetCaps &caps, const packed_monomial &p)
{
    const int d = caps.dims();
    Monomial m;
    m.a = p.bytes[1];
    m.alpha.resize(d);
    m.beta.resize(d);
    for (int i = 0; i < d; ++i) {
        m.alpha[i] = p.bytes[2 + i];
        m.beta[i] = p.bytes[2 + d + i];
    }
    return m;
}

JetSeries JetSeries::from_raw(const JetCaps &caps, raw_terms terms)
{
    JetSeries r(caps);
    std::sort(terms.begin(), terms.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    for (auto &t : terms) {
        if (!r.m_terms.empty() && r.m_terms.back().first == t.first) {
            r.m_terms.back().second += t.second;
        } else {
            r.m_terms.push_back(std::move(t));
        }
    }
    std::erase_if(r.m_terms, [](const auto &t) { return t.second.is_zero(); });
    return r;
}

Rational JetSeries::coefficient(const Monomial &m) const
{
    if (!m_caps.admits(m)) {
        return Rational{};
    }
    const auto key = pack(m_caps, m);
    auto it = std::lower_bound(m_terms.begin(), m_terms.end(), key,
                               [](const auto &t, const packed_monomial &k) { return t.first < k; });
    return (it != m_terms.end() && it->first == key) ? it->second : Rational{};
}

Rational JetSeries::constant_term() const
{
    // The constant monomial is the smallest key.
    if (!m_terms.empty() && m_terms.front().first == packed_monomial{}) {
        return m_terms.front().second;
    }
    return Rational{};
}

std::vector<JetSeries::term> JetSeries::terms() const
{
    std::vector<term> out;
    out.reserve(m_terms.size());
    for (const auto &[k, v] : m_terms) {
        out.emplace_back(unpack(m_caps, k), v);
    }
    return out;
}

void JetSeries::for_each(const std::function<void(const Monomial &, const Rational &)> &f) const
{
    for (const auto &[k, v] : m_terms) {
        f(unpack(m_caps, k), v);
    }
}

Monomial make_monomial(const JetCaps &caps, int a, std::vector<int> alpha, std::vector<int> beta)
{
    alpha.resize(caps.dims(), 0);
    beta.resize(caps.dims(), 0);
    return Monomial{a, std::move(alpha), std::move(beta)};
}

JetSeries make_jet(const std::vector<std::pair<Monomial, Rational>> &entries, const JetCaps &caps)
{
    raw_terms raw;
    raw.reserve(entries.size());
    for (const auto &[m, c] : entries) {
        if (static_cast<int>(m.alpha.size()) != caps.dims() || static_cast<int>(m.beta.size()) != caps.dims()) {
            throw dimension_mismatch("monomial exponent vectors must have length n - 1 = "
                                     + std::to_string(caps.dims()));
        }
        if (!caps.admits(m)) {
            throw cap_violation("monomial with filtration " + std::to_string(m.filtration()) + " and y-degree "
                                + std::to_string(m.y_degree()) + " exceeds caps N = " + std::to_string(caps.N)
                                + ", M = " + std::to_string(caps.M));
        }
        raw.emplace_back(pack(caps, m), c);
    }
    return JetSeries::from_raw(caps, std::move(raw));
}

JetSeries jet_zero(const JetCaps &caps)
{
    return JetSeries(caps);
}

JetSeries jet_constant(const JetCaps &caps, const Rational &c)
{
    return make_jet({{make_monomial(caps, 0), c}}, caps);
}

JetSeries jet_var(const JetCaps &caps, Var v)
{
    if (v.k != Var::kind::z && (v.index < 0 || v.index >= caps.n - 1)) {
        throw dimension_mismatch("no variable " + v.name() + " when n = " + std::to_string(caps.n));
    }
    Monomial m = make_monomial(caps, 0);
    switch (v.k) {
        case Var::kind::z:
            m.a = 1;
            break;
        case Var::kind::theta:
            m.alpha.at(v.index) = 1;
            break;
        case Var::kind::y:
            m.beta.at(v.index) = 1;
            break;
    }
    if (!caps.admits(m)) {
        return jet_zero(caps);
    }
    return make_jet({{m, Rational(1)}}, caps);
}

JetSeries jet_add(const JetSeries &a, const JetSeries &b)
{
    require_same_caps(a, b);
    raw_terms out;
    out.reserve(a.size() + b.size());
    auto i = a.raw().begin(), j = b.raw().begin();
    while (i != a.raw().end() || j != b.raw().end()) {
        if (j == b.raw().end() || (i != a.raw().end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.raw().end() || j->first < i->first) {
            out.push_back(*j++);
        } else {
            Rational s = i->second + j->second;
            if (!s.is_zero()) {
                out.emplace_back(i->first, std::move(s));
            }
            ++i;
            ++j;
        }
    }
    return JetSeries::from_raw(a.caps(), std::move(out));
}

JetSeries jet_neg(const JetSeries &a)
{
    raw_terms out = a.raw();
    for (auto &t : out) {
        t.second = -t.second;
    }
    return JetSeries::from_raw(a.caps(), std::move(out));
}

JetSeries jet_sub(const JetSeries &a, const JetSeries &b)
{
    return jet_add(a, jet_neg(b));
}

JetSeries jet_scale(const JetSeries &a, const Rational &c)
{
    if (c.is_zero()) {
        return jet_zero(a.caps());
    }
    raw_terms out = a.raw();
    for (auto &t : out) {
        t.second *= c;
    }
    return JetSeries::from_raw(a.caps(), std::move(out));
}

JetSeries jet_mul(const JetSeries &a, const JetSeries &b)
{
    require_same_caps(a, b);
    const JetCaps &caps = a.caps();
    if (a.is_zero() || b.is_zero()) {
        return jet_zero(caps);
    }
    struct graded {
        const packed_monomial *key;
        const Rational *coeff;
        int fil;
        int ydeg;
    };
    auto grade = [&caps](const JetSeries &s) {
        std::vector<graded> g;
        g.reserve(s.size());
        for (const auto &[k, v] : s.raw()) {
            g.push_back({&k, &v, packed_filtration(caps, k), packed_y_degree(caps, k)});
        }
        std::sort(g.begin(), g.end(), [](const graded &x, const graded &y) { return x.fil < y.fil; });
        return g;
    };
    const auto ga = grade(a);
    const auto gb = grade(b);

    std::unordered_map<packed_monomial, Rational, detail::packed_hash> acc;
    acc.reserve(a.size() + b.size());
    for (const auto &x : ga) {
        for (const auto &y : gb) {
            if (x.fil + y.fil >= caps.N) {
                break;
            }
            if (x.ydeg + y.ydeg > caps.M) {
                continue;
            }
            acc[add_packed(*x.key, *y.key)].add_product(*x.coeff, *y.coeff);
        }
    }
    return JetSeries::from_raw(caps, collect(std::move(acc)));
}

JetSeries jet_derive(const JetSeries &a, Var v)
{
    const JetCaps &caps = a.caps();
    const int d = caps.dims();
    std::size_t slot = 1;
    switch (v.k) {
        case Var::kind::z:
            slot = 1;
            break;
        case Var::kind::theta:
            if (v.index < 0 || v.index >= d) {
                throw dimension_mismatch("no variable " + v.name() + " when n = " + std::to_string(caps.n));
            }
            slot = 2 + v.index;
            break;
        case Var::kind::y:
            if (v.index < 0 || v.index >= d) {
                throw dimension_mismatch("no variable " + v.name() + " when n = " + std::to_string(caps.n));
            }
            slot = 2 + d + v.index;
            break;
    }
    raw_terms out;
    out.reserve(a.size());
    for (const auto &[k, c] : a.raw()) {
        const int e = k.bytes[slot];
        if (e == 0) {
            continue;
        }
        packed_monomial m = k;
        m.bytes[slot] = static_cast<std::uint8_t>(e - 1);
        m.bytes[0] = static_cast<std::uint8_t>(m.bytes[0] - 1);
        out.emplace_back(m, c * Rational(e));
    }
    return JetSeries::from_raw(caps, std::move(out));
}

int filtration_order(const JetSeries &a)
{
    int best = infinite_order;
    for (const auto &[k, c] : a.raw()) {
        best = std::min(best, packed_filtration(a.caps(), k));
    }
    return best;
}

JetSeries jet_invert(const JetSeries &a)
{
    const Rational c = a.constant_term();
    if (c.is_zero()) {
        throw not_elliptic("jet has vanishing constant term: " + to_string(a));
    }
    const JetCaps &caps = a.caps();
    const Rational inv_c = Rational(1) / c;
    // a = c (1 + u) with u free of constant term; 1/a = (1/c) sum (-u)^j.
    const JetSeries minus_u = jet_sub(jet_constant(caps, Rational(1)), jet_scale(a, inv_c));
    JetSeries power = jet_constant(caps, Rational(1));
    JetSeries sum = power;
    // Every factor of u raises a + |alpha| + |beta| by at least one.
    for (int j = 1; j < caps.N + caps.M + 1 && !power.is_zero(); ++j) {
        power = jet_mul(power, minus_u);
        sum = jet_add(sum, power);
    }
    return jet_scale(sum, inv_c);
}

JetSeries jet_filter(const JetSeries &a, const std::function<bool(const Monomial &)> &pred)
{
    raw_terms out;
    for (const auto &[k, c] : a.raw()) {
        if (pred(unpack(a.caps(), k))) {
            out.emplace_back(k, c);
        }
    }
    return JetSeries::from_raw(a.caps(), std::move(out));
}

JetSeries jet_map(const JetSeries &a, const std::function<Rational(const Monomial &, const Rational &)> &f)
{
    raw_terms out;
    out.reserve(a.size());
    for (const auto &[k, c] : a.raw()) {
        out.emplace_back(k, f(unpack(a.caps(), k), c));
    }
    return JetSeries::from_raw(a.caps(), std::move(out));
}

JetSeries level_part(const JetSeries &a, int level)
{
    raw_terms out;
    for (const auto &[k, c] : a.raw()) {
        if (packed_filtration(a.caps(), k) == level) {
            out.emplace_back(k, c);
        }
    }
    return JetSeries::from_raw(a.caps(), std::move(out));
}

JetSeries below_level(const JetSeries &a, int level)
{
    raw_terms out;
    for (const auto &[k, c] : a.raw()) {
        if (packed_filtration(a.caps(), k) < level) {
            out.emplace_back(k, c);
        }
    }
    return JetSeries::from_raw(a.caps(), std::move(out));
}

JetSeries with_caps(const JetSeries &a, const JetCaps &caps)
{
    if (caps.n != a.caps().n) {
        throw dimension_mismatch("cannot change the dimension of a jet");
    }
    raw_terms out;
    for (const auto &[k, c] : a.raw()) {
        if (packed_filtration(caps, k) < caps.N && packed_y_degree(caps, k) <= caps.M) {
            out.emplace_back(k, c);
        }
    }
    return JetSeries::from_raw(caps, std::move(out));
}

int max_y_degree(const JetSeries &a)
{
    int best = 0;
    for (const auto &[k, c] : a.raw()) {
        best = std::max(best, packed_y_degree(a.caps(), k));
    }
    return best;
}

std::string to_string(const JetSeries &a)
{
    if (a.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : a.terms()) {
        std::vector<std::string> factors;
        auto push = [&factors](const std::string &name, int e) {
            if (e == 1) {
                factors.push_back(name);
            } else if (e > 1) {
                factors.push_back(name + "^" + std::to_string(e));
            }
        };
        push("z", m.a);
        for (std::size_t i = 0; i < m.alpha.size(); ++i) {
            push("theta" + std::to_string(i + 1), m.alpha[i]);
        }
        for (std::size_t i = 0; i < m.beta.size(); ++i) {
            push("y" + std::to_string(i + 1), m.beta[i]);
        }
        Rational mag = c.sign() < 0 ? -c : c;
        if (first) {
            os << (c.sign() < 0 ? "-" : "");
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        first = false;
        const bool unit = mag == Rational(1);
        if (!unit || factors.empty()) {
            os << mag;
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            os << ((i == 0 && unit) ? "" : "*") << factors[i];
        }
    }
    return os.str();
}

} // namespace radnf
