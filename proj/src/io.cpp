#include <radnf/io.hpp>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <radnf/errors.hpp>

namespace radnf
{

namespace
{

const std::string unicode_minus = "\xE2\x88\x92";

// Cursor over one line; columns count UTF-8 code points, 1-based.
class Cursor
{
public:
    Cursor(const std::string &line, int line_no, std::size_t start = 0) : m_s(line), m_line(line_no), m_pos(start) {}

    int line() const { return m_line; }
    std::size_t pos() const { return m_pos; }
    void seek(std::size_t p) { m_pos = p; }
    bool done() const { return m_pos >= m_s.size(); }
    char peek() const { return done() ? '\0' : m_s[m_pos]; }
    void advance(std::size_t k = 1) { m_pos += k; }
    bool starts_with(const std::string &t) const { return m_s.compare(m_pos, t.size(), t) == 0; }

    int column(std::size_t p) const
    {
        int col = 1;
        for (std::size_t i = 0; i < p && i < m_s.size(); ++i) {
            if ((static_cast<unsigned char>(m_s[i]) & 0xC0) != 0x80) {
                ++col;
            }
        }
        return col;
    }
    int column() const { return column(m_pos); }

    [[noreturn]] void fail(const std::string &msg) const { throw parse_error(msg, m_line, column()); }
    [[noreturn]] void fail_at(std::size_t p, const std::string &msg) const { throw parse_error(msg, m_line, column(p)); }

    void skip_space()
    {
        while (!done() && (std::isspace(static_cast<unsigned char>(peek())) || peek() == ',')) {
            advance();
        }
    }
    // Separators between monomial factors.
    void skip_factor_separators()
    {
        while (!done() && (std::isspace(static_cast<unsigned char>(peek())) || peek() == '*')) {
            advance();
        }
    }

    std::string digits()
    {
        std::string d;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
            d += peek();
            advance();
        }
        return d;
    }

    std::string word()
    {
        std::string w;
        while (!done() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')) {
            w += peek();
            advance();
        }
        return w;
    }

    bool at_sign() const { return peek() == '-' || peek() == '+' || starts_with(unicode_minus); }
    bool at_number() const { return std::isdigit(static_cast<unsigned char>(peek())) || at_sign() || peek() == '.'; }

    // Returns +1 / -1 and consumes a sign if present.
    int sign()
    {
        if (peek() == '-') {
            advance();
            return -1;
        }
        if (peek() == '+') {
            advance();
            return 1;
        }
        if (starts_with(unicode_minus)) {
            advance(unicode_minus.size());
            return -1;
        }
        return 1;
    }

    int integer(const std::string &what)
    {
        const std::size_t start = m_pos;
        const int s = sign();
        const std::string d = digits();
        if (d.empty()) {
            fail_at(start, "expected " + what);
        }
        if (d.size() > 9) {
            fail_at(start, what + " out of range");
        }
        return s * std::stoi(d);
    }

    Rational rational()
    {
        const std::size_t start = m_pos;
        const int s = sign();
        const std::string num = digits();
        if (num.empty()) {
            fail_at(start, "expected a coefficient");
        }
        std::string den = "1";
        if (peek() == '/') {
            advance();
            den = digits();
            if (den.empty()) {
                fail("expected a denominator");
            }
            if (den.find_first_not_of('0') == std::string::npos) {
                fail_at(start, "zero denominator");
            }
        }
        Rational r = Rational::parse(num + "/" + den);
        return s < 0 ? -r : r;
    }

    // Integer, p/q or decimal literal.
    double real()
    {
        const std::size_t start = m_pos;
        const int s = sign();
        std::string body;
        while (!done() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '/'
                           || peek() == 'e' || peek() == 'E'
                           || ((peek() == '-' || peek() == '+') && !body.empty()
                               && (body.back() == 'e' || body.back() == 'E')))) {
            body += peek();
            advance();
        }
        if (body.empty()) {
            fail_at(start, "expected a number");
        }
        if (body.find('/') != std::string::npos) {
            Cursor sub(body, m_line);
            try {
                const Rational r = sub.rational();
                if (!sub.done()) {
                    fail_at(start, "malformed rational '" + body + "'");
                }
                return s * r.to_double();
            } catch (const parse_error &) {
                fail_at(start, "malformed rational '" + body + "'");
            }
        }
        char *end = nullptr;
        const double v = std::strtod(body.c_str(), &end);
        if (end != body.c_str() + body.size()) {
            fail_at(start, "malformed number '" + body + "'");
        }
        return s * v;
    }

private:
    const std::string &m_s;
    int m_line;
    std::size_t m_pos;
};

struct Line {
    int number;
    std::string text; // comment stripped, right-trimmed
};

std::vector<Line> logical_lines(const std::string &text)
{
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        const auto hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) {
            raw.pop_back();
        }
        std::size_t first = 0;
        while (first < raw.size() && std::isspace(static_cast<unsigned char>(raw[first]))) {
            ++first;
        }
        if (first < raw.size()) {
            out.push_back({no, raw});
        }
    }
    return out;
}

std::size_t first_non_space(const std::string &s, std::size_t from = 0)
{
    while (from < s.size() && std::isspace(static_cast<unsigned char>(s[from]))) {
        ++from;
    }
    return from;
}

struct SymbolTerm {
    Monomial m;
    Rational c;
    int line = 0;
    int column = 0;
};

// Parses "coef factor factor ..." from the cursor to end of line.
SymbolTerm parse_symbol_term(Cursor &cur, int n)
{
    cur.skip_factor_separators();
    SymbolTerm t;
    t.line = cur.line();
    t.column = cur.column();
    t.m = Monomial{0, std::vector<int>(n - 1, 0), std::vector<int>(n - 1, 0)};
    t.c = Rational(1);
    if (cur.at_number()) {
        t.c = cur.rational();
    }
    while (true) {
        cur.skip_factor_separators();
        if (cur.done()) {
            break;
        }
        const std::size_t at = cur.pos();
        if (cur.peek() == '1') {
            cur.advance();
            if (!cur.done() && !std::isspace(static_cast<unsigned char>(cur.peek())) && cur.peek() != '*') {
                cur.fail_at(at, "unexpected token");
            }
            continue;
        }
        const std::string name = cur.word();
        if (name != "z" && name != "y" && name != "theta") {
            cur.fail_at(at, name.empty() ? "unexpected character" : "unknown variable '" + name + "'");
        }
        int index = 0;
        if (name != "z") {
            const std::string d = cur.digits();
            if (d.empty()) {
                cur.fail("variable '" + name + "' needs an index");
            }
            index = d.size() > 3 ? 1000 : std::stoi(d);
            if (index < 1 || index > n - 1) {
                throw dimension_mismatch("line " + std::to_string(cur.line()) + ", column "
                                         + std::to_string(cur.column(at)) + ": no variable " + name + d
                                         + " when n = " + std::to_string(n));
            }
        }
        int e = 1;
        if (cur.peek() == '^') {
            cur.advance();
            const std::size_t ep = cur.pos();
            e = cur.integer("exponent");
            if (e < 0 || e > 255) {
                cur.fail_at(ep, "exponent out of range");
            }
        }
        if (name == "z") {
            t.m.a += e;
        } else if (name == "theta") {
            t.m.alpha[index - 1] += e;
        } else {
            t.m.beta[index - 1] += e;
        }
    }
    return t;
}

std::string monomial_text(const Monomial &m)
{
    std::string out;
    auto factor = [&out](const std::string &v, int e) {
        if (e == 0) {
            return;
        }
        if (!out.empty()) {
            out += ' ';
        }
        out += v;
        if (e != 1) {
            out += "^" + std::to_string(e);
        }
    };
    factor("z", m.a);
    for (std::size_t i = 0; i < m.alpha.size(); ++i) {
        factor("theta" + std::to_string(i + 1), m.alpha[i]);
    }
    for (std::size_t i = 0; i < m.beta.size(); ++i) {
        factor("y" + std::to_string(i + 1), m.beta[i]);
    }
    return out.empty() ? "1" : out;
}

} // namespace

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ClassicalSymbol parse_symbol_text(const std::string &text, const CapOverrides &overrides)
{
    const std::vector<Line> lines = logical_lines(text);
    if (lines.empty()) {
        throw parse_error("empty symbol file", 1, 1);
    }
    // Header.
    std::optional<int> n, order, N, M;
    {
        const Line &h = lines.front();
        Cursor cur(h.text, h.number);
        cur.skip_space();
        while (!cur.done()) {
            const std::size_t at = cur.pos();
            const std::string key = cur.word();
            if (key.empty()) {
                cur.fail("expected a header key");
            }
            cur.skip_space();
            if (cur.peek() != '=') {
                cur.fail("expected '=' after '" + key + "'");
            }
            cur.advance();
            cur.skip_space();
            const int v = cur.integer("integer value for '" + key + "'");
            if (key == "n") {
                n = v;
            } else if (key == "order" || key == "m") {
                order = v;
            } else if (key == "N") {
                N = v;
            } else if (key == "M") {
                M = v;
            } else {
                cur.fail_at(at, "unknown header key '" + key + "'");
            }
            cur.skip_space();
        }
        if (!n || !order) {
            throw parse_error("header must give n and order", h.number, 1);
        }
    }
    const JetCaps caps = JetCaps::make(*n, overrides.N.value_or(N.value_or(6)), overrides.M.value_or(M.value_or(4)));

    std::map<int, std::vector<SymbolTerm>, std::greater<>> sections;
    std::optional<int> current;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const Line &l = lines[li];
        Cursor cur(l.text, l.number, first_non_space(l.text));
        if (cur.peek() == '[') {
            cur.advance();
            cur.skip_space();
            const std::size_t at = cur.pos();
            const int h = cur.integer("homogeneity");
            if (h > *order) {
                cur.fail_at(at, "homogeneity " + std::to_string(h) + " above the order " + std::to_string(*order));
            }
            cur.skip_space();
            if (cur.peek() != ']') {
                cur.fail("expected ']'");
            }
            cur.advance();
            if (cur.peek() == ':') {
                cur.advance();
            }
            current = h;
            sections[h];
            cur.skip_space();
            if (cur.done()) {
                continue;
            }
        } else if (!current) {
            cur.fail("term before the first [homogeneity] section");
        }
        sections[*current].push_back(parse_symbol_term(cur, *n));
    }

    const int lowest = sections.empty() ? *order : sections.rbegin()->first;
    std::vector<JetSeries> comps;
    for (int h = *order; h >= lowest; --h) {
        std::vector<std::pair<Monomial, Rational>> entries;
        for (const auto &t : sections[h]) {
            if (!caps.admits(t.m)) {
                throw cap_violation("line " + std::to_string(t.line) + ", column " + std::to_string(t.column)
                                    + ": monomial " + monomial_text(t.m) + " outside caps N = "
                                    + std::to_string(caps.N) + ", M = " + std::to_string(caps.M));
            }
            entries.emplace_back(t.m, t.c);
        }
        comps.push_back(make_jet(entries, caps));
    }
    return ClassicalSymbol(*order, std::move(comps));
}

ClassicalSymbol parse_symbol_file(const std::string &path, const CapOverrides &overrides)
{
    return parse_symbol_text(read_file(path), overrides);
}

std::string emit_symbol_text(const ClassicalSymbol &P)
{
    const JetCaps &caps = P.caps();
    std::string out = "n=" + std::to_string(caps.n) + ", order=" + std::to_string(P.m) + ", N="
                      + std::to_string(caps.N) + ", M=" + std::to_string(caps.M) + "\n";
    for (std::size_t j = 0; j < P.components.size(); ++j) {
        out += "[" + std::to_string(P.m - static_cast<int>(j)) + "]:\n";
        for (const auto &[m, c] : P.components[j].terms()) {
            out += c.to_string() + " " + monomial_text(m) + "\n";
        }
    }
    return out;
}

namespace
{

FlowTerm parse_flow_term(Cursor &cur, int k, int component)
{
    cur.skip_factor_separators();
    FlowTerm t;
    t.component = component;
    t.exponents.assign(k, 0);
    t.coefficient = 1;
    if (cur.at_number()) {
        t.coefficient = cur.real();
    }
    while (true) {
        cur.skip_factor_separators();
        if (cur.done()) {
            break;
        }
        const std::size_t at = cur.pos();
        if (cur.peek() == '1') {
            cur.advance();
            continue;
        }
        const std::string name = cur.word();
        if (name != "x") {
            cur.fail_at(at, name.empty() ? "unexpected character" : "unknown variable '" + name + "'");
        }
        const std::string d = cur.digits();
        const int index = d.empty() ? 0 : (d.size() > 3 ? 1000 : std::stoi(d));
        if (index < 1 || index > k) {
            throw dimension_mismatch("line " + std::to_string(cur.line()) + ", column "
                                     + std::to_string(cur.column(at)) + ": no variable x" + d
                                     + " when dim = " + std::to_string(k));
        }
        int e = 1;
        if (cur.peek() == '^') {
            cur.advance();
            const std::size_t ep = cur.pos();
            e = cur.integer("exponent");
            if (e < 0 || e > 64) {
                cur.fail_at(ep, "exponent out of range");
            }
        }
        t.exponents[index - 1] += e;
    }
    return t;
}

std::vector<double> parse_reals(Cursor &cur)
{
    std::vector<double> out;
    cur.skip_space();
    while (!cur.done()) {
        out.push_back(cur.real());
        cur.skip_space();
    }
    return out;
}

Eigen::VectorXd point_from(const std::vector<double> &v, int k, const Cursor &cur)
{
    if (static_cast<int>(v.size()) != k) {
        throw dimension_mismatch("line " + std::to_string(cur.line()) + ": point needs " + std::to_string(k)
                                 + " coordinates");
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), k);
}

} // namespace

FlowFile parse_flow_text(const std::string &text)
{
    const std::vector<Line> lines = logical_lines(text);
    // dim first, since every other key depends on it.
    std::optional<int> dim;
    for (const auto &l : lines) {
        Cursor cur(l.text, l.number, first_non_space(l.text));
        if (cur.word() == "dim") {
            cur.skip_space();
            if (cur.peek() != '=') {
                cur.fail("expected '='");
            }
            cur.advance();
            cur.skip_space();
            const std::size_t at = cur.pos();
            dim = cur.integer("dimension");
            if (*dim < 1 || *dim > 64) {
                cur.fail_at(at, "dimension out of range");
            }
            break;
        }
    }
    if (!dim) {
        throw parse_error("missing 'dim = k'", lines.empty() ? 1 : lines.front().number, 1);
    }
    const int k = *dim;
    FlowFile f;
    f.spec.k = k;
    f.spec.A = Eigen::MatrixXd::Zero(k, k);
    f.spec.vanishing_order = 1;
    f.box = {Eigen::VectorXd::Constant(k, -0.3), Eigen::VectorXd::Constant(k, 0.3), 5};
    bool have_A = false;

    for (const auto &l : lines) {
        Cursor cur(l.text, l.number, first_non_space(l.text));
        const std::size_t key_at = cur.pos();
        const std::string key = cur.word();
        if (key.empty()) {
            cur.fail("expected a key");
        }
        std::optional<int> component;
        if (cur.peek() == '[') {
            cur.advance();
            const std::size_t at = cur.pos();
            const int c = cur.integer("component index");
            if (c < 1 || c > k) {
                throw dimension_mismatch("line " + std::to_string(l.number) + ", column "
                                         + std::to_string(cur.column(at)) + ": component " + std::to_string(c)
                                         + " outside 1.." + std::to_string(k));
            }
            if (cur.peek() != ']') {
                cur.fail("expected ']'");
            }
            cur.advance();
            component = c - 1;
        }
        cur.skip_space();
        const char sep = cur.peek();
        if (sep != '=' && sep != ':') {
            cur.fail("expected '=' or ':' after '" + key + "'");
        }
        cur.advance();

        if (key == "perturb") {
            if (!component) {
                if (k != 1) {
                    cur.fail_at(key_at, "'perturb' needs a component index when dim > 1");
                }
                component = 0;
            }
            f.spec.perturbation.push_back(parse_flow_term(cur, k, *component));
            continue;
        }
        if (component) {
            cur.fail_at(key_at, "only 'perturb' takes a component index");
        }
        if (key == "g") {
            f.source.terms.push_back(parse_flow_term(cur, k, 0));
            continue;
        }
        if (key == "dim") {
            continue;
        }
        if (key == "L") {
            cur.skip_space();
            while (!cur.done()) {
                const std::size_t at = cur.pos();
                const int i = cur.integer("coordinate index");
                if (i < 1 || i > k) {
                    throw dimension_mismatch("line " + std::to_string(l.number) + ", column "
                                             + std::to_string(cur.column(at)) + ": L index " + std::to_string(i)
                                             + " outside 1.." + std::to_string(k));
                }
                f.spec.L.push_back(i - 1);
                cur.skip_space();
            }
            continue;
        }
        if (key == "direction") {
            cur.skip_space();
            const std::size_t at = cur.pos();
            const std::string w = cur.word();
            if (w == "forward") {
                f.direction = transport_direction::forward;
            } else if (w == "reverse") {
                f.direction = transport_direction::reverse;
            } else {
                cur.fail_at(at, "direction must be 'forward' or 'reverse'");
            }
            continue;
        }
        const std::size_t values_at = first_non_space(l.text, cur.pos());
        const std::vector<double> v = parse_reals(cur);
        auto need = [&](std::size_t count) {
            if (v.size() != count) {
                throw parse_error("'" + key + "' expects " + std::to_string(count) + " value(s), got "
                                      + std::to_string(v.size()),
                                  l.number, cur.column(values_at));
            }
        };
        if (key == "A") {
            if (v.size() != static_cast<std::size_t>(k * k)) {
                throw dimension_mismatch("line " + std::to_string(l.number) + ": A needs " + std::to_string(k * k)
                                         + " entries, got " + std::to_string(v.size()));
            }
            for (int r = 0; r < k; ++r) {
                for (int c = 0; c < k; ++c) {
                    f.spec.A(r, c) = v[r * k + c];
                }
            }
            have_A = true;
        } else if (key == "vanishing") {
            need(1);
            f.spec.vanishing_order = static_cast<int>(v[0]);
        } else if (key == "cutoff") {
            need(1);
            f.spec.cutoff_radius = v[0];
        } else if (key == "g_cutoff") {
            need(2);
            f.source.inner_radius = v[0];
            f.source.outer_radius = v[1];
        } else if (key == "c") {
            need(1);
            f.c = v[0];
        } else if (key == "box") {
            need(2);
            f.box.lower = Eigen::VectorXd::Constant(k, v[0]);
            f.box.upper = Eigen::VectorXd::Constant(k, v[1]);
        } else if (key == "grid") {
            need(1);
            f.box.points_per_axis = static_cast<int>(v[0]);
        } else if (key == "sample") {
            f.samples.push_back(point_from(v, k, cur));
        } else if (key == "probe_point") {
            f.probe_points.push_back(point_from(v, k, cur));
        } else if (key == "probe_h") {
            need(1);
            f.probe_h = v[0];
        } else {
            cur.fail_at(key_at, "unknown key '" + key + "'");
        }
    }
    if (!have_A) {
        throw parse_error("missing 'A = ...'", lines.front().number, 1);
    }
    if (f.box.points_per_axis < 1) {
        throw invalid_flow_spec("grid must be positive");
    }
    f.spec.validate();
    if (f.probe_points.empty()) {
        f.probe_points.push_back(Eigen::VectorXd::Zero(k));
    }
    return f;
}

FlowFile parse_flow_file(const std::string &path)
{
    return parse_flow_text(read_file(path));
}

// ---------------------------------------------------------------- JSON

namespace
{

json caps_to_json(const JetCaps &c)
{
    return {{"n", c.n}, {"N", c.N}, {"M", c.M}};
}

JetCaps caps_from_json(const json &j)
{
    return JetCaps::make(j.at("n").get<int>(), j.at("N").get<int>(), j.at("M").get<int>());
}

json order_to_json(int order)
{
    return order == infinite_order ? json(nullptr) : json(order);
}

int order_from_json(const json &j)
{
    return j.is_null() ? infinite_order : j.get<int>();
}

} // namespace

json jet_to_json(const JetSeries &a)
{
    json terms = json::array();
    for (const auto &[m, c] : a.terms()) {
        terms.push_back({{"a", m.a}, {"alpha", m.alpha}, {"beta", m.beta}, {"c", c.to_string()}});
    }
    return {{"caps", caps_to_json(a.caps())}, {"terms", terms}, {"text", to_string(a)}};
}

JetSeries jet_from_json(const json &j)
{
    const JetCaps caps = caps_from_json(j.at("caps"));
    std::vector<std::pair<Monomial, Rational>> entries;
    for (const auto &t : j.at("terms")) {
        Monomial m{t.at("a").get<int>(), t.at("alpha").get<std::vector<int>>(), t.at("beta").get<std::vector<int>>()};
        entries.emplace_back(std::move(m), Rational::parse(t.at("c").get<std::string>()));
    }
    return make_jet(entries, caps);
}

json radial_report_to_json(const RadialReport &r)
{
    json failures = json::array();
    for (auto f : r.failures) {
        failures.push_back(describe(f));
    }
    return {{"in_class", r.in_class}, {"lambda", jet_to_json(r.lambda_factor)}, {"failures", failures}};
}

json principal_certificate_to_json(const PrincipalCertificate &c)
{
    json gens = json::array();
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
        gens.push_back({{"level", static_cast<int>(i) + 2}, {"b", jet_to_json(c.generators[i])}});
    }
    json log = json::array();
    for (const auto &l : c.log) {
        log.push_back({{"level", l.level}, {"removed", jet_to_json(l.removed)}});
    }
    return {{"caps", caps_to_json(c.caps)},
            {"working_caps", caps_to_json(c.working_caps)},
            {"lambda", jet_to_json(c.lambda)},
            {"elliptic_factor", jet_to_json(c.elliptic_factor)},
            {"generators", gens},
            {"residual", jet_to_json(c.residual)},
            {"log", log}};
}

PrincipalCertificate principal_certificate_from_json(const json &j)
{
    PrincipalCertificate c;
    c.caps = caps_from_json(j.at("caps"));
    c.working_caps = caps_from_json(j.at("working_caps"));
    c.lambda = jet_from_json(j.at("lambda"));
    c.elliptic_factor = jet_from_json(j.at("elliptic_factor"));
    for (const auto &g : j.at("generators")) {
        c.generators.push_back(jet_from_json(g.at("b")));
    }
    c.residual = jet_from_json(j.at("residual"));
    for (const auto &l : j.at("log")) {
        c.log.push_back({l.at("level").get<int>(), jet_from_json(l.at("removed"))});
    }
    return c;
}

json normalization_certificate_to_json(const NormalizationCertificate &c)
{
    json stages = json::array();
    for (const auto &s : c.stages) {
        stages.push_back({{"k", s.k},
                          {"b", jet_to_json(s.b)},
                          {"f", jet_to_json(s.f)},
                          {"resonant", jet_to_json(s.resonant)},
                          {"residual", jet_to_json(s.residual)}});
    }
    json replay = json::array();
    for (const auto &r : c.replay) {
        replay.push_back({{"order", r.order},
                          {"target", r.target},
                          {"defect_order", order_to_json(r.defect_order)},
                          {"pass", r.pass}});
    }
    return {{"caps", caps_to_json(c.caps)},
            {"working_caps", caps_to_json(c.working_caps)},
            {"input_order", c.input_order},
            {"stages_requested", c.stages_requested},
            {"routing", to_string(c.route)},
            {"principal", principal_certificate_to_json(c.principal)},
            {"p0", jet_to_json(c.p0)},
            {"stages", stages},
            {"sign_convention",
             {{"eigenvalue", c.sign_convention.eigenvalue},
              {"printed_alternative", c.sign_convention.printed_alternative},
              {"conventions_agree_on_b_terms", c.sign_convention.conventions_agree_on_b_terms}}},
            {"replay", replay},
            {"replay_pass", c.replay_pass}};
}

NormalizationCertificate normalization_certificate_from_json(const json &j)
{
    NormalizationCertificate c;
    c.caps = caps_from_json(j.at("caps"));
    c.working_caps = caps_from_json(j.at("working_caps"));
    c.input_order = j.at("input_order").get<int>();
    c.stages_requested = j.at("stages_requested").get<int>();
    const std::string route = j.at("routing").get<std::string>();
    if (route == to_string(routing::z_divisible_to_f)) {
        c.route = routing::z_divisible_to_f;
    } else if (route == to_string(routing::eigen_to_b)) {
        c.route = routing::eigen_to_b;
    } else {
        throw std::invalid_argument("unknown routing '" + route + "'");
    }
    c.principal = principal_certificate_from_json(j.at("principal"));
    c.p0 = jet_from_json(j.at("p0"));
    for (const auto &s : j.at("stages")) {
        c.stages.push_back({s.at("k").get<int>(), jet_from_json(s.at("b")), jet_from_json(s.at("f")),
                            jet_from_json(s.at("resonant")), jet_from_json(s.at("residual"))});
    }
    const json &sc = j.at("sign_convention");
    c.sign_convention.eigenvalue = sc.at("eigenvalue").get<std::string>();
    c.sign_convention.printed_alternative = sc.at("printed_alternative").get<std::string>();
    c.sign_convention.conventions_agree_on_b_terms = sc.at("conventions_agree_on_b_terms").get<bool>();
    for (const auto &r : j.at("replay")) {
        c.replay.push_back({r.at("order").get<int>(), r.at("target").get<std::string>(),
                            order_from_json(r.at("defect_order")), r.at("pass").get<bool>()});
    }
    c.replay_pass = j.at("replay_pass").get<bool>();
    return c;
}

namespace
{

std::string order_text(int order)
{
    return order == infinite_order ? "inf" : std::to_string(order);
}

} // namespace

std::string principal_report_text(const PrincipalCertificate &c, const PrincipalReplay &replay)
{
    std::ostringstream os;
    os << "caps: n=" << c.caps.n << " N=" << c.caps.N << " M=" << c.caps.M << " (working N=" << c.working_caps.N
       << " M=" << c.working_caps.M << ")\n";
    os << "lambda: " << to_string(with_caps(c.lambda, c.caps)) << "\n";
    os << "elliptic_factor: " << to_string(with_caps(c.elliptic_factor, c.caps)) << "\n";
    for (std::size_t i = 0; i < c.generators.size(); ++i) {
        os << "b_" << i + 2 << ": " << to_string(with_caps(c.generators[i], c.caps)) << "\n";
    }
    os << "replay: defect_order=" << order_text(replay.defect_order) << " " << (replay.pass ? "pass" : "FAIL")
       << "\n";
    return os.str();
}

std::string normalization_report_text(const NormalizationCertificate &c)
{
    std::ostringstream os;
    os << "caps: n=" << c.caps.n << " N=" << c.caps.N << " M=" << c.caps.M << " (working N=" << c.working_caps.N
       << " M=" << c.working_caps.M << ")\n";
    os << "stages: " << c.stages_requested + 1 << " (k = 0.." << c.stages_requested << "), routing "
       << to_string(c.route) << "\n";
    os << "lambda: " << to_string(with_caps(c.principal.lambda, c.caps)) << "\n";
    os << "p0: " << to_string(c.p0) << "\n";
    for (const auto &s : c.stages) {
        os << "stage " << s.k << ": b = " << to_string(with_caps(s.b, c.caps))
           << "; f = " << to_string(with_caps(s.f, c.caps)) << "\n";
    }
    os << "eigenvalue convention: " << c.sign_convention.eigenvalue << " (printed alternative "
       << c.sign_convention.printed_alternative << ", agree on b terms: "
       << (c.sign_convention.conventions_agree_on_b_terms ? "yes" : "no") << ")\n";
    for (const auto &r : c.replay) {
        os << "replay order " << r.order << " -> " << r.target << ": defect_order=" << order_text(r.defect_order)
           << " " << (r.pass ? "pass" : "FAIL") << "\n";
    }
    return os.str();
}

void write_file_atomic(const std::string &path, const std::string &contents)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
    }
    const fs::path tmp = fs::path(path + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::ios_base::failure("cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out) {
            throw std::ios_base::failure("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

} // namespace radnf
