#include <radnf/symbol.hpp>

#include <numeric>
#include <stdexcept>

#include <radnf/errors.hpp>

namespace radnf
{

ClassicalSymbol::ClassicalSymbol(int order, std::vector<JetSeries> comps) : m(order), components(std::move(comps))
{
    if (components.empty()) {
        throw std::invalid_argument("classical symbol needs at least one component");
    }
    for (const auto &c : components) {
        if (!(c.caps() == components.front().caps())) {
            throw caps_mismatch("symbol components have different caps");
        }
    }
}

JetSeries theta_euler(const JetSeries &a)
{
    return jet_map(a, [](const Monomial &m, const Rational &c) {
        return c * Rational(std::accumulate(m.alpha.begin(), m.alpha.end(), 0));
    });
}

ChartVectorField chart_hamilton_field(const JetSeries &a)
{
    const JetCaps &caps = a.caps();
    const JetSeries dz = jet_derive(a, Var::z());
    ChartVectorField f;
    f.coeff_rho_drho = dz;
    f.coeff_z = jet_sub(a, theta_euler(a));
    for (int i = 0; i < caps.dims(); ++i) {
        f.coeff_y.push_back(jet_derive(a, Var::theta(i)));
        f.coeff_theta.push_back(jet_sub(jet_mul(jet_var(caps, Var::theta(i)), dz), jet_derive(a, Var::y(i))));
    }
    return f;
}

JetSeries apply_field(const ChartVectorField &field, const JetSeries &g, int weight)
{
    // rho d_rho acts on rho^{-weight} by -weight; g itself has no rho.
    JetSeries r = jet_mul(field.coeff_z, jet_derive(g, Var::z()));
    for (std::size_t i = 0; i < field.coeff_y.size(); ++i) {
        const int k = static_cast<int>(i);
        r = jet_add(r, jet_mul(field.coeff_y[i], jet_derive(g, Var::y(k))));
        r = jet_add(r, jet_mul(field.coeff_theta[i], jet_derive(g, Var::theta(k))));
    }
    return jet_sub(r, jet_scale(jet_mul(field.coeff_rho_drho, g), Rational(weight)));
}

JetSeries graded_bracket(const JetSeries &a, int s, const JetSeries &b, int t)
{
    if (!(a.caps() == b.caps())) {
        throw caps_mismatch("bracket operands have different caps");
    }
    const int d = a.caps().dims();
    // (s a - theta.d_theta a) d_z b - d_z a (t b - theta.d_theta b)
    auto shifted_euler = [](const JetSeries &x, int w) {
        return jet_map(x, [w](const Monomial &m, const Rational &c) {
            return c * Rational(w - std::accumulate(m.alpha.begin(), m.alpha.end(), 0));
        });
    };
    JetSeries r = jet_sub(jet_mul(shifted_euler(a, s), jet_derive(b, Var::z())),
                          jet_mul(jet_derive(a, Var::z()), shifted_euler(b, t)));
    for (int i = 0; i < d; ++i) {
        r = jet_add(r, jet_mul(jet_derive(a, Var::theta(i)), jet_derive(b, Var::y(i))));
        r = jet_sub(r, jet_mul(jet_derive(a, Var::y(i)), jet_derive(b, Var::theta(i))));
    }
    return r;
}

JetSeries lagrange_bracket(const JetSeries &a, const JetSeries &b)
{
    return graded_bracket(a, 1, b, 1);
}

std::string describe(radial_condition c)
{
    switch (c) {
        case radial_condition::vanishes_on_lambda:
            return "p|_Λ = 0 violated";
        case radial_condition::theta_derivative_vanishes:
            return "∂_θ p|_Λ = 0 violated";
        case radial_condition::y_derivative_vanishes:
            return "∂_y p|_Λ = 0 violated";
        case radial_condition::nondegenerate:
            return "∂_z p|_Λ ≠ 0 violated";
    }
    return "unknown condition";
}

RadialReport radial_check(const JetSeries &p)
{
    RadialReport report;
    const JetSeries on_lambda = level_part(p, 0);
    if (!on_lambda.is_zero()) {
        report.failures.push_back(radial_condition::vanishes_on_lambda);
    }
    const JetSeries theta_linear = jet_filter(p, [](const Monomial &m) { return m.a == 0 && m.filtration() == 1; });
    if (!theta_linear.is_zero()) {
        report.failures.push_back(radial_condition::theta_derivative_vanishes);
    }
    for (int i = 0; i < p.caps().dims(); ++i) {
        if (!jet_derive(on_lambda, Var::y(i)).is_zero()) {
            report.failures.push_back(radial_condition::y_derivative_vanishes);
            break;
        }
    }
    // lambda(y) is the coefficient of z^1 theta^0.
    JetSeries lambda = jet_derive(jet_filter(p, [](const Monomial &m) { return m.a == 1 && m.filtration() == 1; }),
                                  Var::z());
    if (lambda.constant_term().is_zero()) {
        report.failures.push_back(radial_condition::nondegenerate);
    }
    report.lambda_factor = std::move(lambda);
    report.in_class = report.failures.empty();
    return report;
}

RadialReport radial_check(const ClassicalSymbol &P)
{
    return radial_check(P.principal());
}

} // namespace radnf
