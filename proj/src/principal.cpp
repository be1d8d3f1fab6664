#include <radnf/principal.hpp>

#include <string>

#include <radnf/errors.hpp>
#include <radnf/symbol.hpp>

namespace radnf
{

namespace
{

std::string failure_list(const RadialReport &report)
{
    std::string out;
    for (auto f : report.failures) {
        out += (out.empty() ? "" : "; ") + describe(f);
    }
    return out;
}

} // namespace

LinearReduction linear_reduction(const JetSeries &p)
{
    RadialReport report = radial_check(p);
    if (!report.in_class) {
        throw not_radial("principal symbol is not radial: " + failure_list(report));
    }
    JetSeries reduced = jet_mul(jet_invert(report.lambda_factor), p);
    return {std::move(report.lambda_factor), std::move(reduced)};
}

JetSeries homological_solve_principal(const JetSeries &r, int level)
{
    if (level < 2) {
        throw bad_filtration("level " + std::to_string(level) + " has zero eigenvalue (need l >= 2)");
    }
    return jet_map(r, [level](const Monomial &m, const Rational &c) {
        if (m.filtration() != level) {
            throw bad_filtration("term of filtration " + std::to_string(m.filtration()) + " in a level-"
                                 + std::to_string(level) + " right-hand side");
        }
        return c / Rational(level - 1);
    });
}

JetSeries exp_ad_pullback(const JetSeries &b, const JetSeries &p, int weight)
{
    if (filtration_order(b) < 2) {
        throw non_convergent("exp(ad b) needs filtration_order(b) >= 2, got " + std::to_string(filtration_order(b)));
    }
    JetSeries sum = p;
    JetSeries term = p;
    // Each application raises the filtration by at least one.
    for (int j = 1; j <= p.caps().N && !term.is_zero(); ++j) {
        term = jet_scale(graded_bracket(b, 1, term, weight), Rational(1, j));
        sum = jet_add(sum, term);
    }
    return sum;
}

JetCaps principal_working_caps(const JetCaps &caps)
{
    return JetCaps::make(caps.n, caps.N, caps.M + caps.N - 1);
}

PrincipalCertificate normalize_principal(const JetSeries &p, const JetCaps &caps)
{
    return normalize_principal_at(p, caps, principal_working_caps(caps));
}

PrincipalCertificate normalize_principal_at(const JetSeries &p, const JetCaps &caps, const JetCaps &working)
{
    if (p.caps().n != caps.n || working.n != caps.n || working.N < caps.N || working.M < caps.M) {
        throw dimension_mismatch("incompatible caps for principal normalization");
    }
    const JetSeries pw = with_caps(p, working);
    LinearReduction lin = linear_reduction(pw);

    PrincipalCertificate cert;
    cert.caps = caps;
    cert.working_caps = working;
    cert.lambda = lin.lambda;

    const JetSeries z = jet_var(working, Var::z());
    JetSeries current = std::move(lin.reduced);
    for (int l = 2; l < working.N; ++l) {
        JetSeries r = level_part(jet_sub(current, z), l);
        JetSeries b = homological_solve_principal(r, l);
        current = exp_ad_pullback(b, current);
        if (filtration_order(jet_sub(current, z)) <= l) {
            throw assertion_failure("level " + std::to_string(l) + " survived its own pullback");
        }
        cert.log.push_back({l, std::move(r)});
        cert.generators.push_back(std::move(b));
    }

    // Phi(lambda^{-1} p) = Phi_0(lambda^{-1}) Phi(p): the elliptic factor is
    // the pulled-back function lambda^{-1}.
    cert.elliptic_factor = apply_principal_pullbacks(cert, jet_invert(cert.lambda), 0);

    const JetSeries residual = jet_sub(current, z);
    if (filtration_order(residual) < working.N) {
        throw assertion_failure("principal residual below level N: " + to_string(residual));
    }
    cert.residual = with_caps(residual, caps);

    const PrincipalReplay replay = replay_principal(cert, p);
    if (!replay.pass) {
        throw assertion_failure("principal certificate replay failed (defect order "
                                + std::to_string(replay.defect_order) + ")");
    }
    return cert;
}

JetSeries apply_principal_pullbacks(const PrincipalCertificate &cert, const JetSeries &g, int weight)
{
    JetSeries out = with_caps(g, cert.working_caps);
    for (const auto &b : cert.generators) {
        out = exp_ad_pullback(b, out, weight);
    }
    return out;
}

PrincipalReplay replay_principal(const PrincipalCertificate &cert, const JetSeries &p)
{
    const JetSeries pulled = apply_principal_pullbacks(cert, p, 1);
    const JetSeries normalized = jet_mul(cert.elliptic_factor, pulled);
    PrincipalReplay out;
    out.normalized = with_caps(normalized, cert.caps);
    out.defect_order = filtration_order(jet_sub(out.normalized, jet_var(cert.caps, Var::z())));
    out.pass = out.defect_order >= cert.caps.N;
    return out;
}

} // namespace radnf
