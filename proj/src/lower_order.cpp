#include <radnf/lower_order.hpp>

#include <numeric>

#include <radnf/errors.hpp>

namespace radnf
{

std::string to_string(routing r)
{
    return r == routing::z_divisible_to_f ? "z_divisible_to_f" : "eigen_to_b";
}

int homological_eigenvalue(const Monomial &m, int k)
{
    return m.filtration() + k;
}

int printed_homological_eigenvalue(const Monomial &m, int k)
{
    return m.filtration() - 2 * m.a + k;
}

JetSeries homological_operator(const JetSeries &b, int k)
{
    return jet_map(b, [k](const Monomial &m, const Rational &c) { return c * Rational(homological_eigenvalue(m, k)); });
}

HomologicalSplit homological_solve_order_k(const JetSeries &p, int k, routing route)
{
    const JetCaps &caps = p.caps();
    std::vector<std::pair<Monomial, Rational>> b, f, resonant;
    for (auto &[m, c] : p.terms()) {
        const int mu = homological_eigenvalue(m, k);
        const bool to_f = m.a > 0 && (route == routing::z_divisible_to_f || mu == 0);
        if (to_f) {
            Monomial q = m;
            --q.a;
            f.emplace_back(std::move(q), c);
        } else if (mu != 0) {
            b.emplace_back(m, c / Rational(mu));
        } else {
            resonant.emplace_back(m, c);
        }
    }
    return {make_jet(b, caps), make_jet(f, caps), make_jet(resonant, caps)};
}

ClassicalSymbol apply_stage(const ClassicalSymbol &S, int k, const JetSeries &b, const JetSeries &f)
{
    if (S.m != 1) {
        throw std::invalid_argument("stage transforms act on symbols rescaled to principal order 1");
    }
    const std::size_t depth = S.components.size();
    const std::size_t shift = static_cast<std::size_t>(k) + 1;
    auto weight = [](std::size_t j) { return 1 - static_cast<int>(j); };

    // exp(ad rho^k b): every bracket moves a component down by k + 1 orders.
    std::vector<JetSeries> out = S.components;
    std::vector<JetSeries> term = S.components;
    if (!b.is_zero()) {
        for (int i = 1; i <= static_cast<int>(depth); ++i) {
            std::vector<JetSeries> next(depth, jet_zero(S.caps()));
            bool any = false;
            for (std::size_t j = 0; j + shift < depth; ++j) {
                if (term[j].is_zero()) {
                    continue;
                }
                next[j + shift] = jet_scale(graded_bracket(b, -k, term[j], weight(j)), Rational(1, i));
                any = any || !next[j + shift].is_zero();
            }
            if (!any) {
                break;
            }
            for (std::size_t j = 0; j < depth; ++j) {
                out[j] = jet_add(out[j], next[j]);
            }
            term = std::move(next);
        }
    }
    // (1 - rho^{k+1} f) times the conjugated symbol.
    if (!f.is_zero()) {
        const std::vector<JetSeries> conj = out;
        for (std::size_t j = shift; j < depth; ++j) {
            out[j] = jet_sub(out[j], jet_mul(f, conj[j - shift]));
        }
    }
    return ClassicalSymbol(1, std::move(out));
}

StageDiscrepancy conjugation_discrepancy(const ClassicalSymbol &current, int k, const JetSeries &b,
                                         const JetSeries &f)
{
    if (current.m != 1) {
        throw inductive_hypothesis_violated("symbol is not rescaled to principal order 1");
    }
    const JetCaps &caps = current.caps();
    const std::size_t depth = current.components.size();
    if (k < 0 || static_cast<std::size_t>(k) + 1 >= depth) {
        throw std::invalid_argument("stage " + std::to_string(k) + " outside the tracked orders");
    }
    if (!(current.components[0] == jet_var(caps, Var::z()))) {
        throw inductive_hypothesis_violated("principal part is not z: " + to_string(current.components[0]));
    }
    for (int j = 1; j <= k; ++j) {
        const JetSeries &c = current.components[j];
        const bool ok = j == 1 ? filtration_order(c) == infinite_order || c == level_part(c, 0) : c.is_zero();
        if (!ok) {
            throw inductive_hypothesis_violated("order " + std::to_string(1 - j) + " part not yet normalized: "
                                                + to_string(c));
        }
    }
    StageDiscrepancy out{apply_stage(current, k, b, f), jet_zero(caps), jet_zero(caps)};
    out.at_order_k = out.conjugated.components[k + 1];
    if (static_cast<std::size_t>(k) + 2 < depth) {
        out.next_discrepancy = out.conjugated.components[k + 2];
    }
    return out;
}

JetCaps full_working_caps(const JetCaps &caps, int K)
{
    // Up to K + 1 stage brackets can lower filtration and y-degree by one each.
    return JetCaps::make(caps.n, caps.N + K + 1, caps.M + caps.N + K);
}

namespace
{

std::vector<JetSeries> tracked_components(const ClassicalSymbol &P, int K, const JetCaps &working)
{
    std::vector<JetSeries> comps;
    for (int j = 0; j < K + 2; ++j) {
        comps.push_back(j < static_cast<int>(P.components.size()) ? with_caps(P.components[j], working)
                                                                    : jet_zero(working));
    }
    return comps;
}

} // namespace

NormalizationCertificate normalize_full(const ClassicalSymbol &P, int K, const JetCaps &caps, routing route)
{
    if (K < 0) {
        throw std::invalid_argument("number of stages must be non-negative");
    }
    if (K >= caps.N) {
        throw caps_too_small("K = " + std::to_string(K) + " stages need filtration cap N > K, got N = "
                             + std::to_string(caps.N));
    }
    if (P.caps().n != caps.n) {
        throw dimension_mismatch("symbol dimension differs from caps");
    }
    NormalizationCertificate cert;
    cert.caps = caps;
    cert.working_caps = full_working_caps(caps, K);
    cert.input_order = P.m;
    cert.stages_requested = K;
    cert.route = route;

    const JetCaps &working = cert.working_caps;
    std::vector<JetSeries> comps = tracked_components(P, K, working);
    cert.principal = normalize_principal_at(comps[0], caps, working);

    const JetSeries lambda_inv = jet_invert(cert.principal.lambda);
    for (std::size_t j = 0; j < comps.size(); ++j) {
        comps[j] = apply_principal_pullbacks(cert.principal, jet_mul(lambda_inv, comps[j]), 1 - static_cast<int>(j));
    }
    ClassicalSymbol S(1, std::move(comps));

    JetSeries p0 = jet_zero(working);
    for (int k = 0; k <= K; ++k) {
        const JetSeries &discrepancy = S.components[k + 1];
        HomologicalSplit split = homological_solve_order_k(discrepancy, k, route);
        if (k == 0) {
            p0 = split.resonant;
        } else if (!split.resonant.is_zero()) {
            throw assertion_failure("resonant terms at stage " + std::to_string(k) + ": " + to_string(split.resonant));
        }
        split.b.for_each([&](const Monomial &m, const Rational &) {
            if (printed_homological_eigenvalue(m, k) != homological_eigenvalue(m, k)) {
                cert.sign_convention.conventions_agree_on_b_terms = false;
            }
        });

        StageDiscrepancy d = conjugation_discrepancy(S, k, split.b, split.f);
        const JetSeries target = k == 0 ? p0 : jet_zero(working);
        JetSeries residual = with_caps(jet_sub(d.at_order_k, target), caps);
        if (filtration_order(residual) < caps.N) {
            throw assertion_failure("stage " + std::to_string(k) + " left " + to_string(residual));
        }
        cert.stages.push_back({k, std::move(split.b), std::move(split.f), std::move(split.resonant), std::move(residual)});
        S = std::move(d.conjugated);
    }
    cert.p0 = with_caps(p0, caps);

    cert.replay = replay_full(cert, P);
    cert.replay_pass = std::all_of(cert.replay.begin(), cert.replay.end(), [](const OrderCheck &c) { return c.pass; });
    if (!cert.replay_pass) {
        throw assertion_failure("full normalization replay failed");
    }
    return cert;
}

std::vector<OrderCheck> replay_full(const NormalizationCertificate &cert, const ClassicalSymbol &P)
{
    const JetCaps &working = cert.working_caps;
    const int K = cert.stages_requested;
    std::vector<JetSeries> comps = tracked_components(P, K, working);
    for (std::size_t j = 0; j < comps.size(); ++j) {
        comps[j] = jet_mul(cert.principal.elliptic_factor,
                           apply_principal_pullbacks(cert.principal, comps[j], 1 - static_cast<int>(j)));
    }
    ClassicalSymbol S(1, std::move(comps));
    for (const auto &stage : cert.stages) {
        S = apply_stage(S, stage.k, stage.b, stage.f);
    }

    std::vector<OrderCheck> checks;
    for (std::size_t j = 0; j < S.components.size(); ++j) {
        OrderCheck c;
        c.order = 1 - static_cast<int>(j);
        JetSeries target = jet_zero(cert.caps);
        if (j == 0) {
            c.target = "z";
            target = jet_var(cert.caps, Var::z());
        } else if (j == 1) {
            c.target = "p0(y)";
            target = cert.p0;
        } else {
            c.target = "0";
        }
        c.defect_order = filtration_order(jet_sub(with_caps(S.components[j], cert.caps), target));
        c.pass = c.defect_order >= cert.caps.N;
        checks.push_back(std::move(c));
    }
    return checks;
}

} // namespace radnf
