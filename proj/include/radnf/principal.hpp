#ifndef RADNF_PRINCIPAL_HPP
#define RADNF_PRINCIPAL_HPP

#include <vector>

#include <radnf/jet.hpp>

// Formal normalization of a radial principal symbol to z modulo I^N.
//
// The rescaled principal symbol p is divided by the unit lambda(y) read off
// from p = lambda(y) z mod I^2, and the remaining levels l = 2 .. N-1 are
// removed one at a time by pulling back along the time-1 flow of rho^{-1} b_l,
// which acts on degree-0 representatives as exp(ad b_l), ad b = <<b, .>>.
//
// Brackets lower the y-degree by at most as much as they raise the
// filtration, so the computation runs with y-cap M + N - 1 and every result
// is exact on monomials inside the requested caps (N, M).

namespace radnf
{

struct LinearReduction {
    JetSeries lambda;  // p = lambda(y) z mod I^2
    JetSeries reduced; // lambda^{-1} p = z mod I^2
};

// Throws not_radial when radial_check fails.
LinearReduction linear_reduction(const JetSeries &p);

// b with <<z, b>> = r for r homogeneous of filtration level l >= 2; each term
// is divided by l - 1. Throws bad_filtration otherwise.
JetSeries homological_solve_principal(const JetSeries &r, int level);

// sum_j (1/j!) (ad b)^j p where ad b = {rho^{-1} b, rho^{-weight} .} rescaled to
// degree 0. weight = 1 is the Lagrange-bracket action on rescaled symbols,
// weight = 0 the plain pullback of functions. Throws non_convergent if
// filtration_order(b) < 2.
JetSeries exp_ad_pullback(const JetSeries &b, const JetSeries &p, int weight = 1);

struct LevelRecord {
    int level = 0;
    JetSeries removed; // level-l part of (current - z) before the pullback
};

struct PrincipalCertificate {
    JetCaps caps;         // requested caps
    JetCaps working_caps; // caps the computation ran at
    JetSeries lambda;     // working caps
    // e with e * Phi(p) = z mod I^N, Phi the composed pullbacks (working caps).
    JetSeries elliptic_factor;
    std::vector<JetSeries> generators; // generators[i] is b_{i+2}, working caps
    JetSeries residual;                // (current - z) at requested caps; zero below level N
    std::vector<LevelRecord> log;
};

// Working caps used by normalize_principal for the requested caps.
JetCaps principal_working_caps(const JetCaps &caps);

PrincipalCertificate normalize_principal(const JetSeries &p, const JetCaps &caps);

// Same, at explicitly chosen working caps (same n and N >= caps.N, M >= caps.M).
PrincipalCertificate normalize_principal_at(const JetSeries &p, const JetCaps &caps, const JetCaps &working);

// Phi_weight(g): the generator chain applied in ascending level order.
JetSeries apply_principal_pullbacks(const PrincipalCertificate &cert, const JetSeries &g, int weight);

struct PrincipalReplay {
    JetSeries normalized; // e * Phi(p) at requested caps
    int defect_order = infinite_order; // filtration_order(e * Phi(p) - z) at requested caps
    bool pass = false;                 // defect_order >= N
};

// Recomputes e * Phi(p) from the certificate alone.
PrincipalReplay replay_principal(const PrincipalCertificate &cert, const JetSeries &p);

} // namespace radnf

#endif
