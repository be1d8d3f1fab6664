#ifndef RADNF_LOWER_ORDER_HPP
#define RADNF_LOWER_ORDER_HPP

#include <string>
#include <vector>

#include <radnf/jet.hpp>
#include <radnf/principal.hpp>
#include <radnf/symbol.hpp>

// Removal of the lower-order terms of a classical symbol whose principal
// part is already z.
//
// At stage k the order -k discrepancy p_k (degree-0 representative) is split
// as  H_k b + z f + resonant = p_k  with the homological operator
//
//   H_k = theta.d_theta + z d_z + k,    H_k(z^a theta^alpha y^beta) = (|alpha| + a + k) z^a theta^alpha y^beta,
//
// which is {rho^{-1} z, rho^k .} rescaled. The symbol is then conjugated by
// exp(ad rho^k b) and multiplied by (1 - rho^{k+1} f), which cancels the order
// -k discrepancy up to the resonant part. Only k = 0 has resonances: the
// y-only monomials, which make up p0(y).
//
// Both operations are realized at the level of Poisson brackets of symbols,
// so every stage only pushes new terms to strictly lower orders.

namespace radnf
{

// Where z-divisible terms with nonzero eigenvalue go.
enum class routing {
    z_divisible_to_f, // default: every term with a > 0 becomes part of f
    eigen_to_b,       // every term with nonzero eigenvalue becomes part of b
};

std::string to_string(routing r);

// |alpha| + a + k
int homological_eigenvalue(const Monomial &m, int k);
// |alpha| - a + k, the variant with the opposite sign on z d_z.
int printed_homological_eigenvalue(const Monomial &m, int k);

// H_k applied to b.
JetSeries homological_operator(const JetSeries &b, int k);

struct HomologicalSplit {
    JetSeries b;
    JetSeries f;
    JetSeries resonant;
};

// Satisfies homological_operator(b, k) + z f + resonant = p exactly.
HomologicalSplit homological_solve_order_k(const JetSeries &p, int k, routing route = routing::z_divisible_to_f);

// Components indexed by weight: components[j] has weight 1 - j, so the
// symbol must have m == 1.
ClassicalSymbol apply_stage(const ClassicalSymbol &S, int k, const JetSeries &b, const JetSeries &f);

struct StageDiscrepancy {
    ClassicalSymbol conjugated;
    JetSeries at_order_k;       // order -k component after the stage (p0 at k = 0, zero otherwise)
    JetSeries next_discrepancy; // order -(k+1) component after the stage
};

// Checks the inductive hypothesis (principal part z; for k >= 1 the order 0
// part is y-only), applies the stage and reads off the discrepancies.
// Throws inductive_hypothesis_violated.
StageDiscrepancy conjugation_discrepancy(const ClassicalSymbol &current, int k, const JetSeries &b,
                                         const JetSeries &f);

struct StageRecord {
    int k = 0;
    JetSeries b;        // working caps
    JetSeries f;        // working caps
    JetSeries resonant; // working caps
    JetSeries residual; // order -k component minus target at requested caps
};

struct SignConvention {
    std::string eigenvalue = "|alpha| + a + k";
    std::string printed_alternative = "|alpha| - a + k";
    // Whether both formulas give the same divisor on every term routed to b.
    bool conventions_agree_on_b_terms = true;
};

struct OrderCheck {
    int order = 0; // homogeneity after rescaling to principal order 1
    std::string target;
    int defect_order = infinite_order; // filtration of (component - target) at requested caps
    bool pass = false;
};

struct NormalizationCertificate {
    JetCaps caps;
    JetCaps working_caps;
    int input_order = 1; // m of the input; components are rescaled by rho^{m-1}
    int stages_requested = 0;
    routing route = routing::z_divisible_to_f;
    PrincipalCertificate principal;
    JetSeries p0; // requested caps, y-only
    std::vector<StageRecord> stages;
    SignConvention sign_convention;
    std::vector<OrderCheck> replay;
    bool replay_pass = false;
};

// Working caps for K stages at requested caps.
JetCaps full_working_caps(const JetCaps &caps, int K);

// Throws not_radial, caps_too_small (K >= N), assertion_failure.
NormalizationCertificate normalize_full(const ClassicalSymbol &P, int K, const JetCaps &caps,
                                        routing route = routing::z_divisible_to_f);

// Recomputes principal pullbacks and all stages from the certificate and
// compares each tracked order with (z; p0; 0; ...).
std::vector<OrderCheck> replay_full(const NormalizationCertificate &cert, const ClassicalSymbol &P);

} // namespace radnf

#endif
