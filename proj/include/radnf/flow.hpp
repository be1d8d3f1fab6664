#ifndef RADNF_FLOW_HPP
#define RADNF_FLOW_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

// Floating-point flows of X = A x + perturbation(x) on R^k near a coordinate
// subspace L annihilated by A.

namespace radnf
{

struct FlowTerm {
    int component = 0;      // index of the vector-field component
    double coefficient = 0; // coefficient of x^exponents
    std::vector<int> exponents;
};

struct FlowSpec {
    int k = 0;
    Eigen::MatrixXd A;
    std::vector<FlowTerm> perturbation;
    std::vector<int> L; // 0-based coordinate indices spanning L
    int vanishing_order = 0;
    // When positive the perturbation is multiplied by chi(dist(x, L) / cutoff_radius),
    // chi smooth, equal to 1 on [0, 1/2] and 0 on [1, inf).
    double cutoff_radius = 0;

    // Throws invalid_flow_spec / dimension_mismatch.
    void validate() const;
    bool linear() const { return perturbation.empty(); }
    Eigen::VectorXd field(const Eigen::VectorXd &x) const;
    Eigen::VectorXd linear_field(const Eigen::VectorXd &x) const { return A * x; }
    Eigen::VectorXd project_to_L(const Eigen::VectorXd &x) const;
    double distance_to_L(const Eigen::VectorXd &x) const;
    // The spec of -X.
    FlowSpec reversed() const;
    // The spec of the linear part alone.
    FlowSpec linear_part() const;
};

// Smooth transition: 1 on (-inf, 0], 0 on [1, inf).
double smooth_step_down(double s);

struct FlowParams {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double cauchy_tol = 1e-9; // horizon-doubling stopping tolerance
    double t_max = 64;
    double initial_horizon = 1;
    double initial_step = 1e-2;
    std::size_t max_steps = 2000000;
    double fd_step = 0; // 0 selects cbrt(abs_tol)
    double stabilization_tol = 1e-4;
    unsigned threads = 0; // 0 selects hardware concurrency

    // Every tolerance divided by factor.
    FlowParams tightened(double factor) const;
    double finite_difference_step() const;
};

struct Splitting {
    Eigen::MatrixXd stable;   // columns span the A-invariant complement of L with Re < 0
    Eigen::MatrixXd unstable; // same with Re > 0
    Eigen::MatrixXd L;        // coordinate basis of L
    Eigen::MatrixXd E_minus;  // [stable, L]: points whose forward orbit tends to L
    Eigen::MatrixXd E_plus;   // [unstable, L]
    double projection_residual = 0;
};

// Throws non_hyperbolic, invalid_flow_spec.
Splitting stable_splitting(const Eigen::MatrixXd &A, const std::vector<int> &L);

// U(t) x. Linear specs use the matrix exponential. Throws step_failure.
Eigen::VectorXd integrate_flow(const FlowSpec &spec, const Eigen::VectorXd &x, double t, const FlowParams &params);

struct LimitResult {
    Eigen::VectorXd value;
    double cauchy_difference = 0; // |value(2T) - value(T)| at the accepted horizon
    double horizon = 0;
    bool converged = false;
};

// W_-(x) = lim U(-t) U_0(t) x for X = spec.field, X_0 = A x. Throws no_convergence.
LimitResult wminus_map(const FlowSpec &spec, const Eigen::VectorXd &x, const FlowParams &params);

struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    int points_per_axis = 5;

    std::vector<Eigen::VectorXd> grid() const;
    Box scaled(double factor) const; // about the center
};

// max over the box grid of |DW_-(x) X_0(x) - X(W_-(x))|, DW_- by central differences.
double linearization_residual(const FlowSpec &spec, const Box &region, const FlowParams &params);

struct TransportSource {
    std::vector<FlowTerm> terms; // component ignored
    double inner_radius = 0;     // cutoff is 1 for |x| <= inner_radius
    double outer_radius = 0;     // and 0 for |x| >= outer_radius; 0 disables the cutoff

    double operator()(const Eigen::VectorXd &x) const;
};

enum class transport_direction {
    forward, // f = -int_0^inf e^{c t} g(U_V(t) x) dt
    reverse, // f = +int_0^inf e^{-c t} g(U_{-V}(t) x) dt
};

std::string to_string(transport_direction d);

// Both directions solve V f + c f = g when the integral converges.
// Throws divergent_integral.
double transport_solve(const FlowSpec &V, const TransportSource &g, double c, const Eigen::VectorXd &x,
                       const FlowParams &params, transport_direction direction = transport_direction::forward);

// |V f + c f - g| at x with V f from a five-point stencil along V(x).
double transport_residual(const FlowSpec &V, const TransportSource &g, double c, const Eigen::VectorXd &x,
                          const FlowParams &params, transport_direction direction = transport_direction::forward,
                          double step = 1e-3);

// lim_{t -> inf} U(t) x by horizon doubling; reports instead of throwing.
LimitResult forward_limit(const FlowSpec &spec, const Eigen::VectorXd &x, const FlowParams &params);

struct ProbeGrid {
    std::vector<Eigen::VectorXd> base_points; // points on L
    double h = 0.05;                          // coarsest mesh; refinements use h/2, h/4
    int refinements = 3;
};

struct ProbeEstimate {
    Eigen::VectorXd base;
    int direction = 0;                  // complement coordinate crossed
    std::vector<Eigen::VectorXd> plus;  // one-sided derivative from the + side, per refinement
    std::vector<Eigen::VectorXd> minus; // from the - side
    bool converged = true;
};

struct LimitProbeReport {
    std::vector<double> mesh;
    std::vector<ProbeEstimate> estimates;
    double refinement_spread = 0; // max change between consecutive refinements
    double side_gap = 0;          // max |plus - minus| at the finest mesh
    std::size_t nonconvergent_points = 0;
    bool stabilized = false;
    // For linear specs: max |limit - exact limit| over all sampled points.
    double linear_model_error = 0;
};

LimitProbeReport limit_map_probe(const FlowSpec &spec, const ProbeGrid &grid, const FlowParams &params);

// Runs body(i) for i in [0, count) on params.threads workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)> &body);

} // namespace radnf

#endif
