#ifndef RADNF_SYMBOL_HPP
#define RADNF_SYMBOL_HPP

#include <string>
#include <vector>

#include <radnf/jet.hpp>

namespace radnf
{

// Polyhomogeneous symbol with integer steps. components[j] is the degree-0
// representative of the part homogeneous of degree m - j, i.e. the true
// part is rho^{-(m - j)} * components[j].
struct ClassicalSymbol {
    int m = 1;
    std::vector<JetSeries> components;

    // Throws std::invalid_argument if empty, caps_mismatch if caps differ.
    ClassicalSymbol(int order, std::vector<JetSeries> comps);
    ClassicalSymbol() = default;

    const JetCaps &caps() const { return components.front().caps(); }
    const JetSeries &principal() const { return components.front(); }

    friend bool operator==(const ClassicalSymbol &, const ClassicalSymbol &) = default;
};

// A b-vector field on the chart (y, z, theta, rho); the rho component is kept
// as the coefficient of rho d_rho.
struct ChartVectorField {
    std::vector<JetSeries> coeff_y;
    JetSeries coeff_z;
    std::vector<JetSeries> coeff_theta;
    JetSeries coeff_rho_drho;

    friend bool operator==(const ChartVectorField &, const ChartVectorField &) = default;
};

// Hamilton field of rho^{-1} a for a degree-0 representative a:
//   d_z a (rho d_rho + theta.d_theta) - (theta.d_theta a - a) d_z
//     + sum_i (d_theta_i a d_y_i - d_y_i a d_theta_i)
ChartVectorField chart_hamilton_field(const JetSeries &a);

// Degree-0 representative of field applied to rho^{-weight} g.
JetSeries apply_field(const ChartVectorField &field, const JetSeries &g, int weight);

// Degree-0 representative of {rho^{-s} a, rho^{-t} b}; the bracket has weight s + t - 1.
JetSeries graded_bracket(const JetSeries &a, int s, const JetSeries &b, int t);

// rho {rho^{-1} a, rho^{-1} b}
JetSeries lagrange_bracket(const JetSeries &a, const JetSeries &b);

// theta . d_theta, diagonal on monomials with eigenvalue |alpha|.
JetSeries theta_euler(const JetSeries &a);

enum class radial_condition {
    vanishes_on_lambda,       // p|Lambda = 0
    theta_derivative_vanishes, // d_theta p|Lambda = 0
    y_derivative_vanishes,     // d_y p|Lambda = 0
    nondegenerate,             // d_z p|Lambda != 0 at q0
};

std::string describe(radial_condition c);

struct RadialReport {
    bool in_class = false;
    JetSeries lambda_factor; // p = lambda(y) z mod I^2
    std::vector<radial_condition> failures;
};

RadialReport radial_check(const ClassicalSymbol &P);
RadialReport radial_check(const JetSeries &p);

} // namespace radnf

#endif
