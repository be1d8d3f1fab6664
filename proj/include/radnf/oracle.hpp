#ifndef RADNF_ORACLE_HPP
#define RADNF_ORACLE_HPP

#include <cstdint>
#include <random>

#include <radnf/jet.hpp>

namespace radnf
{

// Deterministic for a given engine state: exponents and coefficients are
// drawn with plain modular reduction of raw engine output.
JetSeries random_jet(std::mt19937_64 &rng, const JetCaps &caps, int max_degree, int terms);

struct HamiltonTrial {
    bool field_matches = false;   // chart Hamilton field of rho^{-1} a applied to rho^{-t} b
    bool bracket_matches = false; // graded_bracket(a, s, b, t)
    bool pass() const { return field_matches && bracket_matches; }
};

// Compares the chart formulas with the canonical-coordinate Laurent computation.
HamiltonTrial hamilton_oracle_trial(const JetSeries &a, int s, const JetSeries &b, int t);

} // namespace radnf

#endif
