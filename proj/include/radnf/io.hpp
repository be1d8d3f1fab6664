#ifndef RADNF_IO_HPP
#define RADNF_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <radnf/flow.hpp>
#include <radnf/lower_order.hpp>
#include <radnf/principal.hpp>
#include <radnf/symbol.hpp>

namespace radnf
{

// Symbol files:
//
//   # comment
//   n=2, order=1, N=6, M=4
//   [1]:
//   1 z
//   -2/3 z^2 theta1
//   [0]: 1/2 y1
//
// Sections are homogeneities m, m-1, ...; absent sections are zero. A term is
// an optional coefficient (integer or p/q, '-' or U+2212 sign) followed by
// monomial tokens y<i>, z, theta<i> with optional ^exponent, separated by
// spaces or '*'.

struct CapOverrides {
    std::optional<int> N;
    std::optional<int> M;
};

// Throws parse_error, cap_violation, dimension_mismatch.
ClassicalSymbol parse_symbol_text(const std::string &text, const CapOverrides &overrides = {});
// Throws std::ios_base::failure when the file cannot be read.
ClassicalSymbol parse_symbol_file(const std::string &path, const CapOverrides &overrides = {});

std::string emit_symbol_text(const ClassicalSymbol &P);

// Flow files (one key per line, '#' comments):
//
//   dim = 2
//   A = -1 0 0 -1                 row-major
//   perturb[1]: 1 x1^5 x2^4       component 1..dim; plain "perturb:" when dim = 1
//   L = 1                         1-based coordinate indices, possibly empty
//   vanishing = 8
//   cutoff = 0.5
//   g: 1 x1^4                     transport source, one term per line
//   g_cutoff = 0.5 0.9
//   c = 1
//   direction = forward | reverse
//   box = -0.3 0.3                sample box, same interval on each axis
//   grid = 5                      points per axis
//   sample = 0.1 0.2              explicit transport sample point (repeatable)
//   probe_point = 0 0             base point on L for limit-probe (repeatable)
//   probe_h = 0.05
struct FlowFile {
    FlowSpec spec;
    TransportSource source;
    double c = 1;
    transport_direction direction = transport_direction::forward;
    Box box;
    std::vector<Eigen::VectorXd> samples;
    std::vector<Eigen::VectorXd> probe_points;
    double probe_h = 0.05;
};

// Throws parse_error, dimension_mismatch, invalid_flow_spec.
FlowFile parse_flow_text(const std::string &text);
FlowFile parse_flow_file(const std::string &path);

std::string read_file(const std::string &path);

using json = nlohmann::json;

json jet_to_json(const JetSeries &a);
JetSeries jet_from_json(const json &j);

json radial_report_to_json(const RadialReport &r);

json principal_certificate_to_json(const PrincipalCertificate &c);
PrincipalCertificate principal_certificate_from_json(const json &j);

json normalization_certificate_to_json(const NormalizationCertificate &c);
NormalizationCertificate normalization_certificate_from_json(const json &j);

// Text form of the two certificates for the side-by-side report.
std::string principal_report_text(const PrincipalCertificate &c, const PrincipalReplay &replay);
std::string normalization_report_text(const NormalizationCertificate &c);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string &path, const std::string &contents);

} // namespace radnf

#endif
