#ifndef RADNF_ERRORS_HPP
#define RADNF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace radnf
{

// Exit-code families used by the command line front end.
enum class error_kind {
    usage = 1,
    precondition = 2,
    numerical = 3,
    internal = 4,
};

class error : public std::runtime_error
{
public:
    error(error_kind kind, const std::string &what) : std::runtime_error(what), m_kind(kind) {}
    error_kind kind() const noexcept { return m_kind; }

private:
    error_kind m_kind;
};

#define RADNF_DEFINE_ERROR(name, family)                                                                               \
    class name : public error                                                                                          \
    {                                                                                                                  \
    public:                                                                                                            \
        explicit name(const std::string &what) : error(error_kind::family, what) {}                                   \
    };

// jet algebra
RADNF_DEFINE_ERROR(cap_violation, precondition)
RADNF_DEFINE_ERROR(dimension_mismatch, precondition)
RADNF_DEFINE_ERROR(caps_mismatch, precondition)
RADNF_DEFINE_ERROR(not_elliptic, precondition)

// normal form
RADNF_DEFINE_ERROR(not_radial, precondition)
RADNF_DEFINE_ERROR(bad_filtration, precondition)
RADNF_DEFINE_ERROR(non_convergent, precondition)
RADNF_DEFINE_ERROR(caps_too_small, precondition)
RADNF_DEFINE_ERROR(inductive_hypothesis_violated, internal)
RADNF_DEFINE_ERROR(oracle_mismatch, internal)
RADNF_DEFINE_ERROR(assertion_failure, internal)

// flows
RADNF_DEFINE_ERROR(non_hyperbolic, precondition)
RADNF_DEFINE_ERROR(invalid_flow_spec, precondition)
RADNF_DEFINE_ERROR(step_failure, numerical)
RADNF_DEFINE_ERROR(no_convergence, numerical)
RADNF_DEFINE_ERROR(divergent_integral, numerical)

// input files
class parse_error : public error
{
public:
    parse_error(const std::string &msg, int line, int column)
        : error(error_kind::precondition,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          m_line(line), m_column(column)
    {
    }
    int line() const noexcept { return m_line; }
    int column() const noexcept { return m_column; }

private:
    int m_line;
    int m_column;
};

#undef RADNF_DEFINE_ERROR

} // namespace radnf

#endif
