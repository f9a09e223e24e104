#ifndef GLDUAL_ERRORS_HPP
#define GLDUAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gldual {

/* Malformed or out-of-domain input (CLI exit code 2). */
struct input_error : public std::invalid_argument {
    explicit input_error(std::string const & what)
        : std::invalid_argument(what) {}
};

/* An enumeration would exceed its configured size budget (CLI exit code 2). */
struct budget_error : public std::runtime_error {
    explicit budget_error(std::string const & what)
        : std::runtime_error(what) {}
};

/* A computed object failed one of its exact self-checks (CLI exit code 1). */
struct verification_error : public std::runtime_error {
    explicit verification_error(std::string const & what)
        : std::runtime_error(what) {}
};

} // namespace gldual

#endif /* GLDUAL_ERRORS_HPP */
