#ifndef WQED_ERRORS_HPP
#define WQED_ERRORS_HPP

#include <stdexcept>

namespace wqed {

// A closed-form denominator fell below its scale-relative tolerance;
// the message names the factor that vanished.
struct DegenerateDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Elimination hit a pivot below tolerance.
struct SingularSystem : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// g_opt is requested where Gamma2 < gamma_c.
struct GOptUndefined : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Axis parameter unknown or not applicable to the sweep flavor.
struct InvalidAxis : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnknownParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wqed

#endif // WQED_ERRORS_HPP
