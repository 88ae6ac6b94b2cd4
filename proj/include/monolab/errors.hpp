#pragma once
#include <stdexcept>
#include <string>

namespace monolab {

// Error classes map onto CLI exit codes: config = 2, numerical = 3,
// nonconvergence = 4. Domain errors are programming/config mistakes and
// are folded into the config class by the runner.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct nonconvergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace monolab
