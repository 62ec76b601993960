#pragma once

#include <stdexcept>
#include <string>

namespace divchain {

// Bad argument or a state outside the chain's state space. CLI exit code 1.
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Allocation failure or a requested size beyond what we are willing to hold. Exit code 3.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numeric check that should hold did not. Exit code 2.
struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct subinvariance_violation : verification_error {
    using verification_error::verification_error;
};

// Chain/weight pair for which no certified tail bound is implemented.
struct unsupported_combination : domain_error {
    using domain_error::domain_error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw domain_error(what);
}

}  // namespace divchain
