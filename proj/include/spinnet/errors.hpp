#pragma once

#include <stdexcept>
#include <string>

namespace spinnet {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AdmissibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// H1/H2/H3 or strict-triangle violations
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spinnet
