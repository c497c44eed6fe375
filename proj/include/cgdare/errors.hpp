#pragma once

#include <stdexcept>
#include <string>

namespace cgdare {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotPositiveSemidefinite : std::runtime_error {
    double most_negative_eigenvalue;
    explicit NotPositiveSemidefinite(const std::string& what, double eig)
        : std::runtime_error(what), most_negative_eigenvalue(eig) {}
};

struct NotInvariant : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotOutputNulling : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotAFriend : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SteinResidualTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PoleTooClose : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergentTrajectory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DesiredSetSizeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConjugationViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cgdare
