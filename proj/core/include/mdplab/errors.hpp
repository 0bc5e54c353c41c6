#pragma once

#include <stdexcept>
#include <string>

namespace mdplab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LayoutInvalid : Error {
    using Error::Error;
};

struct StateSpaceOverflow : Error {
    using Error::Error;
};

struct InconsistentIndex : Error {
    using Error::Error;
};

struct NoLegalMove : Error {
    using Error::Error;
};

struct IllegalAction : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct IncompatibleEnvironments : Error {
    using Error::Error;
};

struct EnvironmentFault : Error {
    using Error::Error;
};

struct WorkerFailure : Error {
    using Error::Error;
};

/// Configuration problems: the message always names the offending key,
/// section, or path so the CLI can surface it verbatim (exit code 1).
struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct DegenerateSamples : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct DegenerateRanks : Error {
    using Error::Error;
};

struct EmptyUnion : Error {
    using Error::Error;
};

}  // namespace mdplab
