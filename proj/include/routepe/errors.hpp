#pragma once

#include <stdexcept>
#include <string>

namespace routepe {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid option values or inconsistent configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed routes or solutions (missing depot endpoints, interior depots, ...).
struct StructureError : Error {
    using Error::Error;
};

// Missing or unreadable/unwritable files and directories.
struct IoError : Error {
    using Error::Error;
};

// A file parsed as JSON but does not match the documented schema.
struct SchemaError : Error {
    using Error::Error;
};

// Numerical failure (degenerate geometry, eigensolver non-convergence, ...).
struct NumericError : Error {
    using Error::Error;
};

// The instance admits no feasible solution under the construction heuristics.
struct InfeasibleError : Error {
    using Error::Error;
};

// Raised by spearman() when an input is constant and the coefficient is undefined.
struct UndefinedCorrelation : Error {
    using Error::Error;
};

}  // namespace routepe
