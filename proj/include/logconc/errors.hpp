#pragma once

#include <stdexcept>
#include <string>

namespace logconc {

// Error hierarchy shared by all modules. Every failure mode carries a text
// diagnostic; callers that want to continue (suite runners) catch LogconcError.
struct LogconcError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidParameter : LogconcError {
    using LogconcError::LogconcError;
};
struct NonNormalizable : LogconcError {
    using LogconcError::LogconcError;
};
struct EmptyRestriction : LogconcError {
    using LogconcError::LogconcError;
};
struct NonConverged : LogconcError {
    using LogconcError::LogconcError;
};
struct NotLogConcave : LogconcError {
    using LogconcError::LogconcError;
};
struct NotAbsolutelyContinuous : LogconcError {
    using LogconcError::LogconcError;
};
struct GridMismatch : LogconcError {
    using LogconcError::LogconcError;
};
struct LPFailure : LogconcError {
    using LogconcError::LogconcError;
};
struct UnknownFormula : LogconcError {
    using LogconcError::LogconcError;
};
struct MissingInput : LogconcError {
    using LogconcError::LogconcError;
};
struct NoApplicableFormula : LogconcError {
    using LogconcError::LogconcError;
};
struct WitnessNotFound : LogconcError {
    using LogconcError::LogconcError;
};
struct ConfigError : LogconcError {
    using LogconcError::LogconcError;
};
struct IOError : LogconcError {
    using LogconcError::LogconcError;
};

}  // namespace logconc
