#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace radarcomm {

enum class Errc {
    AlphaOutOfRange,
    CycleInvalid,
    ProbabilityOutOfRange,
    NonPositive,
    NonPositiveDistance,
    NegativeDensity,
    InfeasibleFalseAlarm,
    UnsupportedAlpha,
    WindowTooSmall,
    CoincidentNode,
    InsufficientTrials,
    NonPositiveThreshold,
    ConfigError,
    NumericalFailure,
};

const char* errc_name(Errc c);

/// Base error for all library failures. Carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

/// One violated parameter constraint.
struct Violation {
    Errc code;
    std::string field;
    std::string message;
};

/// Raised by parameter validation; collects every violated constraint,
/// not just the first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<Violation>& v);
    std::vector<Violation> violations_;
};

}  // namespace radarcomm
