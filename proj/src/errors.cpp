#include "radarcomm/errors.hpp"

#include <sstream>

namespace radarcomm {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
        case Errc::CycleInvalid: return "CycleInvalid";
        case Errc::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
        case Errc::NonPositive: return "NonPositive";
        case Errc::NonPositiveDistance: return "NonPositiveDistance";
        case Errc::NegativeDensity: return "NegativeDensity";
        case Errc::InfeasibleFalseAlarm: return "InfeasibleFalseAlarm";
        case Errc::UnsupportedAlpha: return "UnsupportedAlpha";
        case Errc::WindowTooSmall: return "WindowTooSmall";
        case Errc::CoincidentNode: return "CoincidentNode";
        case Errc::InsufficientTrials: return "InsufficientTrials";
        case Errc::NonPositiveThreshold: return "NonPositiveThreshold";
        case Errc::ConfigError: return "ConfigError";
        case Errc::NumericalFailure: return "NumericalFailure";
    }
    return "UnknownError";
}

std::string ValidationError::join(const std::vector<Violation>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << "; ";
        os << v[i].field << ": " << v[i].message;
    }
    return os.str();
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? Errc::NonPositive : violations.front().code, join(violations)),
      violations_(std::move(violations)) {}

}  // namespace radarcomm
