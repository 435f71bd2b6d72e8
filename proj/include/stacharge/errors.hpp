#pragma once

#include <stdexcept>
#include <string>

namespace stacharge {

/// Bad user input: invalid specs, malformed configs, unusable arguments.
/// The CLI maps these to exit status 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure raised while computing: degenerate geometry, integrator breakdown.
/// The CLI maps these to exit status 2.
class NumericalError : public std::runtime_error {
public:
    enum class Kind {
        DegenerateAngle,
        DegeneratePulse,
        DegenerateSpectrum,
        GaugeTracking,
        Stiffness,
        Divergence,
        TraceDrift,
    };

    NumericalError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace stacharge
