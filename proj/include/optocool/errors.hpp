#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace optocool {

// Base of all domain errors. name() is the stable identifier printed by the
// CLI and recorded in sweep error columns.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define OPTOCOOL_ERROR_TYPE(NAME)                                        \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}   \
    }

OPTOCOOL_ERROR_TYPE(NoPhysicalRoot);
OPTOCOOL_ERROR_TYPE(SingularDrift);
OPTOCOOL_ERROR_TYPE(UnstableSystem);
OPTOCOOL_ERROR_TYPE(EigenFailure);
OPTOCOOL_ERROR_TYPE(StiffnessFailure);
OPTOCOOL_ERROR_TYPE(NegativeOccupation);
OPTOCOOL_ERROR_TYPE(DegenerateDenominator);
OPTOCOOL_ERROR_TYPE(OutsideValidity);
OPTOCOOL_ERROR_TYPE(NonHermitianInput);
OPTOCOOL_ERROR_TYPE(NoStablePoint);
OPTOCOOL_ERROR_TYPE(SchemaError);
OPTOCOOL_ERROR_TYPE(RangeError);

#undef OPTOCOOL_ERROR_TYPE

// Thrown when the classical working point is not unique. Carries every
// positive real root of the intracavity-occupation cubic so the caller can
// inspect the hysteresis branches; silent branch selection is refused.
class BistableWorkingPoint : public Error {
public:
    BistableWorkingPoint(const std::string& what, std::vector<double> roots)
        : Error("BistableWorkingPoint", what), roots_(std::move(roots)) {}
    const std::vector<double>& roots() const noexcept { return roots_; }

private:
    std::vector<double> roots_;
};

}  // namespace optocool
