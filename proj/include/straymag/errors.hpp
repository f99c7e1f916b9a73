#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace straymag {

// All library failures derive from Error and carry a stable code string.
// Re-thrown errors (e.g. annotated with a magnet or pixel index) keep the
// original code even when the dynamic type degrades to Error.
class Error : public std::runtime_error {
public:
    Error(std::string_view code, const std::string& message)
        : std::runtime_error(std::string(code) + ": " + message), code_(code) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define STRAYMAG_ERROR(Name)                               \
    class Name : public Error {                            \
    public:                                                \
        explicit Name(const std::string& message)          \
            : Error(#Name, message) {}                     \
    };

STRAYMAG_ERROR(NonPositiveDimension)
STRAYMAG_ERROR(NonFiniteInput)
STRAYMAG_ERROR(InvalidRotation)
STRAYMAG_ERROR(InvalidParameter)
STRAYMAG_ERROR(ZeroDirection)

STRAYMAG_ERROR(SingularPoint)
STRAYMAG_ERROR(LogSingularity)
STRAYMAG_ERROR(EdgeSingularity)
STRAYMAG_ERROR(NonFinitePoint)
STRAYMAG_ERROR(SurfacePoint)
STRAYMAG_ERROR(QuadratureTooCoarse)
STRAYMAG_ERROR(CoincidentPoint)
STRAYMAG_ERROR(DegenerateAxes)

STRAYMAG_ERROR(DiskIntersectsMagnet)
STRAYMAG_ERROR(QuadratureFailure)
STRAYMAG_ERROR(PitchMismatch)
STRAYMAG_ERROR(EmptyImage)
STRAYMAG_ERROR(ZeroTemplateSignal)
STRAYMAG_ERROR(NoSignal)

STRAYMAG_ERROR(FourIndexInvalid)
STRAYMAG_ERROR(AngleOutOfRange)
STRAYMAG_ERROR(UnknownPair)
STRAYMAG_ERROR(UnknownMaterial)

STRAYMAG_ERROR(ParseError)
STRAYMAG_ERROR(SchemaError)
STRAYMAG_ERROR(ValidationError)

#undef STRAYMAG_ERROR

}  // namespace straymag
