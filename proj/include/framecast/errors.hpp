#pragma once

#include <stdexcept>
#include <string>

namespace framecast {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define FRAMECAST_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& what) : Error(what) {}        \
    }

FRAMECAST_DEFINE_ERROR(InvalidArgument);
FRAMECAST_DEFINE_ERROR(DimensionMismatch);
FRAMECAST_DEFINE_ERROR(NotSquare);
FRAMECAST_DEFINE_ERROR(NotSymmetric);
FRAMECAST_DEFINE_ERROR(NoConvergence);
FRAMECAST_DEFINE_ERROR(NotSpd);
FRAMECAST_DEFINE_ERROR(NotAFrame);
FRAMECAST_DEFINE_ERROR(InvalidProjector);
FRAMECAST_DEFINE_ERROR(HypothesisViolated);
FRAMECAST_DEFINE_ERROR(RankDeficiencyAmbiguous);
FRAMECAST_DEFINE_ERROR(DegenerateLocalBounds);
FRAMECAST_DEFINE_ERROR(LocalNotUniformFrame);
FRAMECAST_DEFINE_ERROR(SupportViolation);
FRAMECAST_DEFINE_ERROR(ShiftOutOfDomain);
FRAMECAST_DEFINE_ERROR(TruncationTooSmall);
FRAMECAST_DEFINE_ERROR(ParseError);
FRAMECAST_DEFINE_ERROR(IoError);

#undef FRAMECAST_DEFINE_ERROR

}  // namespace framecast
