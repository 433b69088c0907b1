#pragma once

#include <stdexcept>

namespace sideband {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitianError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };
struct NotPsdError : Error { using Error::Error; };
struct IndexOutOfRangeError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct EmptyKeepSetError : Error { using Error::Error; };
struct UnknownSlotError : Error { using Error::Error; };
struct EdgeSupportError : Error { using Error::Error; };
struct OffResonanceError : Error { using Error::Error; };
struct NormDriftError : Error { using Error::Error; };
struct NotXStateError : Error { using Error::Error; };
struct WeightTooSmallError : Error { using Error::Error; };
struct FitDegenerateError : Error { using Error::Error; };
struct NoInteriorMaxError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace sideband
