#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qv {

using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

// Default tolerances shared across modules.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;          // eigenvalues in [-kPsdTol, 0) are numerical dust
inline constexpr double kCompletenessTol = 1e-12;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QV_DEFINE_ERROR(NAME)                          \
    class NAME : public Error {                        \
    public:                                            \
        using Error::Error;                            \
    }

QV_DEFINE_ERROR(NonSquareError);
QV_DEFINE_ERROR(NonHermitianError);
QV_DEFINE_ERROR(DimensionMismatchError);
QV_DEFINE_ERROR(DimensionOverflowError);
QV_DEFINE_ERROR(InvalidStateError);
QV_DEFINE_ERROR(InvalidSubsetSizeError);
QV_DEFINE_ERROR(OutOfRangeTError);
QV_DEFINE_ERROR(InvalidColorIndexError);
QV_DEFINE_ERROR(MissingRegisterError);
QV_DEFINE_ERROR(MalformedFileError);
QV_DEFINE_ERROR(UnsupportedMagicError);
QV_DEFINE_ERROR(ConstructionFailureError);

#undef QV_DEFINE_ERROR

}  // namespace qv
