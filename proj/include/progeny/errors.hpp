#pragma once

#include <stdexcept>
#include <string>

namespace gw {

// Base for every domain error thrown by the library. The CLI maps these to
// exit code 2; malformed input (ParseError) maps to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

// exact series ring
struct DivisionByNonUnit : Error {
    using Error::Error;
};
struct CompositionNeedsZeroConstant : Error {
    using Error::Error;
};
struct NotInvertible : Error {
    using Error::Error;
};
struct PowNeedsUnitConstant : Error {
    using Error::Error;
};
struct ExpNeedsZeroConstant : Error {
    using Error::Error;
};
struct InsufficientOrder : Error {
    using Error::Error;
};

// distribution parameters / sampling
struct InvalidParams : Error {
    using Error::Error;
};
struct SamplerOverflow : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct InsufficientSamples : Error {
    using Error::Error;
};

// branching / tilting
struct SupercriticalOffspring : Error {
    using Error::Error;
};
struct TiltOutOfRange : Error {
    using Error::Error;
};
struct SupercriticalTilt : Error {
    using Error::Error;
};

} // namespace gw
