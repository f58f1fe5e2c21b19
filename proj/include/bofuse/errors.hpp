#pragma once

#include <stdexcept>
#include <string>

namespace bofuse {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct LengthMismatchError : Error {
    using Error::Error;
};
struct NonFiniteFeatureError : Error {
    using Error::Error;
};
struct MissingClassError : Error {
    using Error::Error;
};
struct TooFewSamplesError : Error {
    using Error::Error;
};
struct EmptyDatasetError : Error {
    using Error::Error;
};
struct DivergedTrainingError : Error {
    using Error::Error;
};
struct DimMismatchError : Error {
    using Error::Error;
};
struct InvalidNoiseError : Error {
    using Error::Error;
};
struct ModeMismatchError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace bofuse
