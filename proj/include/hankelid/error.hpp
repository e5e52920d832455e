#pragma once

#include <stdexcept>
#include <string>

namespace hankelid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};

struct InvalidShape : Error {
    using Error::Error;
};

struct InvalidDepth : Error {
    using Error::Error;
};

struct NotContained : Error {
    using Error::Error;
};

struct NotObservable : Error {
    using Error::Error;
};

struct InvalidPerturbation : Error {
    using Error::Error;
};

struct InternalInvariantViolated : Error {
    using Error::Error;
};

struct IdentificationFailed : Error {
    using Error::Error;
};

struct FormatError : Error {
    using Error::Error;
};

}  // namespace hankelid
