#pragma once

#include <stdexcept>
#include <string>

namespace rvp {

// Base for all library errors; subclasses carry the failure category.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfBounds : Error {
    using Error::Error;
};
struct EmptyRegion : Error {
    using Error::Error;
};
struct InvalidKernelSpec : Error {
    using Error::Error;
};
struct InvalidBox : Error {
    using Error::Error;
};
struct DegenerateGrid : Error {
    using Error::Error;
};
struct BoxTooSmall : Error {
    using Error::Error;
};
struct UnnamedColor : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

struct BackendError : Error {
    int status = 0;
    explicit BackendError(const std::string& msg, int status_code = 0)
        : Error(msg), status(status_code) {}
};
struct BackendTimeout : BackendError {
    explicit BackendTimeout(const std::string& msg) : BackendError(msg) {}
};
struct DecodeError : BackendError {
    explicit DecodeError(const std::string& msg) : BackendError(msg) {}
};

}  // namespace rvp
