#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace storedlight {

/// Base class for all errors raised by the library. `kind()` is a short
/// stable tag used by the CLI when printing machine-parsable error lines.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept = 0;
};

/// A parameter lies outside the domain of the requested operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// A truncation, photon-number limit or memory budget would be exceeded.
class CapacityError : public Error {
public:
    CapacityError(const std::string& what, std::size_t required)
        : Error(what), required_(required) {}
    const char* kind() const noexcept override { return "capacity"; }
    /// Smallest value of the exceeded limit that would make the call succeed.
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

class NormalizationError : public Error {
public:
    NormalizationError(const std::string& what, double measured_norm)
        : Error(what), measured_norm_(measured_norm) {}
    const char* kind() const noexcept override { return "normalization"; }
    double measured_norm() const noexcept { return measured_norm_; }

private:
    double measured_norm_;
};

/// Ratio with a vanishing denominator (e.g. Fano factor at zero mean).
class UndefinedRatioError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "undefined-ratio"; }
};

/// Numerical basis/spectrum construction failed an exactness check.
class BasisError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "basis"; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "config"; }
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

} // namespace storedlight
