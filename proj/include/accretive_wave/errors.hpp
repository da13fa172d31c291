#pragma once

#include <stdexcept>
#include <string>

namespace awave {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the mathematically meaningful range.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inverse transform produced a non-negligible imaginary residue.
class SymmetryViolation : public Error {
public:
    using Error::Error;
};

class UnsupportedDim : public Error {
public:
    using Error::Error;
};

/// Duhamel quadrature nodes are not a uniform partition with odd count.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Picard iteration failed to contract on the requested slab.
class NonContraction : public Error {
public:
    using Error::Error;
};

/// Negative-order homogeneous seminorm requested on a field with nonzero mean.
class MeanNotZero : public Error {
public:
    using Error::Error;
};

/// Gagliardo-Nirenberg exponents do not satisfy the scaling relation.
class ExponentMismatch : public Error {
public:
    using Error::Error;
};

/// Solver parameters fail the admissibility conditions and no override was given.
class NotAdmissible : public Error {
public:
    using Error::Error;
};

/// Invalid or malformed run configuration. `key()` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : "config key '" + key + "': " + what),
          key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace awave
