#pragma once

#include <stdexcept>
#include <string>

namespace symfi {

/// Base class for all symfi errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad dimensions, pairings, labels, config files.
/// Maps to CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: indefinite matrices, degenerate kernels.
/// Maps to CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// File system failure. Maps to CLI exit code 4.
class IoError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NotSkewSymmetric : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateKernel : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonPositiveEigenvalue : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DimensionOdd : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DimensionMismatch : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class InvalidPairing : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MissingNominal : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ZeroNominal : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class OutputDimTooHigh : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class CoefficientsNotLoaded : public ConfigError {
public:
    using ConfigError::ConfigError;
};

} // namespace symfi
