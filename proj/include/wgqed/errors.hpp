#pragma once

#include <stdexcept>
#include <string>

namespace wgqed {

// Base of every error raised by the library. The CLI maps subclasses onto
// process exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The two dressed eigenvalues of an excitation block coincide (exceptional
// point) or the bi-orthogonal pairing of an eigenvector vanishes.
class DegenerateSpectrum : public Error {
public:
    using Error::Error;
};

class NonFiniteResult : public Error {
public:
    using Error::Error;
};

// Input outside the domain of a formula (non-positive momentum, malformed grid).
class DomainError : public Error {
public:
    using Error::Error;
};

// Asymptotic g2 normalization requested where the uncorrelated background is
// numerically zero; use box normalization instead.
class VanishingBackground : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class SchemaMismatch : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace wgqed
