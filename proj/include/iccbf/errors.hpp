#pragma once

#include <stdexcept>
#include <string>

namespace iccbf {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

// Non-finite scalar argument (NaN/Inf).
class NonFinite : public Error {
public:
    using Error::Error;
};

// Non-finite state vector handed to a cascade evaluation.
class NonFiniteState : public Error {
public:
    using Error::Error;
};

class EmptyGrid : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InputOutOfBounds : public Error {
public:
    using Error::Error;
};

class ResolutionTooSmall : public Error {
public:
    using Error::Error;
};

class LevelOutOfRange : public Error {
public:
    using Error::Error;
};

class EmptyStateBox : public Error {
public:
    using Error::Error;
};

// No admissible input with psi >= 0 at the queried state.
class InfeasibleAtState : public Error {
public:
    using Error::Error;
};

// No certified candidate whose inner safe set contains the current state.
class NoAdmissibleCandidate : public Error {
public:
    using Error::Error;
};

class EmptyLog : public Error {
public:
    using Error::Error;
};

// Scenario file / CLI configuration problem; message carries the field path.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace iccbf
