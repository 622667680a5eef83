#pragma once

#include <stdexcept>
#include <string>

namespace adiabound {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (bad N, t outside [0, t_f], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed input file (tabulated schedule, matrix pair, trajectory CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

// Base of failures caused by the numerics rather than by the caller.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DegenerateGroundState : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A quantity that must be real or nonnegative came out with residue above tolerance.
class NumericalInconsistency : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepSizeTooCoarse : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// The necessary run time is +infinity (zero driving uncertainty, positive numerator).
class VacuouslyUnbounded : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BracketNotFound : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace adiabound
