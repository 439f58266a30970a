#pragma once

#include <stdexcept>
#include <string>

namespace relaxosc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter set violates one of its documented invariants. The message
/// names the violated invariant (e.g. "u_h < u_th").
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// The switch voltage never reaches the requested level before the time cap.
class NoCrossing : public Error {
public:
    using Error::Error;
};

/// r = 0 reached an operation that needs the two-capacitor coefficients.
class DegenerateResistance : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of a closed-form expression.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Explicit integration step exceeds the stability/accuracy guard.
class StepTooLarge : public Error {
public:
    using Error::Error;
};

class NonFiniteState : public Error {
public:
    using Error::Error;
};

class InsufficientSpikes : public Error {
public:
    using Error::Error;
};

/// Damped least squares could not find an acceptable step.
class SingularNormalEquations : public Error {
public:
    using Error::Error;
};

}  // namespace relaxosc
