#pragma once

#include <stdexcept>
#include <string>

namespace extremalflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, profiles, or configuration values.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A closed-form object was evaluated outside its domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A curve cannot be represented in the requested chart.
class ChartError : public Error {
public:
  using Error::Error;
};

/// The discrete solution left the admissible range (|u|, |u_x| or rho out of bounds).
class BlowupError : public Error {
public:
  using Error::Error;
};

/// Two curves coincide over a sub-arc, so intersections are not isolated.
class Unresolvable : public Error {
public:
  using Error::Error;
};

/// A sweep produced a classification that is not monotone in sigma.
class MonotonicityViolation : public Error {
public:
  using Error::Error;
};

} // namespace extremalflow
