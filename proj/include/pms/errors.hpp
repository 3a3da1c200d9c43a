#pragma once

#include <stdexcept>
#include <string>

namespace pms {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A structure expression references a component with no state assigned.
class MissingAtomError : public Error {
 public:
  using Error::Error;
};

/// A mission trajectory revives a failed component.
class InconsistentTrajectoryError : public Error {
 public:
  using Error::Error;
};

/// A level vector violates the m-recursion of its signature family.
class InfeasibleLevelError : public Error {
 public:
  using Error::Error;
};

/// Brute-force enumeration was requested beyond the slot guard.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

/// Evaluation time lies outside [0, mission end], or a boundary was
/// queried without a one-sided limit.
class OutOfMissionError : public Error {
 public:
  using Error::Error;
};

/// Conditioning on survival to a phase start whose survival probability is 0.
class UndefinedConditionalError : public Error {
 public:
  using Error::Error;
};

/// Exponential-style meta-type relaxation requested for a physical type
/// whose lifetime law is not history-free.
class RelaxationError : public Error {
 public:
  using Error::Error;
};

/// Spec file syntax error with source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what), line(line), column(column) {}
  int line;
  int column;
};

}  // namespace pms
