#pragma once

#include <stdexcept>
#include <string>

namespace fogplace {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration value is out of range (zero counts, nonpositive capacity,
// empty ranges, ...).
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// A node or entity was looked up but does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

// A device model was asked to operate outside its load range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inputs to an operation are mutually inconsistent (e.g. flows that do not
// match the placement they are supposed to realize).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// The brute-force oracle refuses instances larger than its enumeration cap.
class OracleScopeError : public Error {
 public:
  using Error::Error;
};

// Malformed scenario, workload or report document.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fogplace
