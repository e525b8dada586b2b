#pragma once

#include <stdexcept>
#include <string>

namespace coalnet {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural input rejected; the message names the first offending element.
struct ValidationError : Error {
  using Error::Error;
};

// A node id that does not exist in the network.
struct InvalidNode : Error {
  using Error::Error;
};

// A configuration value outside its legal range.
struct InvalidConfig : Error {
  using Error::Error;
};

// A workflow dependency graph that is not acyclic; the message lists one cycle.
struct CycleError : Error {
  using Error::Error;
};

// A numeric argument outside the domain of the function.
struct DomainError : Error {
  using Error::Error;
};

// An assignment that is not total or not capability-consistent.
struct IncompleteAssignment : Error {
  using Error::Error;
};

// Malformed or unknown content in a serialized document.
struct ParseError : Error {
  using Error::Error;
};

// Filesystem failure while reading or writing artifacts.
struct IoError : Error {
  using Error::Error;
};

}  // namespace coalnet
