#pragma once

#include <stdexcept>
#include <string>

namespace embedlens {

// Input violates a documented precondition (bad distribution, witness, shape).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested enumeration exceeds a configured desk-scale limit.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace embedlens
