#pragma once

#include <stdexcept>
#include <string>

namespace tropskel {

// Exit-code classes used by the CLI.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal arithmetic misuse (division by zero, field mismatch).
class MathError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tropskel
