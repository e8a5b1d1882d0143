#pragma once

#include <stdexcept>
#include <string>

namespace gridflow {

// Error categories, used by the CLI to pick exit codes.
enum class ErrorKind {
    Syntax,        // malformed input file
    UnknownId,     // reference to an undeclared vertex/edge
    ModeMismatch,  // section present/absent contradicts coupling/boundary mode
    Invariant,     // data violates a model invariant
    Usage,         // bad function arguments (dimension mismatch, bad parameter)
    Numeric,       // non-finite values during iteration
    Io             // filesystem failure
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace gridflow
