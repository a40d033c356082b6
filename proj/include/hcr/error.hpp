#ifndef HCR_ERROR_HPP
#define HCR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hcr {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (CSV, schema, model, generator config).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace hcr

#endif  // HCR_ERROR_HPP
