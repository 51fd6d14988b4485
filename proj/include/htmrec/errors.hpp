#pragma once

#include <stdexcept>
#include <string>

namespace htmrec {

// Base class for every error this library raises. The CLI maps these to
// exit code 2 and prints the message verbatim, so messages must name the
// offending file, field, or dimension.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when grid or image dimensions do not satisfy an operation's
// divisibility or equality requirements.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file (image header, manifest syntax, model file).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Syntactically valid input that violates a semantic rule (duplicate
// path, non-dense class ids, session outside {1,2}).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A split asks for more images than a class has in the chosen session.
class InsufficientImagesError : public Error {
 public:
  using Error::Error;
};

// Training was asked to fold an empty image collection.
class EmptyClassError : public Error {
 public:
  using Error::Error;
};

// Classification was asked to score against zero class maps.
class EmptyModelError : public Error {
 public:
  using Error::Error;
};

// Bad configuration value or unknown config key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace htmrec
