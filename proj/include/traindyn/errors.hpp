#pragma once

#include <stdexcept>
#include <string>

namespace traindyn {

// Root of every error raised by the library. Callers that only want to report
// and exit can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed row or record in a trace file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Missing required column, inconsistent layer count, bad epoch ordering.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Value outside its admissible domain (non-finite signal, accuracy > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Not enough samples / scales / pairs to compute a quantity.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Input for which the quantity is undefined (constant signal, zero range).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Synthetic fixture failed its own post-construction check.
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace traindyn
