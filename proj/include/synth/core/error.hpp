#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synth {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed input file or wire payload (bad header, unknown enum tag, ...).
class FormatError : public Error {
  public:
    using Error::Error;
};

// Syntactically broken text; carries the byte offset where parsing stopped.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_ = 0;
};

// Well-formed data that violates a documented invariant.
class ValidationError : public Error {
  public:
    using Error::Error;
};

// Missing or inconsistent configuration (absent prior, bad corpus size, ...).
class ConfigError : public Error {
  public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

}  // namespace synth
