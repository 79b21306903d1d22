#pragma once

#include <stdexcept>
#include <string>

namespace pmp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, 0 when not applicable.
struct ParseError : Error {
  ParseError(int line, const std::string& reason)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + reason
                       : reason),
        line(line) {}
  int line;
};

// Well-formed input that violates a model invariant.
struct ValidationError : Error {
  using Error::Error;
};

// A file could not be read or written.
struct IoError : Error {
  using Error::Error;
};

struct OutOfBounds : Error {
  using Error::Error;
};

struct NoPathError : Error {
  using Error::Error;
};

struct DegenerateSequence : Error {
  using Error::Error;
};

struct EmptyCandidates : Error {
  using Error::Error;
};

struct SelectionMismatch : Error {
  using Error::Error;
};

struct GenerationStuck : Error {
  using Error::Error;
};

}  // namespace pmp
