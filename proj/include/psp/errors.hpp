#pragma once

#include <stdexcept>
#include <string>

namespace psp {

// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual input (words, schedules, PSG files).
struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

// A query or precondition that is invalid regardless of the geometry
// (bad flag, color out of range, misuse of an operation).
struct InvariantError : Error {
  explicit InvariantError(const std::string& what) : Error(what) {}
};

// The finite stage at hand is too small to answer the query
// (missing exceptional point, no base point yet, search budget hit).
struct StageError : Error {
  explicit StageError(const std::string& what) : Error(what) {}
};

}  // namespace psp
