#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ruler {

// Root of everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file. record is the 1-based record/line index, 0 when the
// error is not tied to a specific record.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t record_index = 0)
      : Error(record_index
                  ? msg + " (record " + std::to_string(record_index) + ")"
                  : msg),
        record(record_index) {}
  std::size_t record;
};

// Structurally valid input missing a required field.
struct SchemaError : Error {
  SchemaError(const std::string& field, std::size_t record_index = 0)
      : Error("missing required field \"" + field + "\"" +
              (record_index ? " (record " + std::to_string(record_index) + ")"
                            : "")),
        missing_field(field),
        record(record_index) {}
  std::string missing_field;
  std::size_t record;
};

struct IoError : Error {
  using Error::Error;
};

// A template's placeholder set does not match its rule.
struct MalformedTemplate : Error {
  using Error::Error;
};

// bind() called for a rule whose applicability predicate is false.
struct NotApplicable : Error {
  using Error::Error;
};

// A bound unit index no longer resolves against the running text of a
// composition chain (a prior transform changed the unit count).
struct CompositionConflict : Error {
  using Error::Error;
};

struct EmptyDataset : Error {
  using Error::Error;
};

}  // namespace ruler
