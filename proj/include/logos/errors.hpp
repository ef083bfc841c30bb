#pragma once

#include <stdexcept>
#include <string>

namespace logos {

// Malformed input text (bad JSON, wrong shapes). CLI exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, long line = -1, long column = -1)
      : std::runtime_error(msg), line(line), column(column) {}
  long line;
  long column;
};

// Well-formed input that violates a domain invariant (non-PSD matrix,
// norm defect, weight mismatch...). CLI exit code 3.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally unsupported input: rank-deficient reconstruction systems,
// graphs the valuation search cannot constrain. CLI exit code 4.
class UnsupportedStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace logos
