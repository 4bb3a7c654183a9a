#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace randlab {

// Base class for every error the library raises. Checked-inequality
// failures are never exceptions: they are ordinary report data. Exceptions
// are reserved for unusable inputs (parse problems, violated preconditions),
// which the CLI maps to exit code 2.
class randlab_error : public std::runtime_error {
 public:
  explicit randlab_error(const std::string& what) : std::runtime_error(what) {}
};

class parse_error : public randlab_error {
 public:
  explicit parse_error(const std::string& what) : randlab_error("parse error: " + what) {}
};

// Precondition violations carry a stable machine-readable code, e.g.
// "depth-exceeded", "zero-condition", "non-monotone-table",
// "epsilon-out-of-range", "negative-value", "g-not-monotone", "null-atom",
// "no-valid-index", "null-condition", "precondition-violated".
class precondition_error : public randlab_error {
 public:
  precondition_error(std::string code, const std::string& what)
      : randlab_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace randlab
