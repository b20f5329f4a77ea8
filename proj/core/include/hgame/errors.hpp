#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hgame {

// Invalid argument to a library call (empty dimension, lo > hi, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite input or iterate. `iteration` is -1 when not inside a loop.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, std::int64_t iteration = -1)
      : std::runtime_error(iteration >= 0 ? what + " (iteration " + std::to_string(iteration) + ")"
                                          : what),
        iteration_(iteration) {}

  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

// Requested operation is outside the supported parameter regime.
class UnsupportedCase : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Parameters or an experiment document failed validation; carries every offending field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> fields)
      : std::runtime_error(join(fields)), fields_(std::move(fields)) {}

  const std::vector<std::string>& fields() const noexcept { return fields_; }

 private:
  static std::string join(const std::vector<std::string>& fields) {
    std::string out = "validation failed:";
    for (const auto& f : fields) out += "\n  - " + f;
    return out;
  }

  std::vector<std::string> fields_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hgame
