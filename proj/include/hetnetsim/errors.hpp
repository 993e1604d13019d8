#pragma once

#include <stdexcept>
#include <string>

namespace hetnetsim {

// Invalid fuzzy/hysteresis configuration detected at evaluation time.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of a pure decision function was violated by the caller.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class UnknownCellError : public std::out_of_range {
 public:
  explicit UnknownCellError(const std::string& cell)
      : std::out_of_range("unknown cell '" + cell + "'"), cell_(cell) {}
  const std::string& cell() const noexcept { return cell_; }

 private:
  std::string cell_;
};

}  // namespace hetnetsim
