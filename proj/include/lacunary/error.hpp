#pragma once

#include <stdexcept>
#include <string>

namespace lacunary {

/// Base class for all errors raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class InvalidInput : public Error {
public:
  explicit InvalidInput(const std::string& what) : Error("invalid-input", what) {}
};

class UnsupportedRepresentation : public Error {
public:
  explicit UnsupportedRepresentation(const std::string& what)
      : Error("unsupported-representation", what) {}
};

class DegenerateFit : public Error {
public:
  DegenerateFit(const std::string& what, bool all_underflow)
      : Error("degenerate-fit", what), all_underflow_(all_underflow) {}

  /// True when every point was below the noise floor (the density is
  /// numerically uniform at every step).
  bool all_underflow() const noexcept { return all_underflow_; }

private:
  bool all_underflow_;
};

}  // namespace lacunary
