#pragma once

#include <stdexcept>
#include <string>

namespace ctxrl {

/// Root of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or network widths do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (non-scalar loss, detached PL estimate, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration or out-of-bounds context. Carries the offending field name.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  explicit ConfigError(const std::string& message) : Error(message) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Corrupt, truncated or mismatched file on disk.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Sampling from a buffer that holds nothing yet.
class NotReadyError : public Error {
 public:
  using Error::Error;
};

/// Non-finite state or loss. Aborts the episode or run.
class FaultError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxrl
