#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ftile {

enum class ErrorKind {
  InvalidPolynomial,
  DimensionError,
  NotExpanding,
  EmbeddingFailure,
  ConfigError,
  NotCommutative,
  NotRootOfUnity,
  DegenerateSystem,
  OverflowAbort,
  TypeExplosion,
  DepthTooLarge,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can report it as structured JSON.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace ftile
