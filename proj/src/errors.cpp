#include "ftile/errors.hpp"

namespace ftile {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::InvalidPolynomial: return "InvalidPolynomial";
  case ErrorKind::DimensionError: return "DimensionError";
  case ErrorKind::NotExpanding: return "NotExpanding";
  case ErrorKind::EmbeddingFailure: return "EmbeddingFailure";
  case ErrorKind::ConfigError: return "ConfigError";
  case ErrorKind::NotCommutative: return "NotCommutative";
  case ErrorKind::NotRootOfUnity: return "NotRootOfUnity";
  case ErrorKind::DegenerateSystem: return "DegenerateSystem";
  case ErrorKind::OverflowAbort: return "OverflowAbort";
  case ErrorKind::TypeExplosion: return "TypeExplosion";
  case ErrorKind::DepthTooLarge: return "DepthTooLarge";
  case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

} // namespace ftile
