#include "sartex/error.hpp"

namespace sartex {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "format error";
    case ErrorKind::Truncation: return "truncation error";
    case ErrorKind::Io: return "I/O error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Bounds: return "bounds error";
    case ErrorKind::Spec: return "spec error";
    case ErrorKind::Input: return "input error";
    case ErrorKind::Quantization: return "quantization error";
    case ErrorKind::Degenerate: return "degenerate-input error";
    case ErrorKind::Training: return "training error";
  }
  return "error";
}

}  // namespace sartex
