#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sartex {

enum class ErrorKind {
  Format,       // malformed file header, bad JSON, unknown kind tag
  Truncation,   // payload shorter than the header declares
  Io,           // cannot open / write a file
  Domain,       // calibration input outside the formula's domain
  Bounds,       // chip window outside the raster
  Spec,         // invalid QuantSpec / OffsetSpec / SceneSpec
  Input,        // inconsistent inputs (channel, dimensions, order, NaN)
  Quantization, // grey level outside the declared level count
  Degenerate,   // no valid pixel pairs for a GLCM
  Training,     // trainer could not produce a model
};

std::string_view to_string(ErrorKind kind);

/// Library error. `module` names the component that raised it so the CLI can
/// print module-qualified messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace sartex
