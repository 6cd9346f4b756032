#pragma once

#include <stdexcept>
#include <string>

namespace vidshield {

enum class ErrorKind {
  MalformedHeader,
  UnsupportedColorspace,
  UnsupportedMaxval,
  TruncatedFrame,
  TruncatedPixels,
  InvalidSpec,
  InsufficientLabels,
  LabelSetEmpty,
  IoError,
};

const char* error_kind_name(ErrorKind kind);

// Carries a machine-readable kind alongside the message; the kind string is
// what the HTTP error envelope and CLI diagnostics expose.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vidshield
