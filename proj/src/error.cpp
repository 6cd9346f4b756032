#include "vidshield/error.hpp"

namespace vidshield {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::UnsupportedColorspace: return "UnsupportedColorspace";
    case ErrorKind::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorKind::TruncatedFrame: return "TruncatedFrame";
    case ErrorKind::TruncatedPixels: return "TruncatedPixels";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InsufficientLabels: return "InsufficientLabels";
    case ErrorKind::LabelSetEmpty: return "LabelSetEmpty";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace vidshield
