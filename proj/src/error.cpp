#include "heisenclone/error.hpp"

namespace heisenclone {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::resource: return "resource";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::parse: return "parse";
    case ErrorKind::construction: return "construction";
  }
  return "unknown";
}

}  // namespace heisenclone
