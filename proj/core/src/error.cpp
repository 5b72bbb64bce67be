#include "himap/error.hpp"

namespace himap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::config: return "config";
    case ErrorKind::data: return "data";
    case ErrorKind::weight: return "weight";
    case ErrorKind::linalg: return "linalg";
    case ErrorKind::bandwidth: return "bandwidth";
    case ErrorKind::resource: return "resource";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace himap
