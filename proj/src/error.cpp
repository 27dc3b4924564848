#include "lpf/error.hpp"

namespace lpf {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::trivial_group: return "trivial-group";
    case ErrorKind::undefined_s: return "undefined-S";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::unsupported_q: return "unsupported-q";
  }
  return "unknown";
}

}  // namespace lpf
