#pragma once

#include <optional>
#include <string>

#include "waldkit/errors.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) { return std::string(WALDKIT_FIXTURE_DIR) + "/" + name; }

// Kind of the Error thrown by fn, or nullopt if it returns normally.
template <class Fn>
std::optional<waldkit::ErrorKind> error_kind(Fn&& fn) {
  try {
    fn();
  } catch (const waldkit::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace testsupport
