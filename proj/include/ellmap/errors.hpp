#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ellmap {

enum class Errc {
  InvalidInput,
  NotPositiveDefinite,
  NoConvergence,
  SingularTransform,
  ZeroDirection,
  MaxCutsReached,
  UnsupportedBodyVariant,
  NoFeasiblePoint,
};

std::string_view to_string(Errc code);

/// Single exception type for the library; `code()` tells callers (and the CLI
/// exit-code mapping) which failure occurred.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ellmap
