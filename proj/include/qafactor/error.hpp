#pragma once

#include <stdexcept>
#include <string>

namespace qaf {

enum class ErrorKind {
  Dimension,    // state / model size mismatch
  Size,         // problem too large for exhaustive enumeration
  Range,        // index or value out of its allowed range
  Parse,        // malformed input file
  Synthesis,    // penalty-model LP infeasible
  Composition,  // bad circuit graph (dangling port, duplicate coupling)
  Instability,  // numeric divergence in an integrator or energy check
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qaf
