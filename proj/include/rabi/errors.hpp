#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

enum class Errc {
  InvalidParams,
  DegenerateInversion,
  CutoffTooSmall,
  NotConverged,
  IndexOutOfRange,
  RabiLimit,
  PoleCollision,
  SingularSystem,
  Degenerate,
  NoSolutions,
  VerificationFailed,
  BranchLost,
  NotVerified,
  InvalidIndex,
  NearDegeneracy,
  NoLocus,
  InvalidCase,
  UndefinedRegime,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace rabi
