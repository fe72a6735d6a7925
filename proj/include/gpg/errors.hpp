#pragma once

#include <stdexcept>
#include <string>

namespace gpg {

// Error codes shared by the library and the CLI.  The CLI maps these to
// machine-readable JSON, so the enum names are part of the output contract.
enum class Errc {
  InvalidConfig,
  InvalidSyllable,
  MixedAmbient,
  LimitExceeded,
  NodeLimitExceeded,
  InvalidFamily,
  OutOfBall,
  NotInStar,
  EmptyLink,
  NoOrthogonal,
  BudgetExceeded,
  EmptyRegion,
  PreconditionFailed,
  WindowViolation,
  NoSamples,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidSyllable: return "InvalidSyllable";
    case Errc::MixedAmbient: return "MixedAmbient";
    case Errc::LimitExceeded: return "LimitExceeded";
    case Errc::NodeLimitExceeded: return "NodeLimitExceeded";
    case Errc::InvalidFamily: return "InvalidFamily";
    case Errc::OutOfBall: return "OutOfBall";
    case Errc::NotInStar: return "NotInStar";
    case Errc::EmptyLink: return "EmptyLink";
    case Errc::NoOrthogonal: return "NoOrthogonal";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::WindowViolation: return "WindowViolation";
    case Errc::NoSamples: return "NoSamples";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace gpg
