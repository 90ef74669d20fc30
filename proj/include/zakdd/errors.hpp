#pragma once

#include <stdexcept>
#include <string>

namespace zakdd {

// Failure categories raised by validation and numerics. Configuration
// failures map to CLI exit code 2, numeric failures to exit code 3.
enum class Errc {
  EvenDimension,
  NotCoprime,
  NonPositive,
  GridMismatch,
  ZeroSignal,
  IndexOutOfRange,
  InvalidAlpha,
  BadModulus,
  EmptyTrialSet,
  InvalidConstellation,
  NoInverse,
  EmptyProfile,
  SpreadTooLarge,
  BadPdr,
  RegionAliased,
  SingularChannel,
  EmptyDictionary,
  BadConfig,
};

const char* errc_name(Errc code);

// SingularChannel is the only failure that can appear after a valid
// configuration started computing; everything else is a config error.
bool is_numeric_error(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace zakdd
