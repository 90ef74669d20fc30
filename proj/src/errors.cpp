#include "zakdd/errors.hpp"

namespace zakdd {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::EvenDimension: return "EvenDimension";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NonPositive: return "NonPositive";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::ZeroSignal: return "ZeroSignal";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidAlpha: return "InvalidAlpha";
    case Errc::BadModulus: return "BadModulus";
    case Errc::EmptyTrialSet: return "EmptyTrialSet";
    case Errc::InvalidConstellation: return "InvalidConstellation";
    case Errc::NoInverse: return "NoInverse";
    case Errc::EmptyProfile: return "EmptyProfile";
    case Errc::SpreadTooLarge: return "SpreadTooLarge";
    case Errc::BadPdr: return "BadPdr";
    case Errc::RegionAliased: return "RegionAliased";
    case Errc::SingularChannel: return "SingularChannel";
    case Errc::EmptyDictionary: return "EmptyDictionary";
    case Errc::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

bool is_numeric_error(Errc code) { return code == Errc::SingularChannel; }

}  // namespace zakdd
