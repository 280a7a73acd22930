#include "thermoflow/errors.hpp"

namespace tmf {

const char* err_name(Err e) {
  switch (e) {
    case Err::StrandedState: return "StrandedState";
    case Err::DuplicateState: return "DuplicateState";
    case Err::NotIrreducible: return "NotIrreducible";
    case Err::NotAperiodic: return "NotAperiodic";
    case Err::WindowMismatch: return "WindowMismatch";
    case Err::IncompatibleRecoding: return "IncompatibleRecoding";
    case Err::NonpositiveDenominator: return "NonpositiveDenominator";
    case Err::EmptyShift: return "EmptyShift";
    case Err::NonUniqueEquilibrium: return "NonUniqueEquilibrium";
    case Err::NonpositiveRoof: return "NonpositiveRoof";
    case Err::NonpositiveRate: return "NonpositiveRate";
    case Err::NotHyperbolicAtHorizon: return "NotHyperbolicAtHorizon";
    case Err::WindowExplosion: return "WindowExplosion";
    case Err::DeltaTooLarge: return "DeltaTooLarge";
    case Err::HorizonTooShort: return "HorizonTooShort";
    case Err::RoofNotFiberConstant: return "RoofNotFiberConstant";
    case Err::NotFiniteToOne: return "NotFiniteToOne";
    case Err::ParseError: return "ParseError";
    case Err::ValidationError: return "ValidationError";
    case Err::ToleranceFailure: return "ToleranceFailure";
  }
  return "UnknownError";
}

int err_exit_code(Err e) { return e == Err::ToleranceFailure ? 2 : 1; }

}  // namespace tmf
