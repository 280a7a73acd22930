#pragma once

#include <stdexcept>
#include <string>

namespace tmf {

enum class Err {
  StrandedState,
  DuplicateState,
  NotIrreducible,
  NotAperiodic,
  WindowMismatch,
  IncompatibleRecoding,
  NonpositiveDenominator,
  EmptyShift,
  NonUniqueEquilibrium,
  NonpositiveRoof,
  NonpositiveRate,
  NotHyperbolicAtHorizon,
  WindowExplosion,
  DeltaTooLarge,
  HorizonTooShort,
  RoofNotFiberConstant,
  NotFiniteToOne,
  ParseError,
  ValidationError,
  ToleranceFailure,
};

const char* err_name(Err e);

// 1 = input/validation/precondition failure, 2 = internal tolerance breach.
int err_exit_code(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace tmf
