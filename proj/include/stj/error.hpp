#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stj {

enum class Errc {
  // validation
  NonMonotone,
  JumpOutOfWindow,
  DuplicateJump,
  NonPositiveJump,
  InvalidBreakpoints,
  OutOfWindow,
  OutOfRange,
  OverlappingIntervals,
  InvalidArgument,
  WindowTooSmall,
  EmptyFamily,
  MissingTailBound,
  IoError,
  ParseError,
  // numeric
  QuadratureFailure,
  NoLimit,
  DegenerateDenominator,
  NotRegulated,
  NotUniform,
  ReconstructionError,
  IllConditioned,
  BranchViolation,
  NotDecomposable,
  NoRightLimit,
  ZeroNearJump,
  LogSumDiverges,
  NumericalInconsistency,
};

std::string_view errc_name(Errc c) noexcept;

// true for input/precondition problems, false for numerical failures
bool is_validation(Errc c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace stj
