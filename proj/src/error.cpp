#include "stj/error.hpp"

namespace stj {

std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::NonMonotone: return "NonMonotone";
    case Errc::JumpOutOfWindow: return "JumpOutOfWindow";
    case Errc::DuplicateJump: return "DuplicateJump";
    case Errc::NonPositiveJump: return "NonPositiveJump";
    case Errc::InvalidBreakpoints: return "InvalidBreakpoints";
    case Errc::OutOfWindow: return "OutOfWindow";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::OverlappingIntervals: return "OverlappingIntervals";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::WindowTooSmall: return "WindowTooSmall";
    case Errc::EmptyFamily: return "EmptyFamily";
    case Errc::MissingTailBound: return "MissingTailBound";
    case Errc::IoError: return "IoError";
    case Errc::ParseError: return "ParseError";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::NoLimit: return "NoLimit";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::NotRegulated: return "NotRegulated";
    case Errc::NotUniform: return "NotUniform";
    case Errc::ReconstructionError: return "ReconstructionError";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::BranchViolation: return "BranchViolation";
    case Errc::NotDecomposable: return "NotDecomposable";
    case Errc::NoRightLimit: return "NoRightLimit";
    case Errc::ZeroNearJump: return "ZeroNearJump";
    case Errc::LogSumDiverges: return "LogSumDiverges";
    case Errc::NumericalInconsistency: return "NumericalInconsistency";
  }
  return "Unknown";
}

bool is_validation(Errc c) noexcept {
  return static_cast<int>(c) <= static_cast<int>(Errc::ParseError);
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace stj
