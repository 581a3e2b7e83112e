#ifndef UNISPEC_CORE_HPP
#define UNISPEC_CORE_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace unispec {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kMaxDim = 64;

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonConvergence,
  DegenerateCombination,
  SpectrumAtMinusOne,
  ShiftOutOfRange,
  NotUnit,
  NotNormingVector,
  NotCommonEigenvector,
  InvalidAngles,
  ParseError,
  ValidationError,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::DegenerateCombination: return "DegenerateCombination";
    case ErrorCode::SpectrumAtMinusOne: return "SpectrumAtMinusOne";
    case ErrorCode::ShiftOutOfRange: return "ShiftOutOfRange";
    case ErrorCode::NotUnit: return "NotUnit";
    case ErrorCode::NotNormingVector: return "NotNormingVector";
    case ErrorCode::NotCommonEigenvector: return "NotCommonEigenvector";
    case ErrorCode::InvalidAngles: return "InvalidAngles";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical tolerances. Those that depend on the dimension take n.
namespace tol {
inline double sym(int n) { return 1e-12 * n; }
inline double unitary(int n) { return 1e-10 * n; }
inline double resid(int n) { return 1e-9 * n; }
inline double jacobi(double frobenius) { return 1e-13 * frobenius; }
inline constexpr double roundtrip = 1e-8;
inline constexpr double pi_gap = 1e-8;
inline constexpr double spec = 1e-10;
inline constexpr double cluster = 1e-8;
inline constexpr double sub = 1e-8;
inline constexpr double verdict = 1e-9;
inline constexpr double eq = 1e-7;
inline constexpr double unit_vector = 1e-10;
inline constexpr int max_sweeps = 60;
}  // namespace tol

}  // namespace unispec

#endif  // UNISPEC_CORE_HPP
