#pragma once

#include <stdexcept>
#include <string>

namespace immlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MultilinearityViolation : Error { using Error::Error; };
struct MissingAssignment : Error { using Error::Error; };
struct NotSyntacticMultilinear : Error { using Error::Error; };
struct DepthExceeded : Error { using Error::Error; };
struct BadDepth : Error { using Error::Error; };
struct CapExceeded : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct SupportLeak : Error { using Error::Error; };
struct PrimeDisagreement : Error { using Error::Error; };
struct OverlapError : Error { using Error::Error; };
struct ShapeError : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct TooManyParts : Error { using Error::Error; };
struct ThresholdUnsatisfiable : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };

}  // namespace immlab
