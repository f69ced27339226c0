#pragma once

#include <stdexcept>
#include <string>

namespace dgsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct DecompositionError : Error { using Error::Error; };
struct BranchError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
// an admissibility failure detected mid-computation (negative determinant, bad conditional)
struct NumericalError : Error { using Error::Error; };
struct SizeLimitError : Error { using Error::Error; };
struct BudgetError : Error { using Error::Error; };

}  // namespace dgsim
