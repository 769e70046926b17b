#pragma once

#include <stdexcept>
#include <string>

namespace bimod {

// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfBoundsError : Error { using Error::Error; };
struct DuplicateEdgeError : Error { using Error::Error; };
struct NonPositiveWeightError : Error { using Error::Error; };
struct PartitionMismatchError : Error { using Error::Error; };
struct DegenerateDensityError : Error { using Error::Error; };
struct TooLargeError : Error { using Error::Error; };
struct OddMergeRequestError : Error { using Error::Error; };
struct InfeasibleSpecError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct RaggedMatrixError : Error { using Error::Error; };
struct NegativeEntryError : Error { using Error::Error; };
struct UniverseMismatchError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace bimod
