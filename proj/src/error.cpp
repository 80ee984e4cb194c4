#include "cyclic/error.hpp"

namespace cyclic {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::duplicate_points: return "DuplicatePoints";
    case Errc::not_rational: return "NotRational";
    case Errc::internal_invariant_violation: return "InternalInvariantViolation";
    case Errc::missing_q: return "MissingQ";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::too_large: return "TooLarge";
    case Errc::scale_too_large: return "ScaleTooLarge";
    case Errc::schema_mismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

}  // namespace cyclic
