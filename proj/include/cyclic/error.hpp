#pragma once

#include <stdexcept>
#include <string>

namespace cyclic {

enum class Errc {
  invalid_argument,
  duplicate_points,
  not_rational,
  internal_invariant_violation,
  missing_q,
  dimension_mismatch,
  too_large,
  scale_too_large,
  schema_mismatch,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised for states that valid data can never produce.
[[noreturn]] inline void invariant_failure(const std::string& what) {
  throw Error(Errc::internal_invariant_violation, what);
}

}  // namespace cyclic
