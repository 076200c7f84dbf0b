#ifndef CONSTEL_COMMON_HPP
#define CONSTEL_COMMON_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace constel {

inline constexpr const char* VERSION = "0.1.0";

// Arbitrary-precision integer used by every construction operation.
using Int = mpz_class;

enum class Errc {
  non_coprime_moduli,
  factorization_too_hard,
  parse_error,
  validation_error,
  arity_mismatch,
  domain_violation,
  not_admissible,
  budget_exceeded,
  precondition_violated,
  non_coprime,
  underivable_box,
  overflow,
  inconclusive,
  usage_error,
};

const char* errc_name(Errc c);

// All hard failures surface as Error; domain outcomes (no witness, budget hit
// during counting) are ordinary result values, not exceptions.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  Error(Errc code, std::string message, long long detail)
      : std::runtime_error(std::move(message)), code_(code), detail_(detail) {}

  Errc code() const noexcept { return code_; }
  // Machine-readable payload: the offending modulus/row/prime, when one exists.
  std::optional<long long> detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::optional<long long> detail_;
};

[[noreturn]] inline void raise(Errc code, std::string message) {
  throw Error(code, std::move(message));
}
[[noreturn]] inline void raise(Errc code, std::string message, long long detail) {
  throw Error(code, std::move(message), detail);
}

struct NaturalRange {
  std::uint64_t lo = 1;
  std::uint64_t hi = 1;
};

inline void validate(const NaturalRange& r) {
  if (r.lo < 1 || r.hi < r.lo)
    raise(Errc::validation_error, "NaturalRange requires 1 <= lo <= hi");
}

struct ResidueConstraint {
  Int residue;  // 0 <= residue < modulus
  Int modulus;  // >= 1
};

inline void validate(const ResidueConstraint& c) {
  if (c.modulus < 1)
    raise(Errc::validation_error, "residue constraint needs modulus >= 1");
  if (c.residue < 0 || c.residue >= c.modulus)
    raise(Errc::validation_error, "residue must lie in [0, modulus)");
}

}  // namespace constel

#endif
