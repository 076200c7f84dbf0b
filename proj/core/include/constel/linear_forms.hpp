#ifndef CONSTEL_LINEAR_FORMS_HPP
#define CONSTEL_LINEAR_FORMS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "constel/common.hpp"

namespace constel {

// f(x_1..x_k) = coeffs . x + constant
struct AffineForm {
  std::vector<Int> coeffs;
  Int constant;

  bool operator==(const AffineForm&) const = default;
};

enum class PointDomain { positive_points, all_integer_points };

// A system of s non-constant affine-linear forms sharing arity k.
// Construction rejects constant forms, duplicate forms and mixed arities;
// forms that are rational multiples of one another are kept but reported
// through warnings().
class LinearSystem {
 public:
  explicit LinearSystem(std::vector<AffineForm> forms,
                        PointDomain domain = PointDomain::positive_points);

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return forms_.size(); }
  const std::vector<AffineForm>& forms() const { return forms_; }
  PointDomain domain() const { return domain_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  bool all_coeffs_nonnegative() const { return all_nonneg_; }

 private:
  std::vector<AffineForm> forms_;
  std::size_t arity_;
  PointDomain domain_;
  bool all_nonneg_;
  std::vector<std::string> warnings_;
};

// Integer polynomial in one variable, coefficients stored low to high.
// degree >= 1 and positive leading coefficient are enforced.
class UniPoly {
 public:
  explicit UniPoly(std::vector<Int> coeffs_low_to_high);

  unsigned degree() const { return static_cast<unsigned>(coeffs_.size() - 1); }
  const std::vector<Int>& coeffs() const { return coeffs_; }
  Int eval(const Int& x) const;
  Int content() const;  // gcd of all coefficients

  bool operator==(const UniPoly&) const = default;

 private:
  std::vector<Int> coeffs_;
};

class UniPolySystem {
 public:
  explicit UniPolySystem(std::vector<UniPoly> polys);

  std::size_t size() const { return polys_.size(); }
  const std::vector<UniPoly>& polys() const { return polys_; }
  std::uint64_t degree_sum() const;

 private:
  std::vector<UniPoly> polys_;
};

using System = std::variant<LinearSystem, UniPolySystem>;

enum class Verdict { admissible, fixed_divisor };

struct AdmissibilityReport {
  Verdict verdict = Verdict::admissible;
  std::optional<std::uint64_t> obstruction_prime;
  std::map<std::uint64_t, Int> local_counts;  // p -> v(p)
  std::vector<std::uint64_t> checked_primes;
  // Which primes were checked and why that set suffices; also names the
  // admissibility definition in use (fixed-divisor form).
  std::string justification;
  std::vector<std::string> warnings;

  bool admissible() const { return verdict == Verdict::admissible; }
};

std::vector<Int> evaluate(const LinearSystem& sys, const std::vector<Int>& point);
std::vector<Int> evaluate(const UniPolySystem& sys, const Int& x);
std::vector<Int> evaluate(const System& sys, const std::vector<Int>& point);

// v(p): number of points of {0..p-1}^k at which the product of the form
// values vanishes mod p.  Exhaustive when p^k fits the budget, otherwise
// inclusion-exclusion over the forms' zero hyperplanes; both are exact.
Int local_count(const LinearSystem& sys, std::uint64_t p,
                std::uint64_t enumeration_budget = 1000000);
Int local_count_by_enumeration(const LinearSystem& sys, std::uint64_t p);
Int local_count_by_inclusion_exclusion(const LinearSystem& sys, std::uint64_t p);

// Admissible iff no prime is a fixed divisor of the product of form values.
// Only primes p <= s can obstruct (a product of s forms, none identically
// zero mod p, is a nonzero polynomial of degree s < p and cannot vanish on
// all of F_p^k); forms whose content exceeds 1 force their content's primes.
AdmissibilityReport is_admissible(const LinearSystem& sys);

std::uint64_t poly_local_count(const UniPolySystem& sys, std::uint64_t p);
AdmissibilityReport poly_is_admissible(const UniPolySystem& sys,
                                       std::uint64_t prime_bound = 2);

// Line-oriented system description (see README for the grammar):
//   linear <domain-flag>      domain-flag: 1 = positive orthant, 0 = Z^k
//   a_1 ... a_k b             one line per form
// or
//   poly
//   c_d ... c_1 c_0           one line per polynomial, highest degree first
// '#' starts a comment; blank lines are ignored.
System parse_system(std::string_view text);
std::string serialize_system(const System& sys);

// FNV-1a over the canonical serialization; stable across runs.
std::string system_hash(const System& sys);

inline std::size_t system_form_count(const System& s) {
  return std::visit([](const auto& v) { return v.size(); }, s);
}

}  // namespace constel

#endif
