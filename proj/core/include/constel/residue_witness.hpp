#ifndef CONSTEL_RESIDUE_WITNESS_HPP
#define CONSTEL_RESIDUE_WITNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "constel/common.hpp"
#include "constel/linear_forms.hpp"

namespace constel {

// One modulus worth of evidence: a point whose form values all exceed 1 and
// lie in Z_m^*.
struct WitnessCertificate {
  Int modulus;
  std::vector<Int> point;
  std::vector<Int> values;
  std::optional<ResidueConstraint> congruence;  // satisfied by point[0]
};

enum class WitnessStatus { found, no_witness, inconclusive };

struct WitnessOptions {
  std::optional<ResidueConstraint> congruence;
  // Mixed-sign systems search the cube {1..cap_multiplier*m}^k; systems with
  // all-nonnegative coefficients search the full feasible region instead and
  // never return inconclusive.
  std::uint64_t cap_multiplier = 10;
};

struct WitnessResult {
  WitnessStatus status = WitnessStatus::no_witness;
  std::optional<WitnessCertificate> certificate;
  bool exhaustive = false;  // a no_witness answer covers the whole region
  Int cap;                  // per-coordinate cap used when inconclusive
};

// Least witness (ascending lexicographic point order) for modulus m >= 2.
WitnessResult find_witness(const LinearSystem& sys, const Int& m,
                           const WitnessOptions& opts = {});

// Re-checks a certificate from scratch; shares no code with the search.
bool validate_witness(const LinearSystem& sys, const WitnessCertificate& cert);

struct CertifyOptions {
  WitnessOptions witness;
  unsigned workers = 1;
  std::uint64_t chunk = 2048;  // moduli per work unit (fixed for determinism)
};

// Bounded verification artifact: witnesses for every m in [2, horizon] except
// the listed failures; explicitly not a proof for m > horizon.
struct StrongAdmissibilityCertificate {
  std::string system_hash;
  std::uint64_t horizon = 0;
  std::uint64_t candidate_L = 2;  // (max failing) + 1, or 2 when none fail
  std::vector<std::uint64_t> failing;
  std::map<std::uint64_t, WitnessCertificate> witnesses;
  std::string caveat;
};

StrongAdmissibilityCertificate certify_strong_admissibility(
    const LinearSystem& sys, std::uint64_t horizon,
    const CertifyOptions& opts = {});

// Text format: three header lines (hash, horizon, candidate_L), then one line
// per modulus: "m y_1 ... y_k" or "m FAIL".  Bit-exact across runs.
std::string serialize_certificate(const StrongAdmissibilityCertificate& cert);

struct BandReport {
  bool ok = false;
  std::uint64_t band_lo = 0;
  std::uint64_t horizon = 0;
  ResidueConstraint congruence;
  std::uint64_t verified_count = 0;
  std::optional<std::uint64_t> counterexample_m;
  // Distinguishes an implementation bug / falsified congruence claim (witness
  // exists without the congruence) from a modulus with no witness at all.
  bool unconstrained_witness_exists = false;
};

// Asserts that every m in (band_lo, horizon] has a witness whose first
// coordinate satisfies the congruence.
BandReport verify_corollary_band(const LinearSystem& sys, std::uint64_t band_lo,
                                 std::uint64_t horizon,
                                 const ResidueConstraint& congruence,
                                 const CertifyOptions& opts = {});

// Homogeneous system A.X^T from a square matrix with no all-zero row.
LinearSystem homogeneous_system(const std::vector<std::vector<Int>>& matrix);

// Bounded check of the "good property" of A: strong admissibility of A.X^T.
StrongAdmissibilityCertificate good_property_check(
    const std::vector<std::vector<Int>>& matrix, std::uint64_t horizon,
    const CertifyOptions& opts = {});

struct FactorialFrameEntry {
  std::uint64_t n = 0;
  Int modulus;  // n!
  std::optional<Int> least_value;   // least a+bx > 1 in Z_{n!}^*, x >= 0
  bool least_value_prime = false;
  std::optional<Int> least_prime;   // least prime of that form in Z_{n!}^*
};

struct FactorialFrameReport {
  Int a;
  Int b;
  NaturalRange range;
  std::vector<FactorialFrameEntry> entries;
  std::string note;
};

// Purely empirical survey of the frames Z_{n!}^*; never asserts anything
// beyond the scanned range.
FactorialFrameReport factorial_frame_scan(const Int& a, const Int& b,
                                          NaturalRange n_range,
                                          std::uint64_t max_n_budget = 12);

}  // namespace constel

#endif
