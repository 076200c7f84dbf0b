#ifndef CONSTEL_LEMMAS_HPP
#define CONSTEL_LEMMAS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "constel/common.hpp"
#include "constel/integer.hpp"
#include "constel/linear_forms.hpp"

namespace constel {

// A positive x whose product of form values has no prime factor in
// shielded_primes; product_value is recomputed at validation time.
struct CoprimalityWitness {
  Int x;
  std::vector<std::uint64_t> shielded_primes;
  Int product_value;
};

// CRT construction pushing the least prime divisor of the product beyond C.
// Per prime p <= C the least residue avoiding the product's zeros is fixed
// (primes whose every residue works impose no constraint); the combined class
// uses the radical of the primes <= C as modulus, which is equivalent to the
// factorial modulus for coprimality and exponentially smaller.  C <= 200.
CoprimalityWitness lemma1_construct(const LinearSystem& single_var,
                                    std::uint64_t C);

// Least positive x with gcd(prod_i (a_i + r*b_i*x), m) = 1, for gcd(r, prod
// a_i) = 1.  Existence comes from the per-prime reduction; the returned x is
// minimal outright.
Int lemma2_construct(const LinearSystem& single_var, const Int& r, const Int& m,
                     const FactorOptions& factor_opts = {});

// Pigeonhole selection: values is s x (s+1) with at most one entry per row
// divisible by q; returns the least column free of q-divisible entries.
std::size_t select_coprime_column(const std::vector<std::vector<Int>>& values,
                                  const Int& q);

struct CrtIsoReport {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  bool ok = false;
  bool degenerate_unit_factor = false;  // a or b equals 1 (Z_1^* is empty)
  std::uint64_t card_a = 0;
  std::uint64_t card_b = 0;
  std::uint64_t card_ab = 0;
  std::uint64_t multiplicative_pairs_checked = 0;
  bool multiplicativity_exhaustive = false;
  std::string note;
};

// Enumerates the map (u, v) -> w with w = u (mod a), w = v (mod b) and
// verifies it is a multiplicative bijection Z_a^* x Z_b^* -> Z_ab^*.
// Requires gcd(a, b) = 1 and a, b <= 10^4.
CrtIsoReport crt_isomorphism_check(std::uint64_t a, std::uint64_t b);

}  // namespace constel

#endif
