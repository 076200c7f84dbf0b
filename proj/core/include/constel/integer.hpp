#ifndef CONSTEL_INTEGER_HPP
#define CONSTEL_INTEGER_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "constel/common.hpp"

namespace constel {

enum class Primality { composite, prime, probable_prime };

// Deterministic Miller-Rabin below 2^64 (fixed 12-witness set, valid for all
// n < 3.3e24).
bool is_prime_u64(std::uint64_t n) noexcept;

// Above 2^64 the answer is a 68-round strong-pseudoprime test with bases drawn
// from a fixed, documented seed (error probability below 2^-128); callers that
// report results must surface the probable_prime flag.
Primality classify_prime(const Int& n);
bool is_prime(const Int& n);

// Seed for the probable-prime bases. Default is fixed so runs reproduce; the
// CLI exposes it as --seed.
std::uint64_t probable_prime_seed();
void set_probable_prime_seed(std::uint64_t seed);

// Unique residue class modulo the product of all input moduli.  Moduli must be
// pairwise coprime; the error names the offending pair.  An empty list yields
// the identity constraint 0 (mod 1).
ResidueConstraint crt_combine(const std::vector<ResidueConstraint>& constraints);

// Ascending primes <= n.  Segmented sieve: working memory O(sqrt(n) + segment).
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);
void for_each_prime_up_to(std::uint64_t n,
                          const std::function<void(std::uint64_t)>& fn);

// Z_m^* = { x : 1 <= x < m, gcd(x, m) = 1 }.  Z_1^* is empty: there is no
// 1 <= x < 1.  (phi(1) = 1 by convention; the m = 1 mismatch is deliberate and
// m = 1 is excluded from witness searches.)
bool in_Zm_star(const Int& x, const Int& m);

struct FactorOptions {
  std::uint64_t trial_bound = 100000;      // trial division by primes <= this
  std::uint64_t rho_iteration_budget = 30000000;  // Pollard-Brent steps
};

// Prime factorisation (ascending), empty for n = 1.  Throws
// factorization_too_hard once the rho budget is exhausted.
std::vector<std::pair<Int, unsigned>> factorize(const Int& n,
                                                const FactorOptions& opts = {});

Int euler_phi(const Int& n, const FactorOptions& opts = {});

// Exact floor square root for u64.
std::uint64_t isqrt_u64(std::uint64_t n) noexcept;

}  // namespace constel

#endif
