// Test-only oracles, deliberately written as plain brute force with no code
// shared with the library paths they check.
#ifndef CONSTEL_TESTS_ORACLES_HPP
#define CONSTEL_TESTS_ORACLES_HPP

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "constel/linear_forms.hpp"

namespace oracles {

using constel::AffineForm;
using constel::Int;
using constel::LinearSystem;

// Classic full-bitmap Eratosthenes sieve.
inline std::vector<char> sieve_bitmap(std::uint64_t n) {
  std::vector<char> is_prime(n + 1, 1);
  is_prime[0] = 0;
  if (n >= 1) is_prime[1] = 0;
  for (std::uint64_t i = 2; i * i <= n; ++i)
    if (is_prime[i])
      for (std::uint64_t j = i * i; j <= n; j += i) is_prime[j] = 0;
  return is_prime;
}

inline std::vector<std::uint64_t> sieve_primes(std::uint64_t n) {
  auto bm = sieve_bitmap(n);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i)
    if (bm[i]) out.push_back(i);
  return out;
}

inline bool trial_division_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Number of x <= beta with x and x+2 both prime.
inline std::uint64_t twin_count(std::uint64_t beta,
                                const std::vector<char>& bitmap) {
  std::uint64_t count = 0;
  for (std::uint64_t x = 2; x <= beta; ++x)
    if (bitmap[x] && bitmap[x + 2]) ++count;
  return count;
}

// Dickson-style admissibility oracle: for every n in 2..200 some point of
// {1..n}^k has product coprime to n.  Early exits keep both verdicts cheap.
inline bool brute_force_admissible(const LinearSystem& sys, int n_hi = 200) {
  const std::size_t k = sys.arity();
  const std::size_t s = sys.size();
  std::vector<std::vector<long long>> a(s, std::vector<long long>(k));
  std::vector<long long> b(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      a[i][j] = mpz_get_si(sys.forms()[i].coeffs[j].get_mpz_t());
    b[i] = mpz_get_si(sys.forms()[i].constant.get_mpz_t());
  }
  for (long long n = 2; n <= n_hi; ++n) {
    bool found = false;
    std::vector<long long> x(k, 1);
    for (;;) {
      long long prod = 1;
      for (std::size_t i = 0; i < s; ++i) {
        long long v = b[i];
        for (std::size_t j = 0; j < k; ++j) v += a[i][j] * x[j];
        prod *= v;
      }
      if (std::gcd(prod < 0 ? -prod : prod, n) == 1) {
        found = true;
        break;
      }
      std::size_t d = 0;
      while (d < k) {
        if (++x[d] <= n) break;
        x[d] = 1;
        ++d;
      }
      if (d == k) break;
    }
    if (!found) return false;
  }
  return true;
}

// Least witness by scanning the cube {1..m+10}^k outright.  All values must
// land below m, which caps each coordinate of a nonnegative-coefficient
// system at (m - 1 - constant) <= m + 9 for the |entries| <= 9 generators
// used here, so the cube contains every witness.
inline std::optional<std::vector<long long>> full_scan_witness(
    const LinearSystem& sys, long long m,
    std::optional<std::pair<long long, long long>> congruence = {}) {
  const std::size_t k = sys.arity();
  const std::size_t s = sys.size();
  const long long hi = m + 10;
  std::vector<long long> x(k, 1);
  if (m <= 2) return std::nullopt;
  for (;;) {
    bool ok = true;
    if (congruence) {
      auto [r, q] = *congruence;
      if (((x[0] % q) + q) % q != r) ok = false;
    }
    for (std::size_t i = 0; ok && i < s; ++i) {
      long long v = mpz_get_si(sys.forms()[i].constant.get_mpz_t());
      for (std::size_t j = 0; j < k; ++j)
        v += mpz_get_si(sys.forms()[i].coeffs[j].get_mpz_t()) * x[j];
      if (v <= 1 || v >= m || std::gcd(v, m) != 1) ok = false;
    }
    if (ok) return x;
    // Last coordinate fastest = lexicographic ascending.
    std::size_t d = k;
    bool advanced = false;
    while (d-- > 0) {
      if (x[d] < hi) {
        ++x[d];
        for (std::size_t l = d + 1; l < k; ++l) x[l] = 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) return std::nullopt;
  }
}

// Random system with s <= smax forms, k <= kmax variables, |entries| <= 9.
inline LinearSystem random_system(std::mt19937_64& rng, int smax = 4,
                                  int kmax = 3) {
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (;;) {
    const int s = static_cast<int>(rng() % smax) + 1;
    const int k = static_cast<int>(rng() % kmax) + 1;
    std::vector<AffineForm> forms;
    for (int i = 0; i < s; ++i) {
      AffineForm f;
      f.coeffs.resize(k);
      for (int j = 0; j < k; ++j) f.coeffs[j] = coeff(rng);
      f.constant = coeff(rng);
      forms.push_back(std::move(f));
    }
    try {
      return LinearSystem(std::move(forms));
    } catch (const constel::Error&) {
      // constant or duplicate form; roll again
    }
  }
}

// Random single-variable system a_i + b_i x with a_i != 0, b_i >= 1,
// gcd(a_i, b_i) = 1 and distinct forms.
inline LinearSystem random_dickson_system(std::mt19937_64& rng, int smax = 3) {
  std::uniform_int_distribution<int> adist(-9, 9);
  std::uniform_int_distribution<int> bdist(1, 9);
  for (;;) {
    const int s = static_cast<int>(rng() % smax) + 1;
    std::vector<AffineForm> forms;
    for (int i = 0; i < s; ++i) {
      int a = 0, b = 1;
      do {
        a = adist(rng);
        b = bdist(rng);
      } while (a == 0 || std::gcd(a < 0 ? -a : a, b) != 1);
      forms.push_back(AffineForm{{Int(b)}, Int(a)});
    }
    try {
      return LinearSystem(std::move(forms));
    } catch (const constel::Error&) {
    }
  }
}

}  // namespace oracles

#endif
