#include "constel/integer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>

namespace constel {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::non_coprime_moduli: return "NonCoprimeModuli";
    case Errc::factorization_too_hard: return "FactorizationTooHard";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::domain_violation: return "DomainViolation";
    case Errc::not_admissible: return "NotAdmissible";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::non_coprime: return "NonCoprime";
    case Errc::underivable_box: return "UnderivableBox";
    case Errc::overflow: return "Overflow";
    case Errc::inconclusive: return "Inconclusive";
    case Errc::usage_error: return "UsageError";
  }
  return "Unknown";
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod_u64(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>((u128)a * b % m);
}

u64 powmod_u64(u64 base, u64 exp, u64 m) noexcept {
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

// Strong-pseudoprime test to base a; n odd, n > 2, a already reduced.
bool miller_rabin_round_u64(u64 n, u64 a, u64 d, unsigned s) noexcept {
  u64 x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

constexpr u64 DET_WITNESSES[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// 4^-68 < 2^-128 error bound for the probable-prime verdict.
constexpr unsigned BIG_MR_ROUNDS = 68;
constexpr u64 DEFAULT_PRIME_SEED = 0x9e3779b97f4a7c15ULL;

std::atomic<u64> g_prime_seed{DEFAULT_PRIME_SEED};

u64 splitmix64(u64& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  u64 z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t probable_prime_seed() { return g_prime_seed.load(); }
void set_probable_prime_seed(std::uint64_t seed) { g_prime_seed.store(seed); }

bool is_prime_u64(u64 n) noexcept {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : DET_WITNESSES) {
    if (!miller_rabin_round_u64(n, a % n, d, s)) return false;
  }
  return true;
}

Primality classify_prime(const Int& n) {
  if (n < 2) return Primality::composite;
  if (n.fits_ulong_p() || mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    u64 v = 0;
    if (n.fits_ulong_p()) {
      v = mpz_get_ui(n.get_mpz_t());
    } else {
      // 64-bit value that does not fit unsigned long on some ABIs; extract.
      Int lo = n & Int(0xffffffffu);
      Int hi = n >> 32;
      v = (static_cast<u64>(mpz_get_ui(hi.get_mpz_t())) << 32) |
          static_cast<u64>(mpz_get_ui(lo.get_mpz_t()));
    }
    return is_prime_u64(v) ? Primality::prime : Primality::composite;
  }

  // Big path: trial division by small primes, then fixed-seed strong rounds.
  static const std::vector<u64> small = primes_up_to(1000);
  for (u64 p : small) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::composite;
  }

  Int d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  u64 state = g_prime_seed.load();
  Int span = n - 3;  // bases in [2, n-2]
  for (unsigned round = 0; round < BIG_MR_ROUNDS; ++round) {
    u64 raw = splitmix64(state);
    Int a = Int(raw);
    a = a % span + 2;
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) continue;
    bool witness_of_compositeness = true;
    for (unsigned long i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        witness_of_compositeness = false;
        break;
      }
    }
    if (witness_of_compositeness) return Primality::composite;
  }
  return Primality::probable_prime;
}

bool is_prime(const Int& n) { return classify_prime(n) != Primality::composite; }

ResidueConstraint crt_combine(const std::vector<ResidueConstraint>& constraints) {
  for (const auto& c : constraints) validate(c);
  // Pairwise coprimality, reporting the offending pair.
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    for (std::size_t j = i + 1; j < constraints.size(); ++j) {
      Int g;
      mpz_gcd(g.get_mpz_t(), constraints[i].modulus.get_mpz_t(),
              constraints[j].modulus.get_mpz_t());
      if (g != 1) {
        std::ostringstream os;
        os << "moduli " << constraints[i].modulus << " and "
           << constraints[j].modulus << " share factor " << g;
        raise(Errc::non_coprime_moduli, os.str(),
              static_cast<long long>(i));
      }
    }
  }
  Int r = 0, M = 1;
  for (const auto& c : constraints) {
    if (c.modulus == 1) continue;
    // Solve x == r (mod M), x == c.residue (mod c.modulus).
    Int inv;
    Int Mm = M % c.modulus;
    if (mpz_invert(inv.get_mpz_t(), Mm.get_mpz_t(), c.modulus.get_mpz_t()) == 0)
      raise(Errc::non_coprime_moduli, "modulus not invertible");  // unreachable
    Int t = ((c.residue - r) % c.modulus * inv) % c.modulus;
    if (t < 0) t += c.modulus;
    r += M * t;
    M *= c.modulus;
  }
  return ResidueConstraint{r, M};
}

std::uint64_t isqrt_u64(u64 n) noexcept {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && (u128)r * r > n) --r;
  while ((u128)(r + 1) * (r + 1) <= n) ++r;
  return r;
}

void for_each_prime_up_to(u64 n, const std::function<void(u64)>& fn) {
  if (n < 2) return;
  const u64 root = isqrt_u64(n);

  // Base primes <= sqrt(n) by a plain sieve.
  std::vector<char> base(root + 1, 1);
  for (u64 i = 2; i * i <= root; ++i)
    if (base[i])
      for (u64 j = i * i; j <= root; j += i) base[j] = 0;

  std::vector<u64> base_primes;
  for (u64 i = 2; i <= root; ++i)
    if (base[i]) base_primes.push_back(i);

  constexpr u64 SEGMENT = 1u << 18;
  std::vector<char> seg(SEGMENT);
  for (u64 low = 2; low <= n; low += SEGMENT) {
    const u64 high = std::min(low + SEGMENT - 1, n);
    std::fill(seg.begin(), seg.begin() + (high - low + 1), 1);
    for (u64 p : base_primes) {
      if (p * p > high) break;
      u64 start = std::max(p * p, (low + p - 1) / p * p);
      for (u64 j = start; j <= high; j += p) seg[j - low] = 0;
    }
    for (u64 v = low; v <= high; ++v)
      if (seg[v - low]) fn(v);
  }
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  if (n >= 2) out.reserve(static_cast<std::size_t>(
      n > 10 ? 1.2 * n / std::log(static_cast<double>(n)) : 8));
  for_each_prime_up_to(n, [&](u64 p) { out.push_back(p); });
  return out;
}

bool in_Zm_star(const Int& x, const Int& m) {
  if (m < 1) raise(Errc::validation_error, "modulus must be >= 1");
  if (x < 1 || x >= m) return false;
  Int g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return g == 1;
}

namespace {

// Pollard-Brent rho; returns a nontrivial factor of odd composite n, or 0 when
// the step budget runs out.
Int pollard_brent(const Int& n, u64& budget, u64& rng_state) {
  if (mpz_divisible_ui_p(n.get_mpz_t(), 2)) return Int(2);
  while (budget > 0) {
    Int y = Int(splitmix64(rng_state)) % n;
    Int c = Int(splitmix64(rng_state)) % n;
    if (c == 0) c = 1;
    Int x, q = 1, g = 1, ys;
    u64 r = 1;
    const u64 batch = 128;
    while (g == 1 && budget > 0) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = (y * y + c) % n;
      u64 k = 0;
      while (k < r && g == 1 && budget > 0) {
        ys = y;
        u64 steps = std::min(batch, r - k);
        if (steps > budget) steps = budget;
        for (u64 i = 0; i < steps; ++i) {
          y = (y * y + c) % n;
          Int diff = x - y;
          if (diff < 0) diff = -diff;
          q = q * diff % n;
        }
        budget -= steps;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += steps;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time.
      g = 1;
      while (g == 1) {
        ys = (ys * ys + c) % n;
        Int diff = x - ys;
        if (diff < 0) diff = -diff;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g != n && g != 1) return g;
  }
  return Int(0);
}

void factor_rec(const Int& n, std::vector<Int>& out, u64& budget,
                u64& rng_state) {
  if (n == 1) return;
  if (classify_prime(n) != Primality::composite) {
    out.push_back(n);
    return;
  }
  Int f = pollard_brent(n, budget, rng_state);
  if (f == 0)
    raise(Errc::factorization_too_hard,
          "factoring budget exhausted on composite cofactor");
  factor_rec(f, out, budget, rng_state);
  factor_rec(n / f, out, budget, rng_state);
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factorize(const Int& n,
                                                const FactorOptions& opts) {
  if (n < 1) raise(Errc::validation_error, "factorize expects n >= 1");
  std::vector<std::pair<Int, unsigned>> result;
  if (n == 1) return result;

  Int rest = n;
  for_each_prime_up_to(opts.trial_bound, [&](u64 p) {
    if (rest == 1) return;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      }
      result.emplace_back(Int(p), e);
    }
  });

  if (rest != 1) {
    std::vector<Int> hard;
    u64 budget = opts.rho_iteration_budget;
    u64 rng_state = 0xc0ffee123456789ULL;
    factor_rec(rest, hard, budget, rng_state);
    std::sort(hard.begin(), hard.end());
    for (std::size_t i = 0; i < hard.size();) {
      std::size_t j = i;
      while (j < hard.size() && hard[j] == hard[i]) ++j;
      result.emplace_back(hard[i], static_cast<unsigned>(j - i));
      i = j;
    }
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return result;
}

Int euler_phi(const Int& n, const FactorOptions& opts) {
  if (n < 1) raise(Errc::validation_error, "euler_phi expects n >= 1");
  if (n == 1) return Int(1);
  Int phi = 1;
  for (const auto& [p, e] : factorize(n, opts)) {
    Int pk = 1;
    for (unsigned i = 0; i + 1 < e; ++i) pk *= p;
    phi *= pk * (p - 1);
  }
  return phi;
}

}  // namespace constel
