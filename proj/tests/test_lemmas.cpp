#include <doctest.h>

#include <numeric>
#include <random>

#include "constel/lemmas.hpp"
#include "constel/residue_witness.hpp"
#include "oracles.hpp"

using namespace constel;

namespace {

LinearSystem forms_1p2x_3p2x() {
  return LinearSystem({AffineForm{{Int(2)}, Int(1)}, AffineForm{{Int(2)}, Int(3)}});
}

// Trial-division validation: no prime <= C divides the product.
bool shielded(const CoprimalityWitness& w, std::uint64_t C) {
  for (std::uint64_t p : primes_up_to(C))
    if (mpz_divisible_ui_p(w.product_value.get_mpz_t(), p)) return false;
  return true;
}

}  // namespace

TEST_CASE("lemma1 reference constructions") {
  // {1+2x, 3+2x}, C = 7: constrained residues are 2 (mod 3), 0 (mod 5),
  // 0 (mod 7); p = 2 never divides the product.  CRT gives 35 mod 105.
  auto w = lemma1_construct(forms_1p2x_3p2x(), 7);
  CHECK(w.x == 35);
  CHECK(w.product_value == Int(71) * 73);
  CHECK(w.shielded_primes == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(shielded(w, 7));

  // {3+2x}, C = 2: always odd, no constraint at all.
  LinearSystem single({AffineForm{{Int(2)}, Int(3)}});
  auto w2 = lemma1_construct(single, 2);
  CHECK(w2.x == 1);
  CHECK(w2.product_value == 5);

  // C < 2 is vacuous.
  auto w3 = lemma1_construct(forms_1p2x_3p2x(), 1);
  CHECK(w3.x == 1);
  CHECK(w3.product_value == Int(3) * 5);
  CHECK(w3.shielded_primes.empty());
}

TEST_CASE("lemma1 output validated by trial division on random systems") {
  std::mt19937_64 rng(808);
  int built = 0;
  while (built < 40) {
    LinearSystem sys = oracles::random_dickson_system(rng);
    if (!oracles::brute_force_admissible(sys, 60)) continue;
    std::uint64_t C = 2 + rng() % 29;
    auto w = lemma1_construct(sys, C);
    CHECK(w.x >= 1);
    if (!shielded(w, C)) {
      CAPTURE(serialize_system(System(sys)));
      CAPTURE(C);
      REQUIRE(false);
    }
    ++built;
  }
}

TEST_CASE("lemma1 guards") {
  CHECK_THROWS_AS(lemma1_construct(forms_1p2x_3p2x(), 201), Error);
  // Constant a_i = 0 violates the shape.
  LinearSystem just_x({AffineForm{{Int(1)}, Int(0)}});
  CHECK_THROWS_AS(lemma1_construct(just_x, 5), Error);
  // Inadmissible: x+1 and 1+... {1+x, 2+x}: product always even.
  LinearSystem succ({AffineForm{{Int(1)}, Int(1)}, AffineForm{{Int(1)}, Int(2)}});
  try {
    lemma1_construct(succ, 5);
    FAIL("expected NotAdmissible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_admissible);
  }
}

TEST_CASE("lemma2 reference values") {
  LinearSystem single({AffineForm{{Int(2)}, Int(3)}});
  // 3 + 10x at x = 1 gives 13, coprime to 6.
  CHECK(lemma2_construct(single, Int(5), Int(6)) == 1);
  // (1+10x)(3+10x) at x = 1 gives 11 * 13, coprime to 7.
  CHECK(lemma2_construct(forms_1p2x_3p2x(), Int(5), Int(7)) == 1);
  // m = 1: everything is coprime to 1.
  CHECK(lemma2_construct(forms_1p2x_3p2x(), Int(1), Int(1)) == 1);
}

TEST_CASE("lemma2 returns the minimal x") {
  std::mt19937_64 rng(909);
  int built = 0;
  while (built < 30) {
    LinearSystem sys = oracles::random_dickson_system(rng, 2);
    if (!oracles::brute_force_admissible(sys, 60)) continue;
    Int prod_a = 1;
    for (const auto& f : sys.forms()) prod_a *= f.constant;
    std::uint64_t r = 1 + rng() % 12;
    Int g;
    Int ri(static_cast<unsigned long>(r));
    mpz_gcd(g.get_mpz_t(), ri.get_mpz_t(), prod_a.get_mpz_t());
    if (g != 1) continue;
    std::uint64_t m = 2 + rng() % 9998;

    Int x = lemma2_construct(sys, ri, Int(static_cast<unsigned long>(m)));
    // Dumb scan: every smaller x must fail, x itself must pass.
    auto passes = [&](const Int& cand) {
      Int prod = 1;
      for (const auto& f : sys.forms())
        prod *= f.constant + ri * f.coeffs[0] * cand;
      Int gg;
      Int mi(static_cast<unsigned long>(m));
      mpz_gcd(gg.get_mpz_t(), prod.get_mpz_t(), mi.get_mpz_t());
      return gg == 1;
    };
    CHECK(passes(x));
    for (Int cand = 1; cand < x; ++cand) {
      if (passes(cand)) {
        CAPTURE(serialize_system(System(sys)));
        CAPTURE(r);
        CAPTURE(m);
        REQUIRE(false);
      }
    }
    ++built;
  }
}

TEST_CASE("lemma2 rejects r sharing a factor with the constants") {
  LinearSystem sys({AffineForm{{Int(2)}, Int(3)}});
  try {
    lemma2_construct(sys, Int(3), Int(5));
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition_violated);
  }
}

TEST_CASE("coprime column selection") {
  CHECK(select_coprime_column({{Int(3), Int(5)}}, Int(5)) == 0);

  // Row 1 has two entries divisible by 5.
  try {
    select_coprime_column({{Int(7), Int(10), Int(3)}, {Int(5), Int(9), Int(20)}},
                          Int(5));
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition_violated);
    CHECK(e.detail() == 1);
  }

  CHECK(select_coprime_column({{Int(7), Int(10), Int(3)}, {Int(5), Int(9), Int(2)}},
                              Int(5)) == 2);
}

TEST_CASE("coprime column selection matches an exhaustive scan") {
  std::mt19937_64 rng(4321);
  const std::uint64_t qs[] = {2, 3, 5, 7, 11, 13};
  for (int iter = 0; iter < 1000; ++iter) {
    const std::size_t s = 1 + rng() % 4;
    const std::uint64_t q = qs[rng() % 6];
    std::vector<std::vector<Int>> rows(s, std::vector<Int>(s + 1));
    for (std::size_t i = 0; i < s; ++i) {
      // At most one q-divisible entry per row.
      std::size_t divisible_at = rng() % (s + 2);  // may be none
      for (std::size_t j = 0; j <= s; ++j) {
        std::uint64_t v = 1 + rng() % 1000;
        if (j == divisible_at)
          v *= q;
        else if (v % q == 0)
          ++v;
        rows[i][j] = Int(static_cast<unsigned long>(v));
      }
    }
    std::size_t got = select_coprime_column(rows, Int(static_cast<unsigned long>(q)));
    // Exhaustive oracle: least column with no divisible entry.
    std::size_t want = s + 1;
    for (std::size_t j = 0; j <= s && want == s + 1; ++j) {
      bool clean = true;
      for (std::size_t i = 0; i < s; ++i)
        if (mpz_divisible_ui_p(rows[i][j].get_mpz_t(), q)) clean = false;
      if (clean) want = j;
    }
    REQUIRE(want <= s);
    CHECK(got == want);
  }
}

TEST_CASE("crt isomorphism spot checks") {
  auto r35 = crt_isomorphism_check(3, 5);
  CHECK(r35.ok);
  CHECK(r35.card_a * r35.card_b == 8);
  CHECK(r35.card_ab == 8);
  CHECK(r35.multiplicativity_exhaustive);

  auto r49 = crt_isomorphism_check(4, 9);
  CHECK(r49.ok);
  CHECK(r49.card_ab == 12);

  auto degenerate = crt_isomorphism_check(1, 12);
  CHECK(degenerate.ok);
  CHECK(degenerate.degenerate_unit_factor);
  CHECK(degenerate.card_a == 0);

  try {
    crt_isomorphism_check(6, 9);
    FAIL("expected NonCoprime");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_coprime);
  }
}

TEST_CASE("crt isomorphism holds for all coprime pairs up to 25") {
  for (std::uint64_t a = 1; a <= 25; ++a)
    for (std::uint64_t b = a; b <= 25; ++b) {
      if (std::gcd(a, b) != 1) continue;
      auto rep = crt_isomorphism_check(a, b);
      if (!rep.ok) {
        CAPTURE(a);
        CAPTURE(b);
        REQUIRE(rep.ok);
      }
    }
}

TEST_CASE("single-form shield construction validates numerically") {
  // For f(x) = a + bx, u = prod of primes p <= 2b(|a|+k) coprime to a (k the
  // least prime coprime to a) makes every prime divisor of a+bu exceed
  // b(|a|+k).
  for (long a : {1L, -1L, 3L, -3L, 5L, 7L, -4L}) {
    for (long b : {1L, 2L, 3L, 4L}) {
      if (std::gcd(a < 0 ? -a : a, b) != 1) continue;
      long k = 2;
      while (std::gcd(a < 0 ? -a : a, k) != 1 || !is_prime_u64(k)) ++k;
      const long bound = 2 * b * ((a < 0 ? -a : a) + k);
      Int u = 1;
      for (std::uint64_t p : primes_up_to(static_cast<std::uint64_t>(bound)))
        if (std::gcd(a < 0 ? -a : a, static_cast<long>(p)) == 1)
          u *= Int(static_cast<unsigned long>(p));
      Int value = Int(a) + Int(b) * u;
      CHECK(value > 1);
      for (std::uint64_t p :
           primes_up_to(static_cast<std::uint64_t>(b * ((a < 0 ? -a : a) + k))))
        CHECK_FALSE(mpz_divisible_ui_p(value.get_mpz_t(), p));
    }
  }
}
