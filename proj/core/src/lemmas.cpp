#include "constel/lemmas.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace constel {

namespace {

using u64 = std::uint64_t;

struct SingleVarForms {
  std::vector<Int> a;  // constants a_i, all nonzero
  std::vector<Int> b;  // coefficients b_i, all >= 1
};

SingleVarForms check_single_var(const LinearSystem& sys) {
  if (sys.arity() != 1)
    raise(Errc::arity_mismatch, "construction needs a single-variable system");
  SingleVarForms out;
  for (const auto& f : sys.forms()) {
    const Int& b = f.coeffs[0];
    const Int& a = f.constant;
    if (a == 0)
      raise(Errc::validation_error, "every form needs a nonzero constant a_i");
    if (b < 1)
      raise(Errc::validation_error, "every form needs coefficient b_i >= 1");
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (g != 1)
      raise(Errc::validation_error, "every form needs gcd(a_i, b_i) = 1");
    out.a.push_back(a);
    out.b.push_back(b);
  }
  return out;
}

void check_admissible(const LinearSystem& sys) {
  auto report = is_admissible(sys);
  if (!report.admissible()) {
    std::ostringstream os;
    os << "system has fixed divisor " << *report.obstruction_prime;
    raise(Errc::not_admissible, os.str(),
          static_cast<long long>(*report.obstruction_prime));
  }
}

// Product of form values mod p at residue r.
u64 product_mod_p(const SingleVarForms& f, u64 r, u64 p) {
  unsigned __int128 prod = 1;
  for (std::size_t i = 0; i < f.a.size(); ++i) {
    u64 av = mpz_fdiv_ui(f.a[i].get_mpz_t(), p);
    u64 bv = mpz_fdiv_ui(f.b[i].get_mpz_t(), p);
    u64 v = (av + (unsigned __int128)bv * r % p) % p;
    prod = prod * v % p;
    if (prod == 0) return 0;
  }
  return static_cast<u64>(prod);
}

}  // namespace

CoprimalityWitness lemma1_construct(const LinearSystem& single_var,
                                    std::uint64_t C) {
  auto forms = check_single_var(single_var);
  if (C > 200)
    raise(Errc::validation_error, "prime-set budget: C <= 200");
  check_admissible(single_var);

  CoprimalityWitness witness;
  witness.shielded_primes = primes_up_to(C);

  std::vector<ResidueConstraint> constraints;
  for (u64 p : witness.shielded_primes) {
    std::optional<u64> least_good;
    bool all_good = true;
    for (u64 r = 0; r < p; ++r) {
      if (product_mod_p(forms, r, p) != 0) {
        if (!least_good) least_good = r;
      } else {
        all_good = false;
      }
    }
    if (!least_good) {
      std::ostringstream os;
      os << "ResidueSearchFailed(" << p
         << "): no residue avoids the product's zeros; admissibility "
            "precheck should have excluded this";
      raise(Errc::precondition_violated, os.str(), static_cast<long long>(p));
    }
    // Primes with every residue valid impose nothing.
    if (!all_good)
      constraints.push_back(
          ResidueConstraint{Int(static_cast<unsigned long>(*least_good)),
                            Int(static_cast<unsigned long>(p))});
  }

  if (constraints.empty()) {
    witness.x = 1;
  } else {
    auto combined = crt_combine(constraints);
    witness.x = combined.residue == 0 ? combined.modulus : combined.residue;
  }

  witness.product_value = 1;
  for (std::size_t i = 0; i < forms.a.size(); ++i)
    witness.product_value *= forms.a[i] + forms.b[i] * witness.x;
  return witness;
}

Int lemma2_construct(const LinearSystem& single_var, const Int& r, const Int& m,
                     const FactorOptions& factor_opts) {
  auto forms = check_single_var(single_var);
  if (r < 1) raise(Errc::validation_error, "r must be a positive integer");
  if (m < 1) raise(Errc::validation_error, "m must be a positive integer");
  check_admissible(single_var);

  Int prod_a = 1;
  for (const auto& a : forms.a) prod_a *= a;
  Int g;
  mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), prod_a.get_mpz_t());
  if (g != 1)
    raise(Errc::precondition_violated, "gcd(r, prod a_i) must be 1");

  if (m == 1) return Int(1);

  // The substituted system g_i(x) = a_i + (r b_i) x.  Per prime p | m the good
  // residues are nonempty (p | r leaves the constants; otherwise x -> r x is a
  // bijection mod p and admissibility supplies a good residue), so a minimal x
  // exists within one period.
  SingleVarForms subst;
  subst.a = forms.a;
  for (std::size_t i = 0; i < forms.b.size(); ++i)
    subst.b.push_back(forms.b[i] * r);

  auto factors = factorize(m, factor_opts);
  struct PrimeFilter {
    u64 p;
    std::vector<bool> good;  // residue -> product nonzero mod p
  };
  std::vector<PrimeFilter> small_filters;
  std::vector<Int> big_primes;
  constexpr u64 FILTER_LIMIT = 1u << 22;
  for (const auto& [p, e] : factors) {
    (void)e;
    if (p.fits_ulong_p() && mpz_get_ui(p.get_mpz_t()) <= FILTER_LIMIT) {
      u64 pv = mpz_get_ui(p.get_mpz_t());
      PrimeFilter f{pv, std::vector<bool>(pv, false)};
      bool any = false;
      for (u64 x = 0; x < pv; ++x) {
        if (product_mod_p(subst, x, pv) != 0) {
          f.good[x] = true;
          any = true;
        }
      }
      if (!any) {
        std::ostringstream os;
        os << "no good residue mod " << pv << "; preconditions violated";
        raise(Errc::precondition_violated, os.str(),
              static_cast<long long>(pv));
      }
      small_filters.push_back(std::move(f));
    } else {
      big_primes.push_back(p);
    }
  }

  for (Int x = 1;; ++x) {
    bool ok = true;
    for (const auto& f : small_filters) {
      if (!f.good[mpz_fdiv_ui(x.get_mpz_t(), f.p)]) {
        ok = false;
        break;
      }
    }
    if (ok && !big_primes.empty()) {
      Int prod = 1;
      for (std::size_t i = 0; i < subst.a.size(); ++i)
        prod *= subst.a[i] + subst.b[i] * x;
      for (const auto& p : big_primes) {
        if (mpz_divisible_p(prod.get_mpz_t(), p.get_mpz_t())) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return x;
  }
}

std::size_t select_coprime_column(const std::vector<std::vector<Int>>& values,
                                  const Int& q) {
  if (values.empty())
    raise(Errc::validation_error, "matrix must have at least one row");
  const std::size_t s = values.size();
  const std::size_t cols = s + 1;
  for (std::size_t i = 0; i < s; ++i)
    if (values[i].size() != cols)
      raise(Errc::validation_error, "matrix must be s x (s+1)");
  if (q < 2 || !is_prime(q))
    raise(Errc::validation_error, "q must be prime");

  std::vector<bool> poisoned(cols, false);
  for (std::size_t i = 0; i < s; ++i) {
    unsigned divisible_in_row = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (mpz_divisible_p(values[i][j].get_mpz_t(), q.get_mpz_t())) {
        ++divisible_in_row;
        poisoned[j] = true;
      }
    }
    if (divisible_in_row >= 2) {
      std::ostringstream os;
      os << "row " << i << " has " << divisible_in_row
         << " entries divisible by " << q << " (at most one allowed)";
      raise(Errc::precondition_violated, os.str(), static_cast<long long>(i));
    }
  }
  for (std::size_t j = 0; j < cols; ++j)
    if (!poisoned[j]) return j;
  // s rows poison at most s of s+1 columns; unreachable once the precondition
  // holds.
  raise(Errc::precondition_violated, "no clean column despite precondition");
}

CrtIsoReport crt_isomorphism_check(std::uint64_t a, std::uint64_t b) {
  if (a < 1 || b < 1)
    raise(Errc::validation_error, "a and b must be positive");
  if (a > 10000 || b > 10000)
    raise(Errc::validation_error, "enumeration budget: a, b <= 10^4");
  if (std::gcd(a, b) != 1) {
    std::ostringstream os;
    os << "gcd(" << a << ", " << b << ") != 1";
    raise(Errc::non_coprime, os.str());
  }

  CrtIsoReport report;
  report.a = a;
  report.b = b;

  auto reduced_residues = [](u64 n) {
    std::vector<u64> out;
    for (u64 x = 1; x < n; ++x)
      if (std::gcd(x, n) == 1) out.push_back(x);
    return out;
  };

  if (a == 1 || b == 1) {
    const u64 n = a == 1 ? b : a;
    auto zn = reduced_residues(n);
    report.degenerate_unit_factor = true;
    report.card_a = a == 1 ? 0 : zn.size();
    report.card_b = b == 1 ? 0 : zn.size();
    report.card_ab = zn.size();
    report.ok = true;
    report.multiplicativity_exhaustive = true;
    report.note =
        "degenerate factor: Z_1^* is empty under this library's convention "
        "(phi(1) = 1 is kept separately); the nontrivial factor was checked "
        "alone";
    return report;
  }

  const auto za = reduced_residues(a);
  const auto zb = reduced_residues(b);
  const u64 ab = a * b;
  report.card_a = za.size();
  report.card_b = zb.size();

  // Index of each residue within its list, for multiplicativity lookups.
  std::vector<std::size_t> pos_a(a, 0), pos_b(b, 0);
  for (std::size_t i = 0; i < za.size(); ++i) pos_a[za[i]] = i;
  for (std::size_t i = 0; i < zb.size(); ++i) pos_b[zb[i]] = i;

  // w = u * b * (b^{-1} mod a) + v * a * (a^{-1} mod b) (mod ab).
  u64 b_inv_mod_a = 1, a_inv_mod_b = 1;
  for (u64 t = 1; t < a; ++t)
    if (t * (b % a) % a == 1 % a) {
      b_inv_mod_a = t;
      break;
    }
  for (u64 t = 1; t < b; ++t)
    if (t * (a % b) % b == 1 % b) {
      a_inv_mod_b = t;
      break;
    }
  const u64 ea = b % ab * b_inv_mod_a % ab;  // == 1 mod a, 0 mod b
  const u64 eb = a % ab * a_inv_mod_b % ab;  // == 0 mod a, 1 mod b

  std::vector<std::vector<u64>> w(za.size(), std::vector<u64>(zb.size()));
  std::vector<bool> seen(ab, false);
  bool injective = true;
  bool into = true;
  for (std::size_t i = 0; i < za.size(); ++i)
    for (std::size_t j = 0; j < zb.size(); ++j) {
      u64 val = ((unsigned __int128)za[i] * ea + (unsigned __int128)zb[j] * eb) % ab;
      w[i][j] = val;
      if (val == 0 || std::gcd(val, ab) != 1) into = false;
      if (val != 0 && seen[val]) injective = false;
      if (val != 0) seen[val] = true;
    }

  u64 phi_ab = 0;
  for (u64 x = 1; x < ab; ++x)
    if (std::gcd(x, ab) == 1) ++phi_ab;
  report.card_ab = phi_ab;

  const bool bijective =
      injective && into && za.size() * zb.size() == phi_ab;

  // Multiplicativity: w(u1*u2, v1*v2) == w(u1,v1) * w(u2,v2) mod ab.
  bool multiplicative = true;
  const u64 element_count = za.size() * zb.size();
  report.multiplicativity_exhaustive = element_count <= 4096;
  u64 stride = 1;
  if (!report.multiplicativity_exhaustive) {
    // Deterministic sample: stride the pair space down to ~2^21 checks.
    const u64 total = element_count * element_count;
    stride = total / (1u << 21) + 1;
  }
  u64 checked = 0;
  u64 cursor = 0;
  for (std::size_t i1 = 0; i1 < za.size() && multiplicative; ++i1)
    for (std::size_t j1 = 0; j1 < zb.size() && multiplicative; ++j1)
      for (std::size_t i2 = 0; i2 < za.size() && multiplicative; ++i2)
        for (std::size_t j2 = 0; j2 < zb.size() && multiplicative; ++j2) {
          if (cursor++ % stride != 0) continue;
          const u64 u12 = za[i1] * za[i2] % a;
          const u64 v12 = zb[j1] * zb[j2] % b;
          const u64 lhs = w[pos_a[u12]][pos_b[v12]];
          const u64 rhs =
              (unsigned __int128)w[i1][j1] * w[i2][j2] % ab;
          ++checked;
          if (lhs != rhs) multiplicative = false;
        }

  report.multiplicative_pairs_checked = checked;
  report.ok = bijective && multiplicative;
  std::ostringstream note;
  note << "|Z_" << a << "^*| * |Z_" << b << "^*| = " << za.size() << " * "
       << zb.size() << " = " << za.size() * zb.size() << "; |Z_" << ab
       << "^*| = " << phi_ab;
  report.note = note.str();
  return report;
}

}  // namespace constel
