#include "constel/residue_witness.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "constel/integer.hpp"
#include "constel/parallel.hpp"

namespace constel {

namespace {

using i64 = long long;
using u64 = std::uint64_t;

constexpr long I64_COEFF_LIMIT = 1L << 40;
constexpr long I64_MODULUS_LIMIT = 1L << 50;

struct I64Forms {
  std::vector<std::vector<i64>> a;  // a[i][j]
  std::vector<i64> b;
};

std::optional<I64Forms> reduce_forms_i64(const LinearSystem& sys) {
  I64Forms out;
  out.a.resize(sys.size());
  out.b.resize(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const auto& f = sys.forms()[i];
    out.a[i].resize(f.coeffs.size());
    for (std::size_t j = 0; j < f.coeffs.size(); ++j) {
      if (!f.coeffs[j].fits_slong_p()) return std::nullopt;
      i64 c = mpz_get_si(f.coeffs[j].get_mpz_t());
      if (c >= I64_COEFF_LIMIT || c <= -I64_COEFF_LIMIT) return std::nullopt;
      out.a[i][j] = c;
    }
    if (!f.constant.fits_slong_p()) return std::nullopt;
    i64 c = mpz_get_si(f.constant.get_mpz_t());
    if (c >= I64_COEFF_LIMIT || c <= -I64_COEFF_LIMIT) return std::nullopt;
    out.b[i] = c;
  }
  return out;
}

i64 gcd_i64(i64 a, i64 b) { return std::gcd(a, b); }

// Exhaustive scan of the feasible region for positive-domain systems whose
// coefficients are all nonnegative: every value must land in (1, m), which
// bounds each coordinate once the later ones sit at their minimum of 1.
// Coordinates ascend, so the first hit is the lexicographically least witness.
class RegionScanner {
 public:
  RegionScanner(const I64Forms& forms, std::size_t arity, i64 m,
                std::optional<std::pair<i64, i64>> congruence)
      : f_(forms), k_(arity), m_(m), congruence_(congruence) {
    const std::size_t s = f_.a.size();
    minrest_.assign(k_ + 1, std::vector<i64>(s, 0));
    for (std::size_t j = k_; j-- > 0;)
      for (std::size_t i = 0; i < s; ++i)
        minrest_[j][i] = minrest_[j + 1][i] + f_.a[i][j];
    point_.assign(k_, 0);
  }

  bool run(std::vector<i64>& witness) {
    std::vector<i64> partial(f_.b);
    if (descend(0, partial)) {
      witness = point_;
      return true;
    }
    return false;
  }

 private:
  bool descend(std::size_t depth, std::vector<i64>& partial) {
    const std::size_t s = f_.a.size();
    if (depth == k_) {
      for (std::size_t i = 0; i < s; ++i) {
        const i64 v = partial[i];
        if (v < 2 || v >= m_) return false;
        if (gcd_i64(v, m_) != 1) return false;
      }
      return true;
    }
    // Upper bound for this coordinate: each form with a positive coefficient
    // here must stay below m with the remaining coordinates at 1.
    i64 ub = -1;
    bool constrained = false;
    for (std::size_t i = 0; i < s; ++i) {
      const i64 aij = f_.a[i][depth];
      if (aij <= 0) continue;
      const i64 room = m_ - 1 - partial[i] - minrest_[depth + 1][i];
      const i64 bound = room >= aij ? room / aij : 0;
      ub = constrained ? std::min(ub, bound) : bound;
      constrained = true;
    }
    if (!constrained) ub = 1;  // coordinate unused by every form
    if (ub < 1) return false;

    i64 start = 1, step = 1;
    if (depth == 0 && congruence_) {
      const auto [r, q] = *congruence_;
      start = (r == 0) ? q : r;
      step = q;
    }
    std::vector<i64> next(s);
    for (i64 x = start; x <= ub; x += step) {
      point_[depth] = x;
      for (std::size_t i = 0; i < s; ++i)
        next[i] = partial[i] + f_.a[i][depth] * x;
      if (descend(depth + 1, next)) return true;
    }
    return false;
  }

  const I64Forms& f_;
  std::size_t k_;
  i64 m_;
  std::optional<std::pair<i64, i64>> congruence_;
  std::vector<std::vector<i64>> minrest_;
  std::vector<i64> point_;
};

// Same search in arbitrary precision for coefficients or moduli beyond the
// 64-bit window.
class RegionScannerBig {
 public:
  RegionScannerBig(const LinearSystem& sys, Int m,
                   std::optional<ResidueConstraint> congruence)
      : sys_(sys), m_(std::move(m)), congruence_(std::move(congruence)) {
    const std::size_t s = sys_.size();
    const std::size_t k = sys_.arity();
    minrest_.assign(k + 1, std::vector<Int>(s, 0));
    for (std::size_t j = k; j-- > 0;)
      for (std::size_t i = 0; i < s; ++i)
        minrest_[j][i] = minrest_[j + 1][i] + sys_.forms()[i].coeffs[j];
    point_.assign(k, Int(0));
  }

  bool run(std::vector<Int>& witness) {
    std::vector<Int> partial;
    partial.reserve(sys_.size());
    for (const auto& f : sys_.forms()) partial.push_back(f.constant);
    if (descend(0, partial)) {
      witness = point_;
      return true;
    }
    return false;
  }

 private:
  bool descend(std::size_t depth, std::vector<Int>& partial) {
    const std::size_t s = sys_.size();
    const std::size_t k = sys_.arity();
    if (depth == k) {
      Int g;
      for (std::size_t i = 0; i < s; ++i) {
        if (partial[i] < 2 || partial[i] >= m_) return false;
        mpz_gcd(g.get_mpz_t(), partial[i].get_mpz_t(), m_.get_mpz_t());
        if (g != 1) return false;
      }
      return true;
    }
    Int ub = -1;
    bool constrained = false;
    for (std::size_t i = 0; i < s; ++i) {
      const Int& aij = sys_.forms()[i].coeffs[depth];
      if (aij <= 0) continue;
      Int room = m_ - 1 - partial[i] - minrest_[depth + 1][i];
      Int bound = 0;
      if (room >= aij) mpz_fdiv_q(bound.get_mpz_t(), room.get_mpz_t(), aij.get_mpz_t());
      if (constrained)
        ub = std::min(ub, bound);
      else
        ub = bound;
      constrained = true;
    }
    if (!constrained) ub = 1;
    if (ub < 1) return false;

    Int start = 1, step = 1;
    if (depth == 0 && congruence_) {
      start = congruence_->residue == 0 ? congruence_->modulus
                                        : congruence_->residue;
      step = congruence_->modulus;
    }
    std::vector<Int> next(s);
    for (Int x = start; x <= ub; x += step) {
      point_[depth] = x;
      for (std::size_t i = 0; i < s; ++i)
        next[i] = partial[i] + sys_.forms()[i].coeffs[depth] * x;
      if (descend(depth + 1, next)) return true;
    }
    return false;
  }

  const LinearSystem& sys_;
  Int m_;
  std::optional<ResidueConstraint> congruence_;
  std::vector<std::vector<Int>> minrest_;
  std::vector<Int> point_;
};

// Capped cube for systems with mixed-sign coefficients (or the Z^k domain,
// where no finite region is forced).  Coordinates take 1..cap on the positive
// domain and 0, 1, -1, 2, -2, ... on Z^k.
class CubeScanner {
 public:
  CubeScanner(const LinearSystem& sys, Int m, Int cap,
              std::optional<ResidueConstraint> congruence)
      : sys_(sys), m_(std::move(m)), cap_(std::move(cap)),
        congruence_(std::move(congruence)),
        signed_domain_(sys.domain() == PointDomain::all_integer_points) {
    point_.assign(sys_.arity(), Int(0));
  }

  bool run(std::vector<Int>& witness) {
    if (descend(0)) {
      witness = point_;
      return true;
    }
    return false;
  }

 private:
  bool coordinate_at(std::size_t index, Int& out) const {
    // Positive domain: 1, 2, ..., cap.  Signed: 0, 1, -1, 2, -2, ...
    if (!signed_domain_) {
      out = Int(static_cast<unsigned long>(index)) + 1;
      return out <= cap_;
    }
    if (index == 0) {
      out = 0;
      return true;
    }
    Int mag = Int(static_cast<unsigned long>((index + 1) / 2));
    if (mag > cap_) return false;
    out = (index % 2 == 1) ? mag : -mag;
    return true;
  }

  bool admissible_coordinate(std::size_t depth, const Int& x) const {
    if (depth != 0 || !congruence_) return true;
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), congruence_->modulus.get_mpz_t());
    return r == congruence_->residue;
  }

  bool descend(std::size_t depth) {
    if (depth == sys_.arity()) {
      Int g;
      for (std::size_t i = 0; i < sys_.size(); ++i) {
        Int v = sys_.forms()[i].constant;
        for (std::size_t j = 0; j < sys_.arity(); ++j)
          v += sys_.forms()[i].coeffs[j] * point_[j];
        if (v < 2 || v >= m_) return false;
        mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), m_.get_mpz_t());
        if (g != 1) return false;
      }
      return true;
    }
    Int x;
    for (std::size_t idx = 0; coordinate_at(idx, x); ++idx) {
      if (!admissible_coordinate(depth, x)) continue;
      point_[depth] = x;
      if (descend(depth + 1)) return true;
    }
    return false;
  }

  const LinearSystem& sys_;
  Int m_;
  Int cap_;
  std::optional<ResidueConstraint> congruence_;
  bool signed_domain_;
  std::vector<Int> point_;
};

}  // namespace

WitnessResult find_witness(const LinearSystem& sys, const Int& m,
                           const WitnessOptions& opts) {
  if (m < 2) raise(Errc::validation_error, "witness search needs m >= 2");
  if (opts.congruence) validate(*opts.congruence);

  WitnessResult result;
  const bool bounded_region =
      sys.all_coeffs_nonnegative() &&
      sys.domain() == PointDomain::positive_points;

  std::vector<Int> point;
  bool found = false;

  if (bounded_region) {
    auto fast = reduce_forms_i64(sys);
    const bool congruence_fits =
        !opts.congruence || (opts.congruence->residue.fits_slong_p() &&
                             opts.congruence->modulus.fits_slong_p() &&
                             opts.congruence->modulus < I64_MODULUS_LIMIT);
    if (fast && m < I64_MODULUS_LIMIT && congruence_fits) {
      std::optional<std::pair<i64, i64>> cong;
      if (opts.congruence)
        cong = std::make_pair(mpz_get_si(opts.congruence->residue.get_mpz_t()),
                              mpz_get_si(opts.congruence->modulus.get_mpz_t()));
      RegionScanner scanner(*fast, sys.arity(), mpz_get_si(m.get_mpz_t()), cong);
      std::vector<i64> w;
      found = scanner.run(w);
      if (found) {
        point.reserve(w.size());
        for (i64 x : w) point.emplace_back(static_cast<long>(x));
      }
    } else {
      RegionScannerBig scanner(sys, m, opts.congruence);
      found = scanner.run(point);
    }
    if (!found) {
      result.status = WitnessStatus::no_witness;
      result.exhaustive = true;
      return result;
    }
  } else {
    Int cap = Int(static_cast<unsigned long>(opts.cap_multiplier)) * m;
    CubeScanner scanner(sys, m, cap, opts.congruence);
    found = scanner.run(point);
    if (!found) {
      result.status = WitnessStatus::inconclusive;
      result.exhaustive = false;
      result.cap = cap;
      return result;
    }
  }

  WitnessCertificate cert;
  cert.modulus = m;
  cert.point = point;
  cert.values = evaluate(sys, point);
  cert.congruence = opts.congruence;
  result.status = WitnessStatus::found;
  result.certificate = std::move(cert);
  result.exhaustive = true;
  return result;
}

bool validate_witness(const LinearSystem& sys, const WitnessCertificate& cert) {
  // Deliberately re-implements evaluation and membership; shares nothing with
  // the search path.
  if (cert.point.size() != sys.arity()) return false;
  if (cert.values.size() != sys.size()) return false;
  if (cert.modulus < 2) return false;
  if (sys.domain() == PointDomain::positive_points)
    for (const auto& x : cert.point)
      if (x < 1) return false;
  for (std::size_t i = 0; i < sys.size(); ++i) {
    Int v = sys.forms()[i].constant;
    for (std::size_t j = 0; j < sys.arity(); ++j)
      v += sys.forms()[i].coeffs[j] * cert.point[j];
    if (v != cert.values[i]) return false;
    if (v <= 1 || v >= cert.modulus) return false;
    Int g;
    mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), cert.modulus.get_mpz_t());
    if (g != 1) return false;
  }
  if (cert.congruence) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), cert.point[0].get_mpz_t(),
               cert.congruence->modulus.get_mpz_t());
    if (r != cert.congruence->residue) return false;
  }
  return true;
}

StrongAdmissibilityCertificate certify_strong_admissibility(
    const LinearSystem& sys, std::uint64_t horizon, const CertifyOptions& opts) {
  if (horizon < 2)
    raise(Errc::validation_error, "horizon must be >= 2");
  auto report = is_admissible(sys);
  if (!report.admissible()) {
    std::ostringstream os;
    os << "system is not admissible: fixed divisor "
       << *report.obstruction_prime;
    raise(Errc::not_admissible, os.str(),
          static_cast<long long>(*report.obstruction_prime));
  }

  StrongAdmissibilityCertificate cert;
  cert.system_hash = system_hash(System(sys));
  cert.horizon = horizon;

  const u64 first = 2;
  const u64 count = horizon - first + 1;
  const u64 chunk = std::max<u64>(opts.chunk, 1);
  const std::size_t chunk_count =
      static_cast<std::size_t>((count + chunk - 1) / chunk);

  struct ChunkOut {
    std::vector<std::pair<u64, WitnessResult>> rows;
  };
  std::vector<ChunkOut> outs(chunk_count);

  parallel_chunks(chunk_count, opts.workers, [&](std::size_t c) {
    const u64 lo = first + static_cast<u64>(c) * chunk;
    const u64 hi = std::min<u64>(lo + chunk - 1, horizon);
    auto& rows = outs[c].rows;
    rows.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (u64 m = lo; m <= hi; ++m)
      rows.emplace_back(m, find_witness(sys, Int(static_cast<unsigned long>(m)),
                                        opts.witness));
  });

  for (auto& c : outs) {
    for (auto& [m, res] : c.rows) {
      switch (res.status) {
        case WitnessStatus::found:
          cert.witnesses.emplace(m, std::move(*res.certificate));
          break;
        case WitnessStatus::no_witness:
          cert.failing.push_back(m);
          break;
        case WitnessStatus::inconclusive: {
          std::ostringstream os;
          os << "witness search inconclusive at m = " << m << " (cap "
             << res.cap << ")";
          raise(Errc::inconclusive, os.str(), static_cast<long long>(m));
        }
      }
    }
  }

  cert.candidate_L = cert.failing.empty() ? 2 : cert.failing.back() + 1;
  std::ostringstream caveat;
  caveat << "bounded verification: witnesses checked for m <= " << horizon
         << " only; candidate_L is empirical, not a proof for larger m";
  cert.caveat = caveat.str();
  return cert;
}

std::string serialize_certificate(const StrongAdmissibilityCertificate& cert) {
  std::ostringstream os;
  os << "hash " << cert.system_hash << "\n";
  os << "horizon " << cert.horizon << "\n";
  os << "candidate_L " << cert.candidate_L << "\n";
  for (u64 m = 2; m <= cert.horizon; ++m) {
    auto it = cert.witnesses.find(m);
    if (it != cert.witnesses.end()) {
      os << m;
      for (const auto& y : it->second.point) os << ' ' << y;
      os << "\n";
    } else {
      os << m << " FAIL\n";
    }
  }
  return os.str();
}

BandReport verify_corollary_band(const LinearSystem& sys, std::uint64_t band_lo,
                                 std::uint64_t horizon,
                                 const ResidueConstraint& congruence,
                                 const CertifyOptions& opts) {
  if (band_lo >= horizon)
    raise(Errc::validation_error, "band_lo must be below the horizon");
  validate(congruence);

  BandReport report;
  report.band_lo = band_lo;
  report.horizon = horizon;
  report.congruence = congruence;

  WitnessOptions with_congruence = opts.witness;
  with_congruence.congruence = congruence;

  const u64 first = std::max<u64>(band_lo + 1, 2);
  if (first > horizon) {
    report.ok = true;
    return report;
  }
  const u64 count = horizon - first + 1;
  const u64 chunk = std::max<u64>(opts.chunk, 1);
  const std::size_t chunk_count =
      static_cast<std::size_t>((count + chunk - 1) / chunk);

  std::vector<std::optional<u64>> chunk_failure(chunk_count);
  parallel_chunks(chunk_count, opts.workers, [&](std::size_t c) {
    const u64 lo = first + static_cast<u64>(c) * chunk;
    const u64 hi = std::min<u64>(lo + chunk - 1, horizon);
    for (u64 m = lo; m <= hi; ++m) {
      auto res = find_witness(sys, Int(static_cast<unsigned long>(m)),
                              with_congruence);
      if (res.status == WitnessStatus::inconclusive) {
        std::ostringstream os;
        os << "witness search inconclusive at m = " << m;
        raise(Errc::inconclusive, os.str(), static_cast<long long>(m));
      }
      if (res.status != WitnessStatus::found) {
        chunk_failure[c] = m;
        return;  // least failure within this chunk; later chunks may be larger
      }
    }
  });

  std::optional<u64> least_failure;
  for (const auto& f : chunk_failure)
    if (f && (!least_failure || *f < *least_failure)) {
      least_failure = *f;
      break;  // chunks are ascending; the first recorded failure is least
    }

  if (!least_failure) {
    report.ok = true;
    report.verified_count = count;
    return report;
  }

  report.ok = false;
  report.counterexample_m = *least_failure;
  report.verified_count = *least_failure - first;
  // Distinguish "congruence claim fails" from "no witness at all".
  WitnessOptions unconstrained = opts.witness;
  unconstrained.congruence.reset();
  auto recheck = find_witness(
      sys, Int(static_cast<unsigned long>(*least_failure)), unconstrained);
  report.unconstrained_witness_exists =
      recheck.status == WitnessStatus::found;
  return report;
}

LinearSystem homogeneous_system(const std::vector<std::vector<Int>>& matrix) {
  if (matrix.empty())
    raise(Errc::validation_error, "matrix must be nonempty");
  const std::size_t k = matrix.size();
  std::vector<AffineForm> forms;
  forms.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (matrix[i].size() != k)
      raise(Errc::validation_error, "matrix must be square");
    bool nonzero = false;
    for (const auto& c : matrix[i])
      if (c != 0) nonzero = true;
    if (!nonzero) {
      std::ostringstream os;
      os << "row " << i << " is all zero";
      raise(Errc::precondition_violated, os.str(), static_cast<long long>(i));
    }
    forms.push_back(AffineForm{matrix[i], Int(0)});
  }
  return LinearSystem(std::move(forms), PointDomain::positive_points);
}

StrongAdmissibilityCertificate good_property_check(
    const std::vector<std::vector<Int>>& matrix, std::uint64_t horizon,
    const CertifyOptions& opts) {
  return certify_strong_admissibility(homogeneous_system(matrix), horizon, opts);
}

FactorialFrameReport factorial_frame_scan(const Int& a, const Int& b,
                                          NaturalRange n_range,
                                          std::uint64_t max_n_budget) {
  validate(n_range);
  if (b < 1) raise(Errc::validation_error, "b must be a positive integer");
  if (a == 0) raise(Errc::validation_error, "a must be nonzero");
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1) raise(Errc::validation_error, "gcd(a, b) must be 1");
  if (max_n_budget > 20) max_n_budget = 20;  // keep n! within 64-bit scans
  if (n_range.hi > max_n_budget) {
    std::ostringstream os;
    os << "n range exceeds the factorial budget (hi <= " << max_n_budget << ")";
    raise(Errc::budget_exceeded, os.str(),
          static_cast<long long>(n_range.hi));
  }
  if (!a.fits_slong_p() || !b.fits_slong_p())
    raise(Errc::validation_error, "a and b must fit signed 64-bit for the scan");

  const i64 av = mpz_get_si(a.get_mpz_t());
  const i64 bv = mpz_get_si(b.get_mpz_t());

  FactorialFrameReport report;
  report.a = a;
  report.b = b;
  report.range = n_range;
  report.note =
      "empirical survey of least coprime / least prime values per frame; "
      "nothing is asserted beyond the scanned range";

  for (u64 n = n_range.lo; n <= n_range.hi; ++n) {
    FactorialFrameEntry entry;
    entry.n = n;
    mpz_fac_ui(entry.modulus.get_mpz_t(), static_cast<unsigned long>(n));
    const i64 N = mpz_get_si(entry.modulus.get_mpz_t());
    const auto small_primes = primes_up_to(n);

    // First value of the form a + b x, x >= 0, exceeding 1.
    i64 v = av;
    if (v <= 1) {
      const i64 deficit = 2 - v;
      v += (deficit + bv - 1) / bv * bv;
    }
    for (; v < N; v += bv) {
      bool coprime = true;
      for (u64 p : small_primes)
        if (v % static_cast<i64>(p) == 0) {
          coprime = false;
          break;
        }
      if (!coprime) continue;
      if (!entry.least_value) {
        entry.least_value = Int(static_cast<long>(v));
        entry.least_value_prime = is_prime_u64(static_cast<u64>(v));
        if (entry.least_value_prime) {
          entry.least_prime = entry.least_value;
          break;
        }
      } else if (is_prime_u64(static_cast<u64>(v))) {
        entry.least_prime = Int(static_cast<long>(v));
        break;
      }
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace constel
