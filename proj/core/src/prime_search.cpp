#include "constel/prime_search.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "constel/integer.hpp"
#include "constel/parallel.hpp"

namespace constel {

namespace {

using i64 = long long;
using u64 = std::uint64_t;

std::size_t system_arity(const System& sys) {
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) return lin->arity();
  return 1;
}

// Callback receives (point, values); returning false stops the scan.
using PointVisitor =
    std::function<bool(const std::vector<Int>&, const std::vector<Int>&)>;

struct ScanStats {
  Int points = 0;
  bool probable_prime_used = false;
};

// Values of a linear system along a box row can be evaluated in 64-bit when
// coefficients and the extreme corners fit comfortably.
bool box_fits_i64(const System& sys, const Box& box) {
  Int bound = 0;
  auto corner = [&](const Int& lo, const Int& hi) {
    return std::max(abs(lo), abs(hi));
  };
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    for (const auto& f : lin->forms()) {
      Int v = abs(f.constant);
      for (std::size_t j = 0; j < lin->arity(); ++j)
        v += abs(f.coeffs[j]) * corner(box.ranges[j].first, box.ranges[j].second);
      bound = std::max(bound, v);
    }
  } else {
    const auto& ps = std::get<UniPolySystem>(sys);
    Int x = corner(box.ranges[0].first, box.ranges[0].second);
    for (const auto& p : ps.polys()) {
      Int v = 0;
      for (std::size_t i = p.coeffs().size(); i-- > 0;)
        v = v * x + abs(p.coeffs()[i]);
      bound = std::max(bound, v);
    }
  }
  return bound < Int("4611686018427387904");  // 2^62
}

// Exhaustive box scan, ascending lexicographic, calling visit on every point
// whose values are all prime.  Returns the number of points visited.
class BoxScan {
 public:
  BoxScan(const System& sys, const Box& box) : sys_(sys), box_(box) {
    k_ = system_arity(sys);
    fast_ = box_fits_i64(sys, box);
    if (const auto* lin = std::get_if<LinearSystem>(&sys_)) {
      s_ = lin->size();
      if (fast_) {
        a64_.resize(s_, std::vector<i64>(k_));
        b64_.resize(s_);
        for (std::size_t i = 0; i < s_; ++i) {
          for (std::size_t j = 0; j < k_; ++j)
            a64_[i][j] = mpz_get_si(lin->forms()[i].coeffs[j].get_mpz_t());
          b64_[i] = mpz_get_si(lin->forms()[i].constant.get_mpz_t());
        }
      }
    } else {
      const auto& ps = std::get<UniPolySystem>(sys_);
      s_ = ps.size();
      if (fast_) {
        poly64_.resize(s_);
        for (std::size_t i = 0; i < s_; ++i) {
          const auto& c = ps.polys()[i].coeffs();
          poly64_[i].resize(c.size());
          for (std::size_t j = 0; j < c.size(); ++j)
            poly64_[i][j] = mpz_get_si(c[j].get_mpz_t());
        }
      }
    }
  }

  // Scans at most `limit` points (0 = whole box); stats returned via out.
  void run(const Int& limit, const PointVisitor& visit, ScanStats& stats) {
    std::vector<Int> point(k_);
    if (fast_) {
      std::vector<i64> p64(k_);
      scan_fast(0, p64, point, limit, visit, stats);
    } else {
      scan_big(0, point, limit, visit, stats);
    }
  }

 private:
  bool scan_fast(std::size_t depth, std::vector<i64>& p64,
                 std::vector<Int>& point, const Int& limit,
                 const PointVisitor& visit, ScanStats& stats) {
    if (depth == k_) {
      stats.points += 1;
      if (all_values_prime_fast(p64)) {
        for (std::size_t j = 0; j < k_; ++j)
          point[j] = Int(static_cast<long>(p64[j]));
        std::vector<Int> values(values64_.size());
        for (std::size_t i = 0; i < values64_.size(); ++i)
          values[i] = Int(static_cast<long>(values64_[i]));
        if (!visit(point, values)) return false;
      }
      return limit == 0 || stats.points < limit;
    }
    const i64 lo = mpz_get_si(box_.ranges[depth].first.get_mpz_t());
    const i64 hi = mpz_get_si(box_.ranges[depth].second.get_mpz_t());
    for (i64 x = lo; x <= hi; ++x) {
      p64[depth] = x;
      if (!scan_fast(depth + 1, p64, point, limit, visit, stats)) return false;
    }
    return true;
  }

  bool all_values_prime_fast(const std::vector<i64>& p) {
    values64_.resize(s_);
    if (!a64_.empty()) {
      for (std::size_t i = 0; i < s_; ++i) {
        i64 v = b64_[i];
        for (std::size_t j = 0; j < k_; ++j) v += a64_[i][j] * p[j];
        if (v < 2 || !is_prime_u64(static_cast<u64>(v))) return false;
        values64_[i] = v;
      }
    } else {
      const i64 x = p[0];
      for (std::size_t i = 0; i < s_; ++i) {
        i64 v = 0;
        const auto& c = poly64_[i];
        for (std::size_t j = c.size(); j-- > 0;) v = v * x + c[j];
        if (v < 2 || !is_prime_u64(static_cast<u64>(v))) return false;
        values64_[i] = v;
      }
    }
    return true;
  }

  bool scan_big(std::size_t depth, std::vector<Int>& point, const Int& limit,
                const PointVisitor& visit, ScanStats& stats) {
    if (depth == k_) {
      stats.points += 1;
      std::vector<Int> values = raw_values(point);
      bool all_prime = true;
      for (const auto& v : values) {
        if (v < 2) {
          all_prime = false;
          break;
        }
        auto cls = classify_prime(v);
        if (cls == Primality::composite) {
          all_prime = false;
          break;
        }
        if (cls == Primality::probable_prime) stats.probable_prime_used = true;
      }
      if (all_prime && !visit(point, values)) return false;
      return limit == 0 || stats.points < limit;
    }
    for (Int x = box_.ranges[depth].first; x <= box_.ranges[depth].second; ++x) {
      point[depth] = x;
      if (!scan_big(depth + 1, point, limit, visit, stats)) return false;
    }
    return true;
  }

  std::vector<Int> raw_values(const std::vector<Int>& point) const {
    std::vector<Int> values;
    values.reserve(s_);
    if (const auto* lin = std::get_if<LinearSystem>(&sys_)) {
      for (const auto& f : lin->forms()) {
        Int v = f.constant;
        for (std::size_t j = 0; j < k_; ++j) v += f.coeffs[j] * point[j];
        values.push_back(v);
      }
    } else {
      const auto& ps = std::get<UniPolySystem>(sys_);
      for (const auto& p : ps.polys()) values.push_back(p.eval(point[0]));
    }
    return values;
  }

  const System& sys_;
  const Box& box_;
  std::size_t k_ = 0, s_ = 0;
  bool fast_ = false;
  std::vector<std::vector<i64>> a64_;
  std::vector<i64> b64_;
  std::vector<std::vector<i64>> poly64_;
  std::vector<i64> values64_;
};

Int box_volume(const Box& box) {
  Int total = 1;
  for (const auto& [lo, hi] : box.ranges) {
    if (hi < lo) return Int(0);
    total *= hi - lo + 1;
  }
  return total;
}

Box psi_box(const System& sys, const std::vector<Int>& beta) {
  const std::size_t k = system_arity(sys);
  if (beta.size() != 1 && beta.size() != k)
    raise(Errc::arity_mismatch,
          "bounds must be a single value or one per coordinate");
  auto bound_for = [&](std::size_t j) {
    return beta.size() == 1 ? beta[0] : beta[j];
  };
  const auto* lin = std::get_if<LinearSystem>(&sys);
  const bool signed_domain =
      lin && lin->domain() == PointDomain::all_integer_points;
  Box box;
  for (std::size_t j = 0; j < k; ++j) {
    const Int b = bound_for(j);
    if (b < 0) raise(Errc::validation_error, "bounds must be >= 0");
    if (signed_domain)
      box.ranges.emplace_back(-b, b);
    else
      box.ranges.emplace_back(Int(1), b);
  }
  return box;
}

// Splits the first coordinate into fixed-size slabs so results merge in a
// canonical order independent of worker count.
std::vector<Box> split_box(const Box& box, std::size_t max_chunks = 256) {
  std::vector<Box> chunks;
  const Int lo = box.ranges[0].first;
  const Int hi = box.ranges[0].second;
  if (hi < lo) return chunks;
  Int len = hi - lo + 1;
  Int slab = (len + static_cast<long>(max_chunks) - 1) /
             static_cast<long>(max_chunks);
  if (slab < 1) slab = 1;
  for (Int start = lo; start <= hi; start += slab) {
    Box c = box;
    c.ranges[0] = {start, std::min(Int(start + slab - 1), hi)};
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace

CountReport psi_count(const System& sys, const std::vector<Int>& beta,
                      const SearchOptions& opts) {
  Box box = psi_box(sys, beta);
  CountReport report;
  report.kind = CountKind::psi;
  report.bounds = beta;

  const Int total = box_volume(box);
  if (total == 0) {
    report.exhaustive = true;
    return report;
  }

  if (total > opts.budget) {
    // Sequential partial scan up to the budget.
    BoxScan scan(sys, box);
    ScanStats stats;
    Int count = 0;
    scan.run(opts.budget,
             [&](const std::vector<Int>&, const std::vector<Int>&) {
               ++count;
               return true;
             },
             stats);
    report.count = count;
    report.points_sampled = stats.points;
    report.exhaustive = false;
    report.budget_exceeded = true;
    report.probable_prime_used = stats.probable_prime_used;
    // Mixed-radix decomposition of the next lexicographic index makes the
    // partial result resumable.
    Int idx = stats.points;
    std::vector<Int> resume(box.ranges.size());
    for (std::size_t j = box.ranges.size(); j-- > 0;) {
      Int len = box.ranges[j].second - box.ranges[j].first + 1;
      resume[j] = box.ranges[j].first + idx % len;
      idx /= len;
    }
    std::ostringstream os;
    os << "budget " << opts.budget << " of " << total
       << " points scanned; partial count only; resume at";
    for (const auto& r : resume) os << ' ' << r;
    report.note = os.str();
    return report;
  }

  auto chunks = split_box(box);
  std::vector<Int> counts(chunks.size(), Int(0));
  std::vector<Int> sampled(chunks.size(), Int(0));
  std::vector<char> probable(chunks.size(), 0);
  parallel_chunks(chunks.size(), opts.workers, [&](std::size_t c) {
    BoxScan scan(sys, chunks[c]);
    ScanStats stats;
    Int count = 0;
    scan.run(Int(0),
             [&](const std::vector<Int>&, const std::vector<Int>&) {
               ++count;
               return true;
             },
             stats);
    counts[c] = count;
    sampled[c] = stats.points;
    probable[c] = stats.probable_prime_used ? 1 : 0;
  });
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    report.count += counts[c];
    report.points_sampled += sampled[c];
    if (probable[c]) report.probable_prime_used = true;
  }
  report.exhaustive = true;
  return report;
}

namespace {

Box derive_omega_box(const System& sys, const std::vector<Int>& alpha) {
  const std::size_t k = system_arity(sys);
  auto bound_for = [&](std::size_t i) {
    return alpha.size() == 1 ? alpha[0] : alpha[i];
  };

  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    if (lin->domain() != PointDomain::positive_points)
      raise(Errc::underivable_box,
            "cannot derive a box on the all-integers domain; pass one");
    if (!lin->all_coeffs_nonnegative())
      raise(Errc::underivable_box,
            "cannot derive a box with mixed-sign coefficients; pass one");
    const std::size_t s = lin->size();
    Box box;
    for (std::size_t j = 0; j < k; ++j) {
      bool covered = false;
      Int best;
      for (std::size_t i = 0; i < s; ++i) {
        const Int& aij = lin->forms()[i].coeffs[j];
        if (aij <= 0) continue;
        // Other coordinates at their minimum of 1.
        Int rest = lin->forms()[i].constant;
        for (std::size_t l = 0; l < k; ++l)
          if (l != j) rest += lin->forms()[i].coeffs[l];
        Int room = bound_for(i) - rest;
        Int ub = 0;
        if (room >= aij)
          mpz_fdiv_q(ub.get_mpz_t(), room.get_mpz_t(), aij.get_mpz_t());
        best = covered ? std::min(best, ub) : ub;
        covered = true;
      }
      if (!covered)
        raise(Errc::underivable_box,
              "a variable appears in no form with positive coefficient");
      box.ranges.emplace_back(Int(1), best);
    }
    return box;
  }

  // Cauchy root bound per polynomial: beyond 1 + max|c_i - [i=0] alpha| / lc
  // the value strictly exceeds alpha (positive leading coefficient).
  const auto& ps = std::get<UniPolySystem>(sys);
  Int hi = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& c = ps.polys()[i].coeffs();
    const Int& lc = c.back();
    Int top = 0;
    for (std::size_t j = 0; j + 1 < c.size(); ++j) {
      Int v = abs(j == 0 ? Int(c[j] - bound_for(i)) : c[j]);
      top = std::max(top, v);
    }
    Int bound = 1 + (top + lc - 1) / lc;
    hi = std::max(hi, bound);
  }
  Box box;
  box.ranges.emplace_back(Int(1), hi);
  return box;
}

}  // namespace

CountReport omega_count(const System& sys, const std::vector<Int>& alpha,
                        const std::optional<Box>& box,
                        const SearchOptions& opts) {
  const std::size_t s = system_form_count(sys);
  if (alpha.size() != 1 && alpha.size() != s)
    raise(Errc::arity_mismatch,
          "alpha must be a single value or one per form");
  for (const auto& a : alpha)
    if (a < 0) raise(Errc::validation_error, "bounds must be >= 0");

  Box search_box;
  bool derived = false;
  if (box) {
    if (box->ranges.size() != system_arity(sys))
      raise(Errc::arity_mismatch, "box arity does not match the system");
    search_box = *box;
  } else {
    search_box = derive_omega_box(sys, alpha);
    derived = true;
  }

  CountReport report;
  report.kind = CountKind::omega;
  report.bounds = alpha;

  const Int total = box_volume(search_box);
  if (total > opts.budget)
    raise(Errc::budget_exceeded, "omega box exceeds the point budget");

  auto bound_for = [&](std::size_t i) {
    return alpha.size() == 1 ? alpha[0] : alpha[i];
  };

  auto chunks = split_box(search_box);
  std::vector<std::set<std::vector<Int>>> tuples(chunks.size());
  std::vector<Int> sampled(chunks.size(), Int(0));
  std::vector<Int> qualifying(chunks.size(), Int(0));
  std::vector<char> probable(chunks.size(), 0);
  parallel_chunks(chunks.size(), opts.workers, [&](std::size_t c) {
    BoxScan scan(sys, chunks[c]);
    ScanStats stats;
    scan.run(Int(0),
             [&](const std::vector<Int>&, const std::vector<Int>& values) {
               bool within = true;
               for (std::size_t i = 0; i < values.size(); ++i)
                 if (values[i] > bound_for(i)) {
                   within = false;
                   break;
                 }
               if (within) {
                 qualifying[c] += 1;
                 tuples[c].insert(values);
               }
               return true;
             },
             stats);
    sampled[c] = stats.points;
    probable[c] = stats.probable_prime_used ? 1 : 0;
  });

  std::set<std::vector<Int>> distinct;
  Int total_qualifying = 0;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    distinct.merge(tuples[c]);
    report.points_sampled += sampled[c];
    total_qualifying += qualifying[c];
    if (probable[c]) report.probable_prime_used = true;
  }
  report.count = static_cast<unsigned long>(distinct.size());
  report.exhaustive = derived;
  // Both numbers stay visible: lattice points with all values prime within
  // the bounds (psi-style, with multiplicity) and distinct value tuples.
  report.note = "qualifying lattice points " + total_qualifying.get_str() +
                "; distinct value tuples " +
                std::to_string(distinct.size());
  if (!derived)
    report.note += "; user-supplied box: completeness not established";
  return report;
}

LinearSystem chain_system(unsigned n) {
  if (n > 6)
    raise(Errc::validation_error, "chain systems supported for n <= 6");
  std::vector<AffineForm> forms;
  for (unsigned j = 0; j <= n; ++j) {
    Int coeff;
    mpz_ui_pow_ui(coeff.get_mpz_t(), 2, 1ull << j);
    forms.push_back(AffineForm{{coeff}, Int(1)});
  }
  return LinearSystem(std::move(forms), PointDomain::positive_points);
}

LeastSeedResult least_seed(const System& single_var, const Int& cap) {
  if (system_arity(single_var) != 1)
    raise(Errc::arity_mismatch, "least_seed needs a single-variable system");
  if (cap < 1) raise(Errc::validation_error, "cap must be >= 1");

  LeastSeedResult result;
  result.cap = cap;
  for (Int x = 1; x <= cap; ++x) {
    std::vector<Int> values = evaluate(single_var, {x});
    bool all_prime = true;
    bool probable = false;
    for (const auto& v : values) {
      if (v < 2) {
        all_prime = false;
        break;
      }
      auto cls = classify_prime(v);
      if (cls == Primality::composite) {
        all_prime = false;
        break;
      }
      if (cls == Primality::probable_prime) probable = true;
    }
    if (all_prime) {
      result.seed = x;
      result.values = std::move(values);
      result.probable_prime_used = probable;
      return result;
    }
  }
  return result;
}

std::vector<PrimePoint> enumerate_prime_points(const System& sys,
                                               const Box& region,
                                               std::uint64_t limit,
                                               const SearchOptions& opts) {
  if (region.ranges.size() != system_arity(sys))
    raise(Errc::arity_mismatch, "region arity does not match the system");
  if (const auto* lin = std::get_if<LinearSystem>(&sys);
      lin && lin->domain() == PointDomain::positive_points)
    for (const auto& [lo, hi] : region.ranges) {
      (void)hi;
      if (lo < 1)
        raise(Errc::domain_violation,
              "region extends below 1 on the positive-points domain");
    }
  if (box_volume(region) > opts.budget)
    raise(Errc::budget_exceeded, "region exceeds the point budget");

  std::vector<PrimePoint> out;
  BoxScan scan(sys, region);
  ScanStats stats;
  scan.run(Int(0),
           [&](const std::vector<Int>& p, const std::vector<Int>& v) {
             PrimePoint pp{p, v};
             if (!validate_prime_point(sys, pp))
               raise(Errc::validation_error,
                     "internal error: emitted point failed re-validation");
             out.push_back(std::move(pp));
             return limit == 0 || out.size() < limit;
           },
           stats);
  return out;
}

bool validate_prime_point(const System& sys, const PrimePoint& pp) {
  // Independent of the scan path: direct evaluation and primality per value.
  if (pp.point.size() != system_arity(sys)) return false;
  std::vector<Int> expect;
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    if (pp.values.size() != lin->size()) return false;
    for (const auto& f : lin->forms()) {
      Int v = f.constant;
      for (std::size_t j = 0; j < lin->arity(); ++j)
        v += f.coeffs[j] * pp.point[j];
      expect.push_back(v);
    }
  } else {
    const auto& ps = std::get<UniPolySystem>(sys);
    if (pp.values.size() != ps.size()) return false;
    for (const auto& poly : ps.polys()) {
      Int v = 0;
      const auto& c = poly.coeffs();
      for (std::size_t i = c.size(); i-- > 0;) v = v * pp.point[0] + c[i];
      expect.push_back(v);
    }
  }
  for (std::size_t i = 0; i < expect.size(); ++i) {
    if (expect[i] != pp.values[i]) return false;
    if (expect[i] < 2) return false;
    if (classify_prime(expect[i]) == Primality::composite) return false;
  }
  return true;
}

std::string format_prime_point(const PrimePoint& pp) {
  std::ostringstream os;
  for (std::size_t i = 0; i < pp.point.size(); ++i) {
    if (i) os << ' ';
    os << pp.point[i];
  }
  os << " :";
  for (const auto& v : pp.values) os << ' ' << v;
  return os.str();
}

}  // namespace constel
