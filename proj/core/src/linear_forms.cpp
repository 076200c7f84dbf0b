#include "constel/linear_forms.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "constel/integer.hpp"

namespace constel {

namespace {

bool proportional(const AffineForm& f, const AffineForm& g) {
  // (coeffs, constant) vectors proportional over Q: all 2x2 minors vanish.
  const std::size_t k = f.coeffs.size();
  std::vector<const Int*> a(k + 1), b(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    a[i] = &f.coeffs[i];
    b[i] = &g.coeffs[i];
  }
  a[k] = &f.constant;
  b[k] = &g.constant;
  for (std::size_t i = 0; i <= k; ++i)
    for (std::size_t j = i + 1; j <= k; ++j)
      if (*a[i] * *b[j] != *a[j] * *b[i]) return false;
  return true;
}

}  // namespace

LinearSystem::LinearSystem(std::vector<AffineForm> forms, PointDomain domain)
    : forms_(std::move(forms)), domain_(domain) {
  if (forms_.empty())
    raise(Errc::validation_error, "a linear system needs at least one form");
  arity_ = forms_.front().coeffs.size();
  if (arity_ == 0)
    raise(Errc::validation_error, "forms need at least one variable");
  all_nonneg_ = true;
  for (const auto& f : forms_) {
    if (f.coeffs.size() != arity_)
      raise(Errc::validation_error, "all forms must share the same arity");
    bool nonzero = false;
    for (const auto& c : f.coeffs) {
      if (c != 0) nonzero = true;
      if (c < 0) all_nonneg_ = false;
    }
    if (!nonzero)
      raise(Errc::validation_error,
            "constant form rejected (every coefficient is zero)");
  }
  for (std::size_t i = 0; i < forms_.size(); ++i)
    for (std::size_t j = i + 1; j < forms_.size(); ++j) {
      if (forms_[i] == forms_[j])
        raise(Errc::validation_error, "duplicate forms rejected");
      if (proportional(forms_[i], forms_[j])) {
        std::ostringstream os;
        os << "forms " << i << " and " << j
           << " are rational multiples of each other";
        warnings_.push_back(os.str());
      }
    }
}

UniPoly::UniPoly(std::vector<Int> coeffs_low_to_high)
    : coeffs_(std::move(coeffs_low_to_high)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() < 2)
    raise(Errc::validation_error, "polynomial degree must be >= 1");
  if (coeffs_.back() <= 0)
    raise(Errc::validation_error, "leading coefficient must be positive");
}

Int UniPoly::eval(const Int& x) const {
  Int acc = 0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
  return acc;
}

Int UniPoly::content() const {
  Int g = 0;
  for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

UniPolySystem::UniPolySystem(std::vector<UniPoly> polys)
    : polys_(std::move(polys)) {
  if (polys_.empty())
    raise(Errc::validation_error, "a polynomial system needs at least one polynomial");
  for (std::size_t i = 0; i < polys_.size(); ++i)
    for (std::size_t j = i + 1; j < polys_.size(); ++j)
      if (polys_[i] == polys_[j])
        raise(Errc::validation_error, "duplicate polynomials rejected");
}

std::uint64_t UniPolySystem::degree_sum() const {
  std::uint64_t d = 0;
  for (const auto& p : polys_) d += p.degree();
  return d;
}

std::vector<Int> evaluate(const LinearSystem& sys, const std::vector<Int>& point) {
  if (point.size() != sys.arity())
    raise(Errc::arity_mismatch, "point length does not match system arity");
  if (sys.domain() == PointDomain::positive_points)
    for (const auto& x : point)
      if (x < 1)
        raise(Errc::domain_violation,
              "system domain is positive points; coordinate < 1");
  std::vector<Int> values;
  values.reserve(sys.size());
  for (const auto& f : sys.forms()) {
    Int v = f.constant;
    for (std::size_t j = 0; j < point.size(); ++j) v += f.coeffs[j] * point[j];
    values.push_back(v);
  }
  return values;
}

std::vector<Int> evaluate(const UniPolySystem& sys, const Int& x) {
  std::vector<Int> values;
  values.reserve(sys.size());
  for (const auto& p : sys.polys()) values.push_back(p.eval(x));
  return values;
}

std::vector<Int> evaluate(const System& sys, const std::vector<Int>& point) {
  if (const auto* lin = std::get_if<LinearSystem>(&sys))
    return evaluate(*lin, point);
  const auto& poly = std::get<UniPolySystem>(sys);
  if (point.size() != 1)
    raise(Errc::arity_mismatch, "polynomial systems take a single coordinate");
  return evaluate(poly, point[0]);
}

Int local_count_by_enumeration(const LinearSystem& sys, std::uint64_t p) {
  const std::size_t k = sys.arity();
  const std::size_t s = sys.size();
  // Coefficients reduced mod p once.
  std::vector<std::vector<std::uint64_t>> a(s, std::vector<std::uint64_t>(k));
  std::vector<std::uint64_t> b(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      a[i][j] = mpz_fdiv_ui(sys.forms()[i].coeffs[j].get_mpz_t(), p);
    b[i] = mpz_fdiv_ui(sys.forms()[i].constant.get_mpz_t(), p);
  }
  std::vector<std::uint64_t> x(k, 0);
  Int count = 0;
  for (;;) {
    bool zero = false;
    for (std::size_t i = 0; i < s && !zero; ++i) {
      std::uint64_t v = b[i];
      for (std::size_t j = 0; j < k; ++j) v += a[i][j] % p * (x[j] % p) % p;
      if (v % p == 0) zero = true;
    }
    if (zero) ++count;
    std::size_t d = 0;
    while (d < k) {
      if (++x[d] < p) break;
      x[d] = 0;
      ++d;
    }
    if (d == k) break;
  }
  return count;
}

namespace {

// Reduced form over F_p: c[0..k-1] coefficients, c[k] constant.
struct ModForm {
  std::vector<std::uint64_t> row;  // length k+1
  bool identically_zero;           // all coeffs and constant == 0 mod p
  bool empty_zero_set;             // coeffs == 0, constant != 0
};

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
  // p prime, a != 0 mod p.
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a % p);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(t);
}

// Rank of the homogeneous part and consistency of { rows = 0 } over F_p.
// Returns {rank, consistent}.
std::pair<unsigned, bool> solve_mod_p(std::vector<std::vector<std::uint64_t>> m,
                                      std::size_t k, std::uint64_t p) {
  unsigned rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[row], m[pivot]);
    const std::uint64_t inv = mod_inverse(m[row][col], p);
    for (std::size_t c = col; c <= k; ++c)
      m[row][c] = m[row][c] * inv % p;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const std::uint64_t f = m[r][col];
      for (std::size_t c = col; c <= k; ++c)
        m[r][c] = (m[r][c] + (p - f) * m[row][c]) % p;
    }
    ++row;
    ++rank;
  }
  for (std::size_t r = row; r < m.size(); ++r)
    if (m[r][k] != 0) return {rank, false};
  return {rank, true};
}

}  // namespace

Int local_count_by_inclusion_exclusion(const LinearSystem& sys, std::uint64_t p) {
  const std::size_t k = sys.arity();
  const std::size_t s = sys.size();
  std::vector<ModForm> forms(s);
  for (std::size_t i = 0; i < s; ++i) {
    auto& mf = forms[i];
    mf.row.resize(k + 1);
    bool coeffs_zero = true;
    for (std::size_t j = 0; j < k; ++j) {
      mf.row[j] = mpz_fdiv_ui(sys.forms()[i].coeffs[j].get_mpz_t(), p);
      if (mf.row[j] != 0) coeffs_zero = false;
    }
    // Augmented column carries -constant so rows read "coeffs . x = rhs".
    std::uint64_t c = mpz_fdiv_ui(sys.forms()[i].constant.get_mpz_t(), p);
    mf.row[k] = (p - c) % p;
    mf.identically_zero = coeffs_zero && c == 0;
    mf.empty_zero_set = coeffs_zero && c != 0;
    if (mf.identically_zero) {
      // One factor vanishes everywhere: v(p) = p^k.
      Int pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
      return pk;
    }
  }

  // Union of affine subspaces by inclusion-exclusion over nonempty subsets.
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < s; ++i)
    if (!forms[i].empty_zero_set) active.push_back(i);

  Int total = 0;
  const std::size_t n = active.size();
  if (n > 24)
    raise(Errc::budget_exceeded, "too many forms for subset inclusion-exclusion");
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    std::vector<std::vector<std::uint64_t>> rows;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) rows.push_back(forms[active[i]].row);
    const bool odd = __builtin_popcountll(mask) & 1;
    auto [rank, consistent] = solve_mod_p(std::move(rows), k, p);
    if (!consistent) continue;
    Int cnt;
    mpz_ui_pow_ui(cnt.get_mpz_t(), p, static_cast<unsigned long>(k - rank));
    if (odd)
      total += cnt;
    else
      total -= cnt;
  }
  return total;
}

Int local_count(const LinearSystem& sys, std::uint64_t p,
                std::uint64_t enumeration_budget) {
  if (!is_prime_u64(p)) raise(Errc::validation_error, "local_count needs a prime");
  // p^k within budget -> enumerate, else exact inclusion-exclusion.
  long double size = 1;
  for (std::size_t i = 0; i < sys.arity(); ++i) size *= static_cast<long double>(p);
  if (size <= static_cast<long double>(enumeration_budget))
    return local_count_by_enumeration(sys, p);
  return local_count_by_inclusion_exclusion(sys, p);
}

namespace {

Int form_content(const AffineForm& f) {
  Int g = 0;
  for (const auto& c : f.coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), f.constant.get_mpz_t());
  return g;
}

std::uint64_t least_prime_factor_u64(const Int& n) {
  auto factors = factorize(n);
  return static_cast<std::uint64_t>(mpz_get_ui(factors.front().first.get_mpz_t()));
}

}  // namespace

AdmissibilityReport is_admissible(const LinearSystem& sys) {
  AdmissibilityReport report;
  report.warnings = sys.warnings();
  const std::size_t s = sys.size();
  const std::size_t k = sys.arity();

  std::vector<std::uint64_t> primes_to_check =
      primes_up_to(static_cast<std::uint64_t>(s));
  // A form with content > 1 forces every prime of that content.
  for (const auto& f : sys.forms()) {
    Int c = form_content(f);
    if (c > 1) {
      std::uint64_t lp = least_prime_factor_u64(c);
      if (std::find(primes_to_check.begin(), primes_to_check.end(), lp) ==
          primes_to_check.end())
        primes_to_check.push_back(lp);
    }
  }
  std::sort(primes_to_check.begin(), primes_to_check.end());

  Int pk;
  std::optional<std::uint64_t> obstruction;
  for (std::uint64_t p : primes_to_check) {
    Int v = local_count(sys, p);
    report.local_counts[p] = v;
    report.checked_primes.push_back(p);
    mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(k));
    if (v == pk && !obstruction) obstruction = p;
  }

  std::ostringstream just;
  just << "definition: fixed-divisor (no prime p with v(p) = p^k); "
          "checked p <= s = " << s
       << " plus content primes: a product of " << s
       << " forms, none identically zero mod p, has degree " << s
       << " < p and cannot vanish on all of F_p^" << k << " for p > " << s
       << ".";
  report.justification = just.str();

  if (obstruction) {
    report.verdict = Verdict::fixed_divisor;
    report.obstruction_prime = obstruction;
  } else {
    report.verdict = Verdict::admissible;
  }
  return report;
}

std::uint64_t poly_local_count(const UniPolySystem& sys, std::uint64_t p) {
  if (!is_prime_u64(p))
    raise(Errc::validation_error, "poly_local_count needs a prime");
  const std::size_t s = sys.size();
  // Coefficients reduced mod p once; Horner per residue.
  std::vector<std::vector<std::uint64_t>> coeffs(s);
  for (std::size_t i = 0; i < s; ++i) {
    const auto& c = sys.polys()[i].coeffs();
    coeffs[i].resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j)
      coeffs[i][j] = mpz_fdiv_ui(c[j].get_mpz_t(), p);
  }
  std::uint64_t count = 0;
  for (std::uint64_t r = 0; r < p; ++r) {
    bool zero = false;
    for (std::size_t i = 0; i < s && !zero; ++i) {
      const auto& c = coeffs[i];
      unsigned __int128 acc = 0;
      for (std::size_t j = c.size(); j-- > 0;)
        acc = (acc * r + c[j]) % p;
      if (acc == 0) zero = true;
    }
    if (zero) ++count;
  }
  return count;
}

AdmissibilityReport poly_is_admissible(const UniPolySystem& sys,
                                       std::uint64_t prime_bound) {
  if (prime_bound < 2)
    raise(Errc::validation_error, "prime_bound must be >= 2");
  AdmissibilityReport report;
  const std::uint64_t bound = std::max<std::uint64_t>(sys.degree_sum(), prime_bound);

  std::vector<std::uint64_t> primes_to_check = primes_up_to(bound);
  for (const auto& poly : sys.polys()) {
    Int c = poly.content();
    if (c > 1) {
      std::uint64_t lp = least_prime_factor_u64(c);
      if (std::find(primes_to_check.begin(), primes_to_check.end(), lp) ==
          primes_to_check.end())
        primes_to_check.push_back(lp);
    }
  }
  std::sort(primes_to_check.begin(), primes_to_check.end());

  std::optional<std::uint64_t> obstruction;
  for (std::uint64_t p : primes_to_check) {
    std::uint64_t v = poly_local_count(sys, p);
    report.local_counts[p] = Int(v);
    report.checked_primes.push_back(p);
    if (v == p && !obstruction) obstruction = p;
  }

  std::ostringstream just;
  just << "definition: fixed-divisor (no prime p with v(p) = p); checked p <= "
       << bound
       << " = max(degree sum, prime_bound) plus content primes; a fixed prime "
          "divisor of a product of degree "
       << sys.degree_sum()
       << " must divide a content or be at most the degree sum. "
          "Irreducibility of the inputs is an unchecked assumption.";
  report.justification = just.str();

  if (obstruction) {
    report.verdict = Verdict::fixed_divisor;
    report.obstruction_prime = obstruction;
  }
  return report;
}

namespace {

struct ParseCursor {
  std::string_view text;
  std::size_t pos = 0;
  int line_no = 0;

  // Next non-empty, non-comment line; nullopt at end of input.
  std::optional<std::string> next_line() {
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string line(text.substr(pos, eol - pos));
      pos = eol + 1;
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.resize(hash);
      // Trim.
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto last = line.find_last_not_of(" \t\r");
      return line.substr(first, last - first + 1);
    }
    return std::nullopt;
  }
};

std::vector<Int> parse_int_row(const std::string& line, int line_no) {
  std::istringstream is(line);
  std::vector<Int> row;
  std::string tok;
  while (is >> tok) {
    try {
      row.emplace_back(tok);
    } catch (const std::invalid_argument&) {
      raise(Errc::parse_error,
            "line " + std::to_string(line_no) + ": not an integer: " + tok);
    }
  }
  return row;
}

}  // namespace

System parse_system(std::string_view text) {
  ParseCursor cur{text};
  auto header = cur.next_line();
  if (!header) raise(Errc::parse_error, "empty system description");

  std::istringstream hs(*header);
  std::string kind, flag;
  hs >> kind >> flag;

  if (kind == "linear") {
    PointDomain domain;
    if (flag == "1")
      domain = PointDomain::positive_points;
    else if (flag == "0")
      domain = PointDomain::all_integer_points;
    else
      raise(Errc::parse_error,
            "line " + std::to_string(cur.line_no) +
                ": domain flag must be 1 (positive points) or 0 (all integer "
                "points)");
    std::vector<AffineForm> forms;
    std::optional<std::size_t> arity;
    while (auto line = cur.next_line()) {
      auto row = parse_int_row(*line, cur.line_no);
      if (row.size() < 2)
        raise(Errc::parse_error,
              "line " + std::to_string(cur.line_no) +
                  ": a form needs at least one coefficient and a constant");
      if (!arity) arity = row.size() - 1;
      if (row.size() - 1 != *arity)
        raise(Errc::validation_error,
              "line " + std::to_string(cur.line_no) + ": arity mismatch");
      AffineForm f;
      f.constant = row.back();
      row.pop_back();
      f.coeffs = std::move(row);
      forms.push_back(std::move(f));
    }
    if (forms.empty()) raise(Errc::parse_error, "no forms in linear system");
    return LinearSystem(std::move(forms), domain);
  }

  if (kind == "poly") {
    if (!flag.empty())
      raise(Errc::parse_error, "poly header takes no flag");
    std::vector<UniPoly> polys;
    while (auto line = cur.next_line()) {
      auto row = parse_int_row(*line, cur.line_no);
      if (row.size() < 2)
        raise(Errc::parse_error,
              "line " + std::to_string(cur.line_no) +
                  ": a polynomial needs degree >= 1 (at least two coefficients)");
      std::reverse(row.begin(), row.end());  // file stores highest degree first
      polys.emplace_back(std::move(row));
    }
    if (polys.empty()) raise(Errc::parse_error, "no polynomials in system");
    return UniPolySystem(std::move(polys));
  }

  raise(Errc::parse_error, "unknown system kind: " + kind);
}

std::string serialize_system(const System& sys) {
  std::ostringstream os;
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    os << "linear "
       << (lin->domain() == PointDomain::positive_points ? 1 : 0) << "\n";
    for (const auto& f : lin->forms()) {
      for (const auto& c : f.coeffs) os << c << ' ';
      os << f.constant << "\n";
    }
  } else {
    const auto& ps = std::get<UniPolySystem>(sys);
    os << "poly\n";
    for (const auto& p : ps.polys()) {
      const auto& c = p.coeffs();
      for (std::size_t i = c.size(); i-- > 0;) {
        os << c[i];
        os << (i == 0 ? '\n' : ' ');
      }
    }
  }
  return os.str();
}

std::string system_hash(const System& sys) {
  const std::string text = serialize_system(sys);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace constel
