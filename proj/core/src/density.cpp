#include "constel/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "constel/integer.hpp"
#include "constel/parallel.hpp"

namespace constel {

namespace {

using u64 = std::uint64_t;

const char* FRIEDLANDER_GRANVILLE_CAVEAT =
    "Caveat (Friedlander-Granville): Bateman-Horn's asymptotic formula does "
    "not always hold.";

void require_single_variable(const System& sys) {
  if (const auto* lin = std::get_if<LinearSystem>(&sys)) {
    if (lin->arity() != 1)
      raise(Errc::validation_error,
            "singular series is defined here for single-variable systems "
            "only (no multivariable local-factor formula is implemented)");
  }
}

// v(p) for a single-variable linear system: distinct roots of the forms.
u64 linear_v_of_p(const LinearSystem& sys, u64 p) {
  // Form c*x + b: root -b/c when p does not divide c; p | c forces either no
  // root (p does not divide b) or everything (p divides the content, which
  // admissibility screening reports).
  std::vector<u64> roots;
  for (const auto& f : sys.forms()) {
    u64 c = mpz_fdiv_ui(f.coeffs[0].get_mpz_t(), p);
    u64 b = mpz_fdiv_ui(f.constant.get_mpz_t(), p);
    if (c == 0) {
      if (b == 0) return p;
      continue;
    }
    // Root = -b * c^{-1} mod p via Fermat.
    u64 inv = 1, base = c, e = p - 2;
    while (e) {
      if (e & 1) inv = (unsigned __int128)inv * base % p;
      base = (unsigned __int128)base * base % p;
      e >>= 1;
    }
    roots.push_back((unsigned __int128)(p - b) % p * inv % p);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots.size();
}

u64 v_of_p(const System& sys, u64 p) {
  if (const auto* lin = std::get_if<LinearSystem>(&sys))
    return linear_v_of_p(*lin, p);
  return poly_local_count(std::get<UniPolySystem>(sys), p);
}

double pow_int(double base, unsigned e) {
  double r = 1.0;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

SeriesResult singular_series(const System& single_var, std::uint64_t P,
                             unsigned workers) {
  if (P < 2) raise(Errc::validation_error, "truncation prime must be >= 2");
  require_single_variable(single_var);

  const unsigned m = static_cast<unsigned>(system_form_count(single_var));

  if (std::holds_alternative<UniPolySystem>(single_var)) {
    // Exhaustive residue scans cost sum of p <= P.
    const long double est = static_cast<long double>(P) * P / 2.0L;
    if (est > 2e10L)
      raise(Errc::budget_exceeded,
            "polynomial v(p) scans would exceed the budget at this truncation");
  }

  SeriesResult result;
  result.truncation_prime = P;

  const std::vector<u64> primes = primes_up_to(P);
  if (primes.empty()) {
    result.value = 1.0;
    return result;
  }

  // Fixed chunking keeps products associatively identical for any worker
  // count.
  constexpr std::size_t CHUNK = 16384;
  const std::size_t chunk_count = (primes.size() + CHUNK - 1) / CHUNK;
  std::vector<double> partial(chunk_count, 1.0);
  std::vector<u64> vanish(chunk_count, 0);
  std::vector<double> last_in_chunk(chunk_count, 1.0);

  parallel_chunks(chunk_count, workers, [&](std::size_t c) {
    const std::size_t lo = c * CHUNK;
    const std::size_t hi = std::min(primes.size(), lo + CHUNK);
    double acc = 1.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const u64 p = primes[i];
      const u64 v = v_of_p(single_var, p);
      if (v >= p) {
        if (vanish[c] == 0) vanish[c] = p;
        acc = 0.0;
        last_in_chunk[c] = 0.0;
        continue;
      }
      const double pd = static_cast<double>(p);
      const double numer = 1.0 - static_cast<double>(v) / pd;
      const double denom = 1.0 - 1.0 / pd;
      const double factor = numer / pow_int(denom, m);
      acc *= factor;
      last_in_chunk[c] = factor;
    }
    partial[c] = acc;
  });

  double value = 1.0;
  for (std::size_t c = 0; c < chunk_count; ++c) {
    value *= partial[c];
    if (vanish[c] != 0) {
      result.inadmissible_zero = true;
      if (result.vanishing_prime == 0) result.vanishing_prime = vanish[c];
    }
  }
  result.value = result.inadmissible_zero ? 0.0 : value;
  result.last_factor = last_in_chunk.back();
  return result;
}

double log_integral(double beta, unsigned m) {
  if (beta <= 2.0) return 0.0;
  const auto f = [m](double t) { return 1.0 / pow_int(std::log(t), m); };
  // Adaptive Simpson.
  struct Simpson {
    double operator()(const std::function<double(double)>& g, double a,
                      double b, double fa, double fb, double fm, double whole,
                      double eps, int depth) const {
      const double mid = 0.5 * (a + b);
      const double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
      const double flm = g(lm), frm = g(rm);
      const double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
      const double delta = left + right - whole;
      if (depth <= 0 || std::fabs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
      return operator()(g, a, mid, fa, fm, flm, left, 0.5 * eps, depth - 1) +
             operator()(g, mid, b, fm, fb, frm, right, 0.5 * eps, depth - 1);
    }
  };
  const double a = 2.0, b = beta;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  // Absolute tolerance scaled to the crude estimate keeps the relative error
  // well under 1e-6.
  const double eps = std::max(1e-12, std::fabs(whole) * 1e-9);
  return Simpson{}(f, a, b, fa, fb, fm, whole, eps, 48);
}

DensityEstimate predicted_count(const System& single_var, double beta,
                                std::uint64_t P, Normalization normalization,
                                unsigned workers) {
  if (beta < 2.0) raise(Errc::validation_error, "beta must be >= 2");
  auto series = singular_series(single_var, P, workers);

  DensityEstimate est;
  est.truncation_prime = P;
  est.series_value = series.value;
  est.normalization = normalization;
  est.beta = beta;
  est.inadmissible = series.inadmissible_zero;
  est.last_factor = series.last_factor;

  const unsigned m = static_cast<unsigned>(system_form_count(single_var));
  est.degree_factor = 1.0;
  if (const auto* ps = std::get_if<UniPolySystem>(&single_var)) {
    for (const auto& p : ps->polys())
      est.degree_factor *= static_cast<double>(p.degree());
  }

  if (est.inadmissible) {
    est.predicted_count = 0.0;
    return est;
  }

  double main = 0.0;
  if (normalization == Normalization::power_of_log)
    main = beta / pow_int(std::log(beta), m);
  else
    main = log_integral(beta, m);
  est.predicted_count = series.value * main / est.degree_factor;
  return est;
}

ComparisonReport compare(const System& single_var,
                         const std::vector<double>& betas, std::uint64_t P,
                         Normalization normalization,
                         const SearchOptions& search) {
  if (betas.empty())
    raise(Errc::validation_error, "compare needs at least one beta sample");

  ComparisonReport report;
  report.truncation_prime = P;
  report.normalization = normalization;

  bool first = true;
  for (double beta : betas) {
    DensityEstimate est =
        predicted_count(single_var, beta, P, normalization, search.workers);
    if (first) {
      report.series_value = est.series_value;
      report.last_factor = est.last_factor;
      report.inadmissible = est.inadmissible;
      report.degree_factor = est.degree_factor;
      first = false;
    }
    Int bound(static_cast<unsigned long>(beta));
    auto exact = psi_count(single_var, {bound}, search);
    ComparisonRow row;
    row.beta = beta;
    row.exact = exact.count;
    row.predicted = est.predicted_count;
    row.ratio = exact.count > 0
                    ? est.predicted_count / exact.count.get_d()
                    : std::numeric_limits<double>::quiet_NaN();
    report.rows.push_back(std::move(row));
  }

  std::ostringstream trunc;
  trunc << "singular series truncated at P = " << P
        << "; last factor " << report.last_factor;
  report.notes.push_back(trunc.str());
  report.notes.push_back(FRIEDLANDER_GRANVILLE_CAVEAT);
  if (report.inadmissible)
    report.notes.push_back("system is inadmissible; prediction is 0");
  return report;
}

const char* normalization_name(Normalization n) {
  return n == Normalization::power_of_log ? "PowerOfLog" : "LogIntegral";
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string render_comparison_text(const ComparisonReport& report) {
  std::ostringstream os;
  os << "normalization    " << normalization_name(report.normalization) << "\n";
  os << "truncation_prime " << report.truncation_prime << "\n";
  os << "series_value     " << fmt_double(report.series_value) << "\n";
  if (report.degree_factor != 1.0)
    os << "degree_factor    " << fmt_double(report.degree_factor) << "\n";
  char head[128];
  std::snprintf(head, sizeof head, "%14s %14s %16s %10s", "beta", "exact",
                "predicted", "ratio");
  os << head << "\n";
  for (const auto& row : report.rows) {
    std::ostringstream exact;
    exact << row.exact;
    char line[160];
    std::snprintf(line, sizeof line, "%14.6g %14s %16.6f %10.6f", row.beta,
                  exact.str().c_str(), row.predicted, row.ratio);
    os << line << "\n";
  }
  for (const auto& note : report.notes) os << "note: " << note << "\n";
  return os.str();
}

std::string render_comparison_csv(const ComparisonReport& report) {
  std::ostringstream os;
  os << "beta,exact,predicted,ratio,series_value,truncation_prime,"
        "normalization\n";
  for (const auto& row : report.rows) {
    os << fmt_double(row.beta) << ',' << row.exact << ','
       << fmt_double(row.predicted) << ',' << fmt_double(row.ratio) << ','
       << fmt_double(report.series_value) << ',' << report.truncation_prime
       << ',' << normalization_name(report.normalization) << "\n";
  }
  return os.str();
}

}  // namespace constel
