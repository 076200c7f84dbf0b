#ifndef CONSTEL_DENSITY_HPP
#define CONSTEL_DENSITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "constel/common.hpp"
#include "constel/linear_forms.hpp"
#include "constel/prime_search.hpp"

namespace constel {

enum class Normalization { power_of_log, log_integral };

struct SeriesResult {
  double value = 0.0;
  std::uint64_t truncation_prime = 0;
  double last_factor = 1.0;  // factor at the largest prime used
  bool inadmissible_zero = false;
  std::uint64_t vanishing_prime = 0;  // v(p) = p here when inadmissible
};

// Truncated Euler product prod_{p <= P} (1 - v(p)/p) (1 - 1/p)^{-m} for a
// single-variable system of m forms (or polynomials).  Factors are multiplied
// in ascending p within fixed-size chunks, so the value is bit-identical for
// any worker count.  Inadmissible systems yield exactly 0 with a flag rather
// than an error.
SeriesResult singular_series(const System& single_var, std::uint64_t P,
                             unsigned workers = 1);

struct DensityEstimate {
  std::uint64_t truncation_prime = 0;
  double series_value = 0.0;
  Normalization normalization = Normalization::log_integral;
  double predicted_count = 0.0;
  double beta = 0.0;
  bool inadmissible = false;
  double degree_factor = 1.0;  // prod d_i for polynomial systems
  double last_factor = 1.0;
};

// power_of_log: S * beta / (ln beta)^m; log_integral: S * int_2^beta dt /
// (ln t)^m.  Polynomial systems divide by prod d_i.
DensityEstimate predicted_count(const System& single_var, double beta,
                                std::uint64_t P, Normalization normalization,
                                unsigned workers = 1);

struct ComparisonRow {
  double beta = 0.0;
  Int exact;
  double predicted = 0.0;
  double ratio = 0.0;  // predicted / exact; NaN when exact is 0
};

struct ComparisonReport {
  std::uint64_t truncation_prime = 0;
  Normalization normalization = Normalization::log_integral;
  double series_value = 0.0;
  double last_factor = 1.0;
  bool inadmissible = false;
  double degree_factor = 1.0;
  std::vector<ComparisonRow> rows;
  std::vector<std::string> notes;
};

// Joins exact psi counts with predictions at each beta sample.
ComparisonReport compare(const System& single_var,
                         const std::vector<double>& betas, std::uint64_t P,
                         Normalization normalization,
                         const SearchOptions& search = {});

std::string render_comparison_text(const ComparisonReport& report);
std::string render_comparison_csv(const ComparisonReport& report);

// int_2^beta dt / (ln t)^m by adaptive Simpson; relative error < 1e-6.
double log_integral(double beta, unsigned m);

const char* normalization_name(Normalization n);

}  // namespace constel

#endif
