#ifndef CONSTEL_PRIME_SEARCH_HPP
#define CONSTEL_PRIME_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "constel/common.hpp"
#include "constel/linear_forms.hpp"

namespace constel {

// Inclusive per-coordinate ranges.
struct Box {
  std::vector<std::pair<Int, Int>> ranges;
};

struct PrimePoint {
  std::vector<Int> point;
  std::vector<Int> values;
};

enum class CountKind { psi, omega };

struct CountReport {
  CountKind kind = CountKind::psi;
  std::vector<Int> bounds;   // per-coordinate (psi) or per-value (omega)
  Int count;
  Int points_sampled;
  bool exhaustive = false;
  bool budget_exceeded = false;
  bool probable_prime_used = false;
  std::string note;
};

struct SearchOptions {
  Int budget = Int(1000000000);  // total points per scan
  unsigned workers = 1;
};

// Psi: lattice points in the box whose form values are all prime.  The box is
// the positive orthant [1, beta_i] on N^k and the symmetric box [-beta_i,
// beta_i] on Z^k.  A single bound broadcasts to every coordinate.
CountReport psi_count(const System& sys, const std::vector<Int>& beta,
                      const SearchOptions& opts = {});

// Omega: distinct prime value tuples with every value <= alpha_i (set
// semantics; several lattice points may map to one prime point).  With no
// explicit box, one is derived when the coefficients allow it; the report is
// marked exhaustive only in that case.
CountReport omega_count(const System& sys, const std::vector<Int>& alpha,
                        const std::optional<Box>& box = std::nullopt,
                        const SearchOptions& opts = {});

// Forms 1 + 2^(2^j) x for j = 0..n.
LinearSystem chain_system(unsigned n);

struct LeastSeedResult {
  std::optional<Int> seed;
  std::vector<Int> values;
  bool probable_prime_used = false;
  Int cap;
};

// Least x in [1, cap] with every form value prime.
LeastSeedResult least_seed(const System& single_var, const Int& cap);

// Ascending lexicographic stream of prime points in the region, truncated at
// limit (0 = no limit).  Every emitted point is re-validated.
std::vector<PrimePoint> enumerate_prime_points(const System& sys,
                                               const Box& region,
                                               std::uint64_t limit = 0,
                                               const SearchOptions& opts = {});

// Independent re-check of a prime point; shares no code with enumeration.
bool validate_prime_point(const System& sys, const PrimePoint& pp);

// "x_1 ... x_k : v_1 ... v_s"
std::string format_prime_point(const PrimePoint& pp);

}  // namespace constel

#endif
