// constel: admissibility checks, witness certificates, CRT constructions,
// prime-point counting and density comparisons for affine-linear systems.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "constel/density.hpp"
#include "constel/integer.hpp"
#include "constel/lemmas.hpp"
#include "constel/linear_forms.hpp"
#include "constel/parallel.hpp"
#include "constel/prime_search.hpp"
#include "constel/residue_witness.hpp"

namespace {

using namespace constel;

constexpr int EXIT_OK = 0;
constexpr int EXIT_NEGATIVE = 1;
constexpr int EXIT_USAGE = 2;
constexpr int EXIT_BUDGET = 3;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::not_admissible:
      return EXIT_NEGATIVE;
    case Errc::budget_exceeded:
    case Errc::inconclusive:
    case Errc::factorization_too_hard:
    case Errc::overflow:
      return EXIT_BUDGET;
    default:
      return EXIT_USAGE;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::usage_error, "cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::usage_error, "cannot write file: " + path);
  out << content;
}

System load_system(const std::string& path) {
  return parse_system(read_file(path));
}

LinearSystem load_linear(const std::string& path) {
  System sys = load_system(path);
  if (!std::holds_alternative<LinearSystem>(sys))
    raise(Errc::usage_error, "this command needs an affine-linear system");
  return std::get<LinearSystem>(std::move(sys));
}

// "r%q" e.g. 5%6.
ResidueConstraint parse_congruence(const std::string& text) {
  auto sep = text.find('%');
  if (sep == std::string::npos)
    raise(Errc::usage_error, "congruence format is r%m, e.g. 5%6");
  try {
    ResidueConstraint c{Int(text.substr(0, sep)), Int(text.substr(sep + 1))};
    validate(c);
    return c;
  } catch (const std::invalid_argument&) {
    raise(Errc::usage_error, "congruence format is r%m, e.g. 5%6");
  }
}

// "lo:hi,lo:hi,..."
Box parse_box(const std::string& text) {
  Box box;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) {
    auto sep = part.find(':');
    if (sep == std::string::npos)
      raise(Errc::usage_error, "box format is lo:hi[,lo:hi...]");
    try {
      box.ranges.emplace_back(Int(part.substr(0, sep)),
                              Int(part.substr(sep + 1)));
    } catch (const std::invalid_argument&) {
      raise(Errc::usage_error, "box bounds must be integers");
    }
  }
  if (box.ranges.empty()) raise(Errc::usage_error, "empty box");
  return box;
}

std::vector<Int> parse_int_list(const std::vector<std::string>& parts) {
  std::vector<Int> out;
  for (const auto& p : parts) {
    std::istringstream is(p);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        out.emplace_back(tok);
      } catch (const std::invalid_argument&) {
        raise(Errc::usage_error, "expected an integer, got: " + tok);
      }
    }
  }
  return out;
}

struct Output {
  std::ostringstream body;
  std::string artifact;       // written to --out when set
  std::string artifact_path;  // --out
  int exit_code = EXIT_OK;
};

// Every report opens with the tool version, the command, all parameter
// values and an echo of the system description.
void emit_header(std::ostream& os, const std::string& command,
                 const std::vector<std::pair<std::string, std::string>>& params,
                 const System* sys) {
  os << "# constel " << VERSION << "\n";
  os << "# command " << command << "\n";
  for (const auto& [k, v] : params) os << "# param " << k << "=" << v << "\n";
  if (sys) {
    os << "# system-hash " << system_hash(*sys) << "\n";
    std::istringstream echo(serialize_system(*sys));
    std::string line;
    while (std::getline(echo, line)) os << "# system " << line << "\n";
  }
}

std::string verdict_text(const AdmissibilityReport& rep) {
  std::ostringstream os;
  os << "verdict "
     << (rep.admissible() ? "Admissible" : "FixedDivisor") << "\n";
  if (rep.obstruction_prime)
    os << "obstruction_prime " << *rep.obstruction_prime << "\n";
  os << "checked_primes";
  for (auto p : rep.checked_primes) os << ' ' << p;
  os << "\n";
  for (const auto& [p, v] : rep.local_counts)
    os << "v(" << p << ") = " << v << "\n";
  os << "justification " << rep.justification << "\n";
  for (const auto& w : rep.warnings) os << "warning " << w << "\n";
  return os.str();
}

struct CommonArgs {
  unsigned threads = 0;
  std::string out_path;
  bool csv = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void attach_common(CLI::App* cmd, CommonArgs& common) {
  cmd->add_option("--threads", common.threads,
                  "worker count (default: CONSTEL_THREADS or all cores)");
  cmd->add_option("--out", common.out_path, "write the main artifact here");
  cmd->add_flag("--csv", common.csv, "tabular sections as CSV");
  cmd->add_option("--seed", common.seed,
                  "seed for probable-prime rounds above 2^64")
      ->each([&common](const std::string&) { common.seed_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prime constellation toolkit: admissibility, strong-"
               "admissibility certificates, CRT constructions, prime-point "
               "counts and density predictions"};
  app.set_version_flag("--version", std::string("constel ") + VERSION);
  app.require_subcommand(1);

  CommonArgs common;

  // check
  std::string sys_path;
  auto* c_check = app.add_subcommand("check", "admissibility verdict");
  c_check->add_option("system", sys_path, "system description file")
      ->required();
  attach_common(c_check, common);

  // witness
  std::string w_m = "2";
  std::string w_cong;
  std::uint64_t cap_mult = 10;
  auto* c_witness = app.add_subcommand("witness", "single-modulus witness");
  c_witness->add_option("system", sys_path)->required();
  c_witness->add_option("--m", w_m, "modulus (>= 2)")->required();
  c_witness->add_option("--congruence", w_cong, "r%m on the first coordinate");
  c_witness->add_option("--cap-mult", cap_mult,
                        "cube cap multiplier for mixed-sign systems");
  attach_common(c_witness, common);

  // certify
  std::uint64_t horizon = 10000;
  auto* c_certify =
      app.add_subcommand("certify", "strong-admissibility certificate");
  c_certify->add_option("system", sys_path)->required();
  c_certify->add_option("--horizon", horizon, "verify m in [2, horizon]");
  c_certify->add_option("--cap-mult", cap_mult);
  attach_common(c_certify, common);

  // corollary
  std::uint64_t band_lo = 10;
  std::string band_cong = "5%6";
  auto* c_corollary = app.add_subcommand(
      "corollary", "congruence-constrained witness band verification");
  c_corollary->add_option("system", sys_path)->required();
  c_corollary->add_option("--band-lo", band_lo, "verify m in (band-lo, horizon]")
      ->required();
  c_corollary->add_option("--horizon", horizon);
  c_corollary->add_option("--congruence", band_cong)->required();
  attach_common(c_corollary, common);

  // good-property
  std::string matrix_path;
  auto* c_good = app.add_subcommand(
      "good-property", "bounded good-property check of a square matrix");
  c_good->add_option("matrix", matrix_path, "file with k rows of k integers")
      ->required();
  c_good->add_option("--horizon", horizon);
  attach_common(c_good, common);

  // lemma1
  std::uint64_t coprime_bound = 7;
  auto* c_lemma1 = app.add_subcommand(
      "lemma1", "x with least prime divisor of the product beyond C");
  c_lemma1->add_option("system", sys_path)->required();
  c_lemma1->add_option("--coprime-bound", coprime_bound, "C (<= 200)")
      ->required();
  attach_common(c_lemma1, common);

  // lemma2
  std::string l2_r = "1", l2_m = "1";
  auto* c_lemma2 = app.add_subcommand(
      "lemma2", "least x with gcd(prod(a_i + r b_i x), m) = 1");
  c_lemma2->add_option("system", sys_path)->required();
  c_lemma2->add_option("--r", l2_r)->required();
  c_lemma2->add_option("--m", l2_m)->required();
  attach_common(c_lemma2, common);

  // crt-iso
  std::uint64_t iso_a = 3, iso_b = 5;
  auto* c_iso = app.add_subcommand(
      "crt-iso", "verify Z_a^* x Z_b^* ~ Z_ab^* by enumeration");
  c_iso->add_option("--a", iso_a)->required();
  c_iso->add_option("--b", iso_b)->required();
  attach_common(c_iso, common);

  // psi
  std::vector<std::string> beta_args;
  auto* c_psi = app.add_subcommand("psi", "lattice points with all values prime");
  c_psi->add_option("system", sys_path)->required();
  c_psi->add_option("--beta", beta_args,
                    "bound(s); single value broadcasts to all coordinates");
  attach_common(c_psi, common);

  // omega
  std::vector<std::string> alpha_args;
  std::string box_arg;
  auto* c_omega =
      app.add_subcommand("omega", "distinct prime value tuples below alpha");
  c_omega->add_option("system", sys_path)->required();
  c_omega->add_option("--alpha", alpha_args, "value bound(s)");
  c_omega->add_option("--box", box_arg, "explicit search box lo:hi[,lo:hi...]");
  attach_common(c_omega, common);

  // enumerate
  std::uint64_t limit = 0;
  auto* c_enum = app.add_subcommand("enumerate", "stream prime points in a box");
  c_enum->add_option("system", sys_path)->required();
  c_enum->add_option("--box", box_arg)->required();
  c_enum->add_option("--limit", limit, "max results (0 = all)");
  attach_common(c_enum, common);

  // least-seed
  std::string cap_arg = "100000";
  auto* c_seed =
      app.add_subcommand("least-seed", "least x with all values prime");
  c_seed->add_option("system", sys_path)->required();
  c_seed->add_option("--cap", cap_arg);
  attach_common(c_seed, common);

  // chain
  unsigned chain_n = 0;
  auto* c_chain =
      app.add_subcommand("chain", "build the 1 + 2^(2^j) x chain system");
  c_chain->add_option("--n", chain_n, "j runs 0..n (n <= 6)")->required();
  attach_common(c_chain, common);

  // density
  double beta_value = 100000.0;
  std::uint64_t truncation = 100000;
  std::string norm_arg = "li";
  auto* c_density =
      app.add_subcommand("density", "singular series and predicted count");
  c_density->add_option("system", sys_path)->required();
  c_density->add_option("--beta", beta_value);
  c_density->add_option("--truncation", truncation, "Euler product cutoff");
  c_density->add_option("--norm", norm_arg, "li (log integral) or pow");
  attach_common(c_density, common);

  // compare
  std::vector<double> beta_samples;
  auto* c_compare =
      app.add_subcommand("compare", "prediction vs exact count per beta");
  c_compare->add_option("system", sys_path)->required();
  c_compare->add_option("--beta", beta_samples, "beta sample(s)");
  c_compare->add_option("--truncation", truncation);
  c_compare->add_option("--norm", norm_arg);
  attach_common(c_compare, common);

  // factorial-scan
  std::string fa = "1", fb = "2";
  std::uint64_t from_n = 2, to_n = 8, max_n = 12;
  auto* c_fact = app.add_subcommand(
      "factorial-scan", "least coprime / least prime values in Z_{n!}^*");
  c_fact->add_option("--a", fa)->required();
  c_fact->add_option("--b", fb)->required();
  c_fact->add_option("--from", from_n);
  c_fact->add_option("--to", to_n);
  c_fact->add_option("--max-n", max_n, "raise the factorial budget (<= 20)");
  attach_common(c_fact, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints the message or the help text
    return rc == 0 ? EXIT_OK : EXIT_USAGE;
  }

  try {
    if (common.seed_set) set_probable_prime_seed(common.seed);
    const unsigned workers = resolve_workers(common.threads);
    std::ostringstream out;
    int code = EXIT_OK;
    std::string artifact;

    // Worker count is an execution detail, not a parameter: reports stay
    // byte-identical however the work is split.
    auto params_base = [&](std::initializer_list<
                           std::pair<std::string, std::string>>
                               extra) {
      std::vector<std::pair<std::string, std::string>> p(extra);
      p.emplace_back("seed", std::to_string(probable_prime_seed()));
      return p;
    };

    if (*c_check) {
      System sys = load_system(sys_path);
      emit_header(out, "check", params_base({}), &sys);
      AdmissibilityReport rep;
      if (const auto* lin = std::get_if<LinearSystem>(&sys))
        rep = is_admissible(*lin);
      else
        rep = poly_is_admissible(std::get<UniPolySystem>(sys));
      out << verdict_text(rep);
      code = rep.admissible() ? EXIT_OK : EXIT_NEGATIVE;
    } else if (*c_witness) {
      LinearSystem sys = load_linear(sys_path);
      System as_sys(sys);
      WitnessOptions opts;
      opts.cap_multiplier = cap_mult;
      if (!w_cong.empty()) opts.congruence = parse_congruence(w_cong);
      emit_header(out, "witness",
                  params_base({{"m", w_m},
                               {"congruence", w_cong.empty() ? "-" : w_cong},
                               {"cap-mult", std::to_string(cap_mult)}}),
                  &as_sys);
      auto res = find_witness(sys, Int(w_m), opts);
      switch (res.status) {
        case WitnessStatus::found: {
          out << "status Found\npoint";
          for (const auto& y : res.certificate->point) out << ' ' << y;
          out << "\nvalues";
          for (const auto& v : res.certificate->values) out << ' ' << v;
          out << "\n";
          break;
        }
        case WitnessStatus::no_witness:
          out << "status NoWitness\nexhaustive "
              << (res.exhaustive ? "true" : "false") << "\n";
          code = EXIT_NEGATIVE;
          break;
        case WitnessStatus::inconclusive:
          out << "status Inconclusive\ncap " << res.cap << "\n";
          code = EXIT_BUDGET;
          break;
      }
    } else if (*c_certify || *c_good) {
      StrongAdmissibilityCertificate cert;
      CertifyOptions opts;
      opts.workers = workers;
      opts.witness.cap_multiplier = cap_mult;
      std::optional<System> echo;
      if (*c_certify) {
        LinearSystem sys = load_linear(sys_path);
        echo = System(sys);
        emit_header(out, "certify",
                    params_base({{"horizon", std::to_string(horizon)},
                                 {"cap-mult", std::to_string(cap_mult)}}),
                    &*echo);
        cert = certify_strong_admissibility(sys, horizon, opts);
      } else {
        // Matrix file: k rows of k integers; comments and blanks as in
        // system files.
        std::vector<std::vector<Int>> matrix;
        std::istringstream is(read_file(matrix_path));
        std::string line;
        while (std::getline(is, line)) {
          if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
          std::istringstream row(line);
          std::vector<Int> r;
          std::string tok;
          while (row >> tok) r.emplace_back(tok);
          if (!r.empty()) matrix.push_back(std::move(r));
        }
        LinearSystem sys = homogeneous_system(matrix);
        echo = System(sys);
        emit_header(out, "good-property",
                    params_base({{"horizon", std::to_string(horizon)}}),
                    &*echo);
        cert = certify_strong_admissibility(sys, horizon, opts);
      }
      out << "candidate_L " << cert.candidate_L << "\n";
      out << "failing";
      for (auto m : cert.failing) out << ' ' << m;
      out << "\nwitnessed " << cert.witnesses.size() << "\n";
      out << "caveat " << cert.caveat << "\n";
      artifact = serialize_certificate(cert);
    } else if (*c_corollary) {
      LinearSystem sys = load_linear(sys_path);
      System as_sys(sys);
      auto cong = parse_congruence(band_cong);
      emit_header(out, "corollary",
                  params_base({{"band-lo", std::to_string(band_lo)},
                               {"horizon", std::to_string(horizon)},
                               {"congruence", band_cong}}),
                  &as_sys);
      CertifyOptions opts;
      opts.workers = workers;
      auto rep = verify_corollary_band(sys, band_lo, horizon, cong, opts);
      if (rep.ok) {
        out << "status success\nverified " << rep.verified_count << "\n";
      } else {
        out << "status CounterexampleFound\nm " << *rep.counterexample_m
            << "\nunconstrained_witness_exists "
            << (rep.unconstrained_witness_exists ? "true" : "false") << "\n";
        out << (rep.unconstrained_witness_exists
                    ? "interpretation congruence claim fails at this modulus\n"
                    : "interpretation no witness at all at this modulus\n");
        code = EXIT_NEGATIVE;
      }
    } else if (*c_lemma1) {
      LinearSystem sys = load_linear(sys_path);
      System as_sys(sys);
      emit_header(out, "lemma1",
                  params_base({{"coprime-bound", std::to_string(coprime_bound)}}),
                  &as_sys);
      auto w = lemma1_construct(sys, coprime_bound);
      out << "x " << w.x << "\n";
      out << "product " << w.product_value << "\n";
      out << "shielded_primes";
      for (auto p : w.shielded_primes) out << ' ' << p;
      out << "\n";
    } else if (*c_lemma2) {
      LinearSystem sys = load_linear(sys_path);
      System as_sys(sys);
      emit_header(out, "lemma2",
                  params_base({{"r", l2_r}, {"m", l2_m}}), &as_sys);
      Int x = lemma2_construct(sys, Int(l2_r), Int(l2_m));
      out << "x " << x << "\n";
    } else if (*c_iso) {
      emit_header(out, "crt-iso",
                  params_base({{"a", std::to_string(iso_a)},
                               {"b", std::to_string(iso_b)}}),
                  nullptr);
      auto rep = crt_isomorphism_check(iso_a, iso_b);
      out << "ok " << (rep.ok ? "true" : "false") << "\n";
      out << "cardinalities " << rep.card_a << " * " << rep.card_b << " -> "
          << rep.card_ab << "\n";
      out << "multiplicative_pairs_checked " << rep.multiplicative_pairs_checked
          << (rep.multiplicativity_exhaustive ? " (exhaustive)" : " (sampled)")
          << "\n";
      if (rep.degenerate_unit_factor) out << "note " << rep.note << "\n";
      code = rep.ok ? EXIT_OK : EXIT_NEGATIVE;
    } else if (*c_psi) {
      System sys = load_system(sys_path);
      auto beta = beta_args.empty() ? std::vector<Int>{Int(100000)}
                                    : parse_int_list(beta_args);
      std::ostringstream bs;
      for (const auto& b : beta) bs << b << ' ';
      emit_header(out, "psi", params_base({{"beta", bs.str()}}), &sys);
      SearchOptions sopts;
      sopts.workers = workers;
      auto rep = psi_count(sys, beta, sopts);
      out << "bounds";
      for (const auto& b : rep.bounds) out << ' ' << b;
      out << "\ncount " << rep.count << "\n";
      out << "points_sampled " << rep.points_sampled << "\n";
      out << "exhaustive " << (rep.exhaustive ? "true" : "false") << "\n";
      if (rep.probable_prime_used) out << "note probable primes involved\n";
      if (!rep.note.empty()) out << "note " << rep.note << "\n";
      if (rep.budget_exceeded) code = EXIT_BUDGET;
    } else if (*c_omega) {
      System sys = load_system(sys_path);
      auto alpha = alpha_args.empty() ? std::vector<Int>{Int(100000)}
                                      : parse_int_list(alpha_args);
      std::optional<Box> box;
      if (!box_arg.empty()) box = parse_box(box_arg);
      std::ostringstream as;
      for (const auto& a : alpha) as << a << ' ';
      emit_header(out, "omega",
                  params_base({{"alpha", as.str()},
                               {"box", box_arg.empty() ? "-" : box_arg}}),
                  &sys);
      SearchOptions sopts;
      sopts.workers = workers;
      auto rep = omega_count(sys, alpha, box, sopts);
      out << "bounds";
      for (const auto& a : rep.bounds) out << ' ' << a;
      out << "\ncount " << rep.count << "\n";
      out << "points_sampled " << rep.points_sampled << "\n";
      out << "exhaustive " << (rep.exhaustive ? "true" : "false") << "\n";
      if (rep.probable_prime_used) out << "note probable primes involved\n";
      if (!rep.note.empty()) out << "note " << rep.note << "\n";
    } else if (*c_enum) {
      System sys = load_system(sys_path);
      Box box = parse_box(box_arg);
      emit_header(out, "enumerate",
                  params_base({{"box", box_arg},
                               {"limit", std::to_string(limit)}}),
                  &sys);
      SearchOptions sopts;
      sopts.workers = workers;
      auto points = enumerate_prime_points(sys, box, limit, sopts);
      out << "points " << points.size() << "\n";
      bool any_probable = false;
      for (const auto& pp : points) {
        out << format_prime_point(pp) << "\n";
        for (const auto& v : pp.values)
          if (mpz_sizeinbase(v.get_mpz_t(), 2) > 64) any_probable = true;
      }
      if (any_probable)
        out << "note values above 2^64 are probable primes (seed "
            << probable_prime_seed() << ")\n";
    } else if (*c_seed) {
      System sys = load_system(sys_path);
      emit_header(out, "least-seed", params_base({{"cap", cap_arg}}), &sys);
      auto res = least_seed(sys, Int(cap_arg));
      if (res.seed) {
        out << "x " << *res.seed << "\nvalues";
        for (const auto& v : res.values) out << ' ' << v;
        out << "\n";
        if (res.probable_prime_used)
          out << "note values above 2^64 are probable primes (seed "
              << probable_prime_seed() << ")\n";
      } else {
        out << "status NotFound\ncap " << res.cap << "\n";
        code = EXIT_NEGATIVE;
      }
    } else if (*c_chain) {
      LinearSystem sys = chain_system(chain_n);
      System as_sys(sys);
      emit_header(out, "chain", params_base({{"n", std::to_string(chain_n)}}),
                  &as_sys);
      artifact = serialize_system(as_sys);
      out << "forms " << sys.size() << "\n";
    } else if (*c_density) {
      System sys = load_system(sys_path);
      Normalization norm = norm_arg == "pow" ? Normalization::power_of_log
                                             : Normalization::log_integral;
      emit_header(out, "density",
                  params_base({{"beta", std::to_string(beta_value)},
                               {"truncation", std::to_string(truncation)},
                               {"norm", normalization_name(norm)}}),
                  &sys);
      auto est = predicted_count(sys, beta_value, truncation, norm, workers);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.10g", est.series_value);
      out << "series_value " << buf << "\n";
      std::snprintf(buf, sizeof buf, "%.10g", est.predicted_count);
      out << "predicted_count " << buf << "\n";
      std::snprintf(buf, sizeof buf, "%.6g", est.last_factor);
      out << "last_factor " << buf << "\n";
      if (est.degree_factor != 1.0) {
        std::snprintf(buf, sizeof buf, "%.10g", est.degree_factor);
        out << "degree_factor " << buf << "\n";
      }
      if (est.inadmissible) {
        out << "note system inadmissible: prediction 0\n";
        code = EXIT_NEGATIVE;
      }
    } else if (*c_compare) {
      System sys = load_system(sys_path);
      Normalization norm = norm_arg == "pow" ? Normalization::power_of_log
                                             : Normalization::log_integral;
      if (beta_samples.empty()) beta_samples.push_back(100000.0);
      std::ostringstream bs;
      for (double b : beta_samples) bs << b << ' ';
      emit_header(out, "compare",
                  params_base({{"beta", bs.str()},
                               {"truncation", std::to_string(truncation)},
                               {"norm", normalization_name(norm)}}),
                  &sys);
      SearchOptions sopts;
      sopts.workers = workers;
      auto rep = compare(sys, beta_samples, truncation, norm, sopts);
      out << (common.csv ? render_comparison_csv(rep)
                         : render_comparison_text(rep));
      if (rep.inadmissible) code = EXIT_NEGATIVE;
    } else if (*c_fact) {
      emit_header(out, "factorial-scan",
                  params_base({{"a", fa},
                               {"b", fb},
                               {"from", std::to_string(from_n)},
                               {"to", std::to_string(to_n)}}),
                  nullptr);
      auto rep = factorial_frame_scan(Int(fa), Int(fb),
                                      NaturalRange{from_n, to_n}, max_n);
      out << "note " << rep.note << "\n";
      for (const auto& e : rep.entries) {
        out << "n " << e.n << " modulus " << e.modulus;
        if (e.least_value)
          out << " least_value " << *e.least_value << " prime "
              << (e.least_value_prime ? "true" : "false");
        else
          out << " least_value absent";
        if (e.least_prime)
          out << " least_prime " << *e.least_prime;
        else
          out << " least_prime absent";
        out << "\n";
      }
    }

    if (!common.out_path.empty()) {
      write_file(common.out_path,
                 artifact.empty() ? out.str() : artifact);
      out << "wrote " << common.out_path << "\n";
    }
    std::cout << out.str();
    return code;
  } catch (const Error& e) {
    std::cerr << "ERROR " << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "ERROR Internal: " << e.what() << "\n";
    return EXIT_USAGE;
  }
}
