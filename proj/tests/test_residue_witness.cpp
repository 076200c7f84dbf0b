#include <doctest.h>

#include <random>
#include <sstream>

#include "constel/residue_witness.hpp"
#include "oracles.hpp"

using namespace constel;

namespace {

LinearSystem twins() {
  return LinearSystem({AffineForm{{Int(1)}, Int(0)}, AffineForm{{Int(1)}, Int(2)}});
}

LinearSystem sophie_germain() {
  return LinearSystem({AffineForm{{Int(1)}, Int(0)}, AffineForm{{Int(2)}, Int(1)}});
}

LinearSystem l1() {
  return LinearSystem({AffineForm{{Int(1), Int(2)}, Int(0)},
                       AffineForm{{Int(2), Int(1)}, Int(0)}});
}

LinearSystem l2() {
  return LinearSystem({AffineForm{{Int(1), Int(1)}, Int(1)},
                       AffineForm{{Int(3), Int(1)}, Int(3)}});
}

}  // namespace

TEST_CASE("find_witness returns the least witness") {
  // Full-scan oracle: least y in {2..6} with y, y+2 in Z_7^* and > 1 is 2
  // (values 2 and 4 are both coprime to 7).
  auto oracle = oracles::full_scan_witness(twins(), 7);
  REQUIRE(oracle.has_value());
  REQUIRE((*oracle)[0] == 2);

  auto res = find_witness(twins(), Int(7));
  REQUIRE(res.status == WitnessStatus::found);
  CHECK(res.certificate->point == std::vector<Int>{Int(2)});
  CHECK(res.certificate->values == std::vector<Int>{Int(2), Int(4)});
}

TEST_CASE("find_witness proves absence exhaustively at m = 6") {
  auto res = find_witness(twins(), Int(6));
  CHECK(res.status == WitnessStatus::no_witness);
  CHECK(res.exhaustive);
  CHECK_FALSE(oracles::full_scan_witness(twins(), 6).has_value());
}

TEST_CASE("congruence-constrained witness at m = 12") {
  WitnessOptions opts;
  opts.congruence = ResidueConstraint{Int(5), Int(6)};
  auto res = find_witness(twins(), Int(12), opts);
  REQUIRE(res.status == WitnessStatus::found);
  CHECK(res.certificate->point == std::vector<Int>{Int(5)});
  CHECK(res.certificate->values == std::vector<Int>{Int(5), Int(7)});
  CHECK(validate_witness(twins(), *res.certificate));
}

TEST_CASE("witness search agrees with the full-scan oracle") {
  std::mt19937_64 rng(555);
  int compared = 0;
  for (int iter = 0; iter < 60; ++iter) {
    // Nonnegative coefficients (signed constants stay) so the exhaustive
    // region search is in play.
    LinearSystem raw = oracles::random_system(rng, 3, 2);
    std::vector<AffineForm> forms;
    for (const auto& f : raw.forms()) {
      AffineForm g;
      g.constant = f.constant;
      for (const auto& c : f.coeffs) g.coeffs.push_back(abs(c));
      forms.push_back(std::move(g));
    }
    LinearSystem sys = [&]() -> LinearSystem {
      try {
        return LinearSystem(forms);
      } catch (const Error&) {
        return raw;  // duplicates after abs; fall back to the raw system
      }
    }();
    if (!sys.all_coeffs_nonnegative()) continue;
    for (long long m = 2; m <= 40; ++m) {
      auto want = oracles::full_scan_witness(sys, m);
      auto got = find_witness(sys, Int(static_cast<long>(m)));
      if (want.has_value()) {
        REQUIRE(got.status == WitnessStatus::found);
        std::vector<Int> want_point;
        for (long long v : *want) want_point.emplace_back(static_cast<long>(v));
        if (got.certificate->point != want_point) {
          CAPTURE(serialize_system(System(sys)));
          CAPTURE(m);
          REQUIRE(got.certificate->point == want_point);
        }
        CHECK(validate_witness(sys, *got.certificate));
      } else {
        REQUIRE(got.status == WitnessStatus::no_witness);
        CHECK(got.exhaustive);
      }
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("congruence constrains the first coordinate in two variables") {
  WitnessOptions opts;
  opts.congruence = ResidueConstraint{Int(1), Int(2)};
  auto res = find_witness(l1(), Int(50), opts);
  REQUIRE(res.status == WitnessStatus::found);
  CHECK(res.certificate->point[0] % 2 == 1);
  CHECK(validate_witness(l1(), *res.certificate));
}

TEST_CASE("mixed-sign systems fall back to the capped cube") {
  LinearSystem falling({AffineForm{{Int(-1)}, Int(5)}});  // 5 - x
  // m = 12: candidate values 4, 3, 2 all share a factor with 12.
  auto res = find_witness(falling, Int(12));
  CHECK(res.status == WitnessStatus::inconclusive);
  CHECK(res.cap == 120);
  // m = 7: x = 1 gives 4, coprime to 7.
  auto res7 = find_witness(falling, Int(7));
  REQUIRE(res7.status == WitnessStatus::found);
  CHECK(res7.certificate->point == std::vector<Int>{Int(1)});
}

TEST_CASE("witness validation is strict") {
  auto res = find_witness(twins(), Int(25));
  REQUIRE(res.status == WitnessStatus::found);
  auto cert = *res.certificate;
  CHECK(validate_witness(twins(), cert));
  auto tampered = cert;
  tampered.values[1] += 1;
  CHECK_FALSE(validate_witness(twins(), tampered));
  auto wrong_modulus = cert;
  wrong_modulus.modulus = 24;
  CHECK_FALSE(validate_witness(twins(), wrong_modulus));
}

TEST_CASE("certificates for the reference systems") {
  auto twin_cert = certify_strong_admissibility(twins(), 10000);
  CHECK(twin_cert.candidate_L == 7);
  CHECK(twin_cert.failing == std::vector<std::uint64_t>{2, 3, 4, 6});

  auto sg_cert = certify_strong_admissibility(sophie_germain(), 10000);
  CHECK(sg_cert.candidate_L == 16);
  CHECK(sg_cert.failing == std::vector<std::uint64_t>{2, 3, 4, 5, 6, 15});

  auto l1_cert = certify_strong_admissibility(l1(), 1000);
  CHECK(l1_cert.candidate_L <= 7);
  auto l2_cert = certify_strong_admissibility(l2(), 1000);
  CHECK(l2_cert.candidate_L <= 8);

  // Spot-validate stored witnesses through the independent checker.
  int validated = 0;
  for (const auto& [m, cert] : twin_cert.witnesses) {
    (void)m;
    REQUIRE(validate_witness(twins(), cert));
    if (++validated == 200) break;
  }
}

TEST_CASE("certify rejects inadmissible systems") {
  LinearSystem succ({AffineForm{{Int(1)}, Int(0)}, AffineForm{{Int(1)}, Int(1)}});
  try {
    certify_strong_admissibility(succ, 100);
    FAIL("expected NotAdmissible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_admissible);
    CHECK(e.detail() == 2);
  }
}

TEST_CASE("certify propagates inconclusive searches with the modulus") {
  LinearSystem falling({AffineForm{{Int(-1)}, Int(5)}});
  try {
    certify_strong_admissibility(falling, 100);
    FAIL("expected Inconclusive");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::inconclusive);
    CHECK(e.detail().has_value());
  }
}

TEST_CASE("enlarging the horizon is monotone-consistent") {
  auto small = certify_strong_admissibility(twins(), 300);
  auto large = certify_strong_admissibility(twins(), 3000);
  CHECK(small.failing == large.failing);
  CHECK(large.candidate_L >= small.failing.back() + 1);
  for (const auto& [m, cert] : small.witnesses) {
    auto it = large.witnesses.find(m);
    REQUIRE(it != large.witnesses.end());
    CHECK(it->second.point == cert.point);
  }
}

TEST_CASE("certificate serialization is canonical and worker-independent") {
  CertifyOptions serial;
  serial.workers = 1;
  CertifyOptions pooled;
  pooled.workers = 3;
  pooled.chunk = 37;
  auto a = certify_strong_admissibility(twins(), 500, serial);
  auto b = certify_strong_admissibility(twins(), 500, pooled);
  auto ta = serialize_certificate(a);
  auto tb = serialize_certificate(b);
  CHECK(ta == tb);

  std::istringstream is(ta);
  std::string line;
  std::getline(is, line);
  CHECK(line.rfind("hash ", 0) == 0);
  std::getline(is, line);
  CHECK(line == "horizon 500");
  std::getline(is, line);
  CHECK(line == "candidate_L 7");
  std::getline(is, line);
  CHECK(line == "2 FAIL");
  std::getline(is, line);
  CHECK(line == "3 FAIL");
  std::getline(is, line);
  CHECK(line == "4 FAIL");
  std::getline(is, line);
  CHECK(line == "5 2");
  std::getline(is, line);
  CHECK(line == "6 FAIL");
  std::getline(is, line);
  CHECK(line == "7 2");
}

TEST_CASE("corollary bands for the twin and Sophie-Germain forms") {
  ResidueConstraint cong{Int(5), Int(6)};
  auto twin_band = verify_corollary_band(twins(), 10, 3000, cong);
  CHECK(twin_band.ok);
  CHECK(twin_band.verified_count == 2990);

  auto sg_band = verify_corollary_band(sophie_germain(), 45, 3000, cong);
  CHECK(sg_band.ok);
}

TEST_CASE("corollary band counterexamples are classified") {
  ResidueConstraint cong{Int(5), Int(6)};
  auto rep = verify_corollary_band(twins(), 5, 6, cong);
  CHECK_FALSE(rep.ok);
  CHECK(rep.counterexample_m == 6);
  CHECK_FALSE(rep.unconstrained_witness_exists);  // m = 6 has none at all

  // Even-x congruence fails where an unconstrained witness exists.
  ResidueConstraint even{Int(0), Int(2)};
  auto rep2 = verify_corollary_band(twins(), 11, 12, even);
  CHECK_FALSE(rep2.ok);
  CHECK(rep2.counterexample_m == 12);
  CHECK(rep2.unconstrained_witness_exists);
}

TEST_CASE("good property of a unit matrix") {
  for (std::size_t k = 1; k <= 5; ++k) {
    std::vector<std::vector<Int>> eye(k, std::vector<Int>(k, Int(0)));
    for (std::size_t i = 0; i < k; ++i) eye[i][i] = 1;
    auto cert = good_property_check(eye, 100);
    CHECK(cert.candidate_L >= 2);  // never NotAdmissible
  }
  std::vector<std::vector<Int>> eye2{{Int(1), Int(0)}, {Int(0), Int(1)}};
  auto cert = good_property_check(eye2, 1000);
  // (m-1, m-1) witnesses every m >= 3; m = 2 fails because values must
  // exceed 1.
  CHECK(cert.candidate_L == 3);
  CHECK(cert.failing == std::vector<std::uint64_t>{2});
}

TEST_CASE("good property of the cross matrix and a scaled matrix") {
  std::vector<std::vector<Int>> cross{{Int(1), Int(2)}, {Int(2), Int(1)}};
  auto cert = good_property_check(cross, 1000);
  CHECK(cert.candidate_L <= 7);

  std::vector<std::vector<Int>> doubled{{Int(2), Int(0)}, {Int(0), Int(2)}};
  CHECK_THROWS_AS(good_property_check(doubled, 1000), Error);
  try {
    good_property_check(doubled, 1000);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_admissible);
  }

  std::vector<std::vector<Int>> zero_row{{Int(0), Int(0)}, {Int(1), Int(1)}};
  try {
    good_property_check(zero_row, 100);
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition_violated);
    CHECK(e.detail() == 0);
  }
}

TEST_CASE("factorial frames") {
  // n = 3: values 1 + 2x are 1, 3, 5, ...; 3 shares a factor with 6, 5 is the
  // least member of Z_6^* above 1 and is prime.
  auto rep = factorial_frame_scan(Int(1), Int(2), NaturalRange{3, 3});
  REQUIRE(rep.entries.size() == 1);
  const auto& e = rep.entries[0];
  CHECK(e.modulus == 6);
  REQUIRE(e.least_value.has_value());
  CHECK(*e.least_value == 5);
  CHECK(e.least_value_prime);
  CHECK(e.least_prime == Int(5));

  // Z_2^* = {1}: nothing above 1 fits below 2!.
  auto rep2 = factorial_frame_scan(Int(1), Int(1), NaturalRange{2, 2});
  REQUIRE(rep2.entries.size() == 1);
  CHECK_FALSE(rep2.entries[0].least_value.has_value());
  CHECK_FALSE(rep2.entries[0].least_prime.has_value());

  // a = 3, b = 4: at n = 3 the candidates below 3! are 3 (shares a factor
  // with 6) and then 7 >= 6, so the frame holds nothing; at n = 4 the value
  // 7 < 24 is coprime to 24 and prime.
  auto rep3 = factorial_frame_scan(Int(3), Int(4), NaturalRange{2, 9});
  CHECK_FALSE(rep3.entries[1].least_value.has_value());
  REQUIRE(rep3.entries[2].least_value.has_value());
  CHECK(*rep3.entries[2].least_value == 7);
  CHECK(rep3.entries[2].least_value_prime);

  // Every reported least value really lies in Z_{n!}^* and exceeds 1.
  for (const auto& entry : rep3.entries) {
    if (!entry.least_value) continue;
    CHECK(*entry.least_value > 1);
    CHECK(*entry.least_value < entry.modulus);
    Int g;
    mpz_gcd(g.get_mpz_t(), entry.least_value->get_mpz_t(),
            entry.modulus.get_mpz_t());
    CHECK(g == 1);
  }
}

TEST_CASE("factorial frame guards") {
  CHECK_THROWS_AS(factorial_frame_scan(Int(2), Int(4), NaturalRange{2, 5}),
                  Error);  // gcd(a, b) != 1
  CHECK_THROWS_AS(factorial_frame_scan(Int(0), Int(1), NaturalRange{2, 5}),
                  Error);  // a = 0
  try {
    factorial_frame_scan(Int(1), Int(2), NaturalRange{2, 19}, 12);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exceeded);
  }
}
