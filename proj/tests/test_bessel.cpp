#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "meissner/bessel.hpp"
#include "oracle_helpers.hpp"

using namespace meissner;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("i0 matches the series oracle and frozen values", "[bessel]") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK_THAT(bessel_i0(1.0), WithinRel(1.2660658777520083, 1e-14));
  CHECK_THAT(bessel_i0(10.0), WithinRel(2815.7166284662545, 1e-13));
  for (double z : {0.3, 1.0, 2.5, 7.0, 10.0, 25.0, 39.0}) {
    const double ref = static_cast<double>(oracle::i0_series(z, 120));
    CHECK_THAT(bessel_i0(z), WithinRel(ref, 1e-13));
  }
}

TEST_CASE("i1 matches the series oracle and frozen values", "[bessel]") {
  CHECK(bessel_i1(0.0) == 0.0);
  CHECK_THAT(bessel_i1(1.0), WithinRel(0.56515910399248503, 1e-14));
  CHECK_THAT(bessel_i1(1.5), WithinRel(0.98166642857790759, 1e-14));
  for (double z : {0.3, 1.0, 2.5, 7.0, 10.0, 25.0, 39.0}) {
    const double ref = static_cast<double>(oracle::i1_series(z, 120));
    CHECK_THAT(bessel_i1(z), WithinRel(ref, 1e-13));
  }
}

TEST_CASE("i0_log is exact in the series range and overflow-safe", "[bessel]") {
  CHECK(bessel_i0_log(0.0) == 0.0);
  CHECK_THAT(bessel_i0_log(10.0), WithinRel(7.9429720831186956, 1e-13));
  // frozen from the large-z expansion: z - ln sqrt(2 pi z) + ln S(z)
  CHECK_THAT(bessel_i0_log(1000.0), WithinRel(995.62730888986946, 1e-13));
  CHECK_THAT(bessel_i0_log(40.0), WithinRel(37.239786861352357, 1e-13));

  // differences of logs reproduce ratios
  const double r = std::exp(bessel_i0_log(30.0) - bessel_i0_log(10.0));
  const double ref = static_cast<double>(oracle::i0_series(30.0L, 120) / oracle::i0_series(10.0L, 120));
  CHECK_THAT(r, WithinRel(ref, 1e-10));
  CHECK(std::isfinite(bessel_i0_log(1e6)));
}

TEST_CASE("domain errors on bad arguments", "[bessel]") {
  CHECK_THROWS_AS(bessel_i0(-1.0), DomainError);
  CHECK_THROWS_AS(bessel_i1(-1e-9), DomainError);
  CHECK_THROWS_AS(bessel_i0_log(-2.0), DomainError);
  CHECK_THROWS_AS(bessel_i0(std::nan("")), DomainError);
  CHECK_THROWS_AS(ratio_threshold(1.0), DomainError);
  CHECK_THROWS_AS(ratio_threshold(0.0), DomainError);
  CHECK_THROWS_AS(ratio_threshold(-0.5), DomainError);
}

TEST_CASE("series/asymptotic switch is seamless", "[bessel]") {
  CHECK(bessel_i0_eval(39.99).method == BesselMethod::series);
  CHECK(bessel_i0_eval(40.01).method == BesselMethod::asymptotic);
  const double jump = detail::i0_series(40.0) / detail::i0_asymptotic(40.0) - 1.0;
  CHECK(std::abs(jump) < 1e-10);

  for (double z = 15.0; z <= 30.0; z += 1.5) {
    CHECK_THAT(detail::i0_asymptotic(z), WithinRel(detail::i0_series(z), 1e-9));
    CHECK_THAT(detail::i1_asymptotic(z), WithinRel(detail::i1_series(z), 2e-9));
  }
}

TEST_CASE("i0, i1, and their ratio increase monotonically", "[bessel]") {
  double pi0 = bessel_i0(0.0), pi1 = bessel_i1(0.0), pr = 0.0;
  for (double z = 0.1; z <= 60.0; z += 0.1) {
    const double v0 = bessel_i0(z), v1 = bessel_i1(z), r = bessel_ratio_i1_i0(z);
    CHECK(v0 > pi0);
    CHECK(v1 > pi1);
    CHECK(r > pr);
    pi0 = v0;
    pi1 = v1;
    pr = r;
  }
  CHECK(pr < 1.0);
}

TEST_CASE("derivative identity I0' = I1 via central differences", "[bessel]") {
  const double h = 1e-5;
  for (double z : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double fd = (bessel_i0(z + h) - bessel_i0(z - h)) / (2.0 * h);
    CHECK_THAT(fd, WithinRel(bessel_i1(z), 1e-6));
  }
}

TEST_CASE("ratio threshold", "[bessel]") {
  const double p = ratio_threshold(0.5);
  CHECK(p > 1.1);
  CHECK(p < 1.2);
  CHECK_THAT(p, WithinAbs(1.1593199207501384, 1e-6));
  CHECK_THAT(bessel_ratio_i1_i0(p), WithinAbs(0.5, 1e-6));

  // bracket values from the series oracle
  CHECK_THAT(bessel_ratio_i1_i0(1.1),
             WithinAbs(static_cast<double>(oracle::i1_series(1.1L) / oracle::i0_series(1.1L)), 1e-12));
  CHECK_THAT(bessel_ratio_i1_i0(1.1), WithinAbs(0.480702772020496, 1e-10));
  CHECK_THAT(bessel_ratio_i1_i0(1.2), WithinAbs(0.512782393957904, 1e-10));

  const double p9 = ratio_threshold(0.9);
  CHECK_THAT(bessel_ratio_i1_i0(p9), WithinAbs(0.9, 1e-8));
  CHECK_THAT(p9, WithinAbs(5.3046890629577175, 1e-6));

  CHECK(ratio_threshold(1e-6) < 1e-5);  // threshold collapses to 0 with the target
}

TEST_CASE("internal scaled k0/k1 against frozen references", "[bessel]") {
  struct Row {
    double z, k0e, k1e;
  };
  // e^z K0(z), e^z K1(z); the 9.5 row sits just past the series/asymptotic
  // switch where the asymptotic tail is weakest.
  const Row rows[] = {
      {0.5, 1.5241093857739095, 2.7310097082117857},
      {2.0, 0.84156821507077142, 1.0334768470686886},
      {6.0, 0.50186313086214003, 0.54217591027713354},
      {8.5, 0.42393599933369805, 0.44821339156307939},
      {9.5, 0.40156513211540536, 0.42219454297695785},
      {12.0, 0.35819487848907822, 0.37283175336970988},
      {30.0, 0.22788666561625373, 0.23165412937771180},
  };
  for (const Row& r : rows) {
    CHECK_THAT(detail::k0_scaled(r.z), WithinRel(r.k0e, 5e-8));
    CHECK_THAT(detail::k1_scaled(r.z), WithinRel(r.k1e, 5e-8));
  }
  CHECK(std::isinf(detail::k0_scaled(0.0)));

  // Wronskian I0(z) K1(z) + I1(z) K0(z) = 1/z in scaled variables
  for (double z : {0.7, 3.0, 9.0, 20.0}) {
    const double w = detail::i0_scaled(z) * detail::k1_scaled(z) +
                     detail::i1_scaled(z) * detail::k0_scaled(z);
    CHECK_THAT(w, WithinRel(1.0 / z, 1e-7));
  }
}
