#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stable_exit/errors.hpp"
#include "stable_exit/stable_law.hpp"

using namespace stable_exit;

TEST_CASE("rho_from_beta examples") {
  CHECK(rho_from_beta(1.5, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rho_from_beta(1.5, -1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(rho_from_beta(0.7, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rho_from_beta(1.0, 0.0) == 0.5);
  CHECK_THROWS_AS(rho_from_beta(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(rho_from_beta(2.5, 0.0), DomainError);
  CHECK_THROWS_AS(rho_from_beta(0.0, 0.0), DomainError);
}

TEST_CASE("one-sided endpoints of the band") {
  for (double a : {1.1, 1.5, 1.9}) {
    CHECK(rho_from_beta(a, -1.0) == doctest::Approx(1.0 / a).epsilon(1e-13));
    CHECK(rho_from_beta(a, 1.0) == doctest::Approx(1.0 - 1.0 / a).epsilon(1e-13));
  }
  for (double a : {0.3, 0.7, 0.95}) {
    CHECK(rho_from_beta(a, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rho_from_beta(a, -1.0) == doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("from_alpha_rho admissibility") {
  const StableLaw l = StableLaw::from_alpha_rho(2.0 / 3.0, 0.5);
  CHECK(l.alpha() == 2.0 / 3.0);
  CHECK(l.rho() == 0.5);
  CHECK_FALSE(l.beta().has_value());
  CHECK_THROWS_AS(StableLaw::from_alpha_rho(1.0, 0.3), AdmissibilityError);
  CHECK_THROWS_AS(StableLaw::from_alpha_rho(1.5, 0.9), AdmissibilityError);
  CHECK_THROWS_AS(StableLaw::from_alpha_rho(0.5, 1.2), AdmissibilityError);
  CHECK_THROWS_AS(StableLaw::from_alpha_rho(2.1, 0.5), DomainError);
  CHECK_THROWS_AS(StableLaw::from_alpha_rho(std::nan(""), 0.5), DomainError);
  CHECK(StableLaw::from_alpha_rho(2.0, 0.5).is_limiting_brownian());
}

TEST_CASE("from_alpha_beta keeps beta and the matching rho") {
  const StableLaw l = StableLaw::from_alpha_beta(1.5, -1.0);
  REQUIRE(l.beta().has_value());
  CHECK(*l.beta() == -1.0);
  CHECK(l.rho() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(StableLaw::from_alpha_beta(1.5, 1.5), DomainError);
  CHECK_THROWS_AS(StableLaw::from_alpha_beta(1.0, 0.5), DomainError);
}

TEST_CASE("dual") {
  const StableLaw a = dual(StableLaw::from_alpha_rho(1.5, 2.0 / 3.0));
  CHECK(a.rho() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const StableLaw s = StableLaw::from_alpha_rho(2.0 / 3.0, 0.5);
  CHECK(dual(s) == s);
  CHECK(dual(StableLaw::from_alpha_rho(0.7, 1.0)).rho() == 0.0);
  const StableLaw b = StableLaw::from_alpha_beta(1.3, 0.4);
  REQUIRE(dual(b).beta().has_value());
  CHECK(*dual(b).beta() == -0.4);
}

TEST_CASE("classify examples") {
  CHECK(classify(StableLaw::from_alpha_rho(2.0 / 3.0, 0.5)) == Classification::DoneyC11Dual);
  CHECK(classify(StableLaw::from_alpha_rho(1.5, 0.5)) == Classification::Symmetric);
  CHECK(classify(StableLaw::from_alpha_rho(1.5, 2.0 / 3.0)) == Classification::SpectrallyNegative);
  CHECK(classify(StableLaw::from_alpha_rho(1.5, 1.0 / 3.0)) == Classification::SpectrallyPositive);
  CHECK(classify(StableLaw::from_alpha_rho(0.55, 2.0 - 1.0 / 0.55)) == Classification::DoneyC11Dual);
  CHECK(classify(StableLaw::from_alpha_rho(1.3, 0.4)) == Classification::General);
  CHECK(to_string(Classification::DoneyC11Dual) == "doney_c11_dual");
}

// tan(pi alpha / 2) changes sign at alpha = 1, so rho rises with beta for
// alpha < 1 and falls for alpha > 1 (beta = -1 is the upper edge 1/alpha).
TEST_CASE("property: rho_from_beta is monotone and skew symmetric") {
  oracle::Gen g(11);
  for (int i = 0; i < 300; ++i) {
    double a = g.uniform(0.05, 1.99);
    if (std::abs(a - 1.0) < 1e-3) continue;
    const double b1 = g.uniform(-1.0, 1.0);
    const double b2 = g.uniform(-1.0, 1.0);
    const double r1 = rho_from_beta(a, b1);
    const double r2 = rho_from_beta(a, b2);
    if (b1 < b2) CHECK((a < 1.0 ? r1 <= r2 : r1 >= r2));
    CHECK(rho_from_beta(a, -b1) == doctest::Approx(1.0 - r1).epsilon(1e-12));
    const auto band = admissible_rho_band(a);
    CHECK(r1 >= band.lo - 1e-12);
    CHECK(r1 <= band.hi + 1e-12);
  }
}

TEST_CASE("property: dual is an involution and swaps one-sided classes") {
  oracle::Gen g(12);
  for (int i = 0; i < 200; ++i) {
    const StableLaw l = g.law();
    CHECK(dual(dual(l)).rho() == doctest::Approx(l.rho()).epsilon(1e-15));
  }
  for (double a : {0.4, 0.8, 1.2, 1.7}) {
    const auto band = admissible_rho_band(a);
    for (double r : {band.lo, band.hi, 0.5}) {
      const StableLaw l = StableLaw::from_alpha_rho(a, r);
      const Classification c = classify(l);
      const Classification d = classify(dual(l));
      if (c == Classification::SpectrallyPositive) CHECK(d == Classification::SpectrallyNegative);
      if (c == Classification::SpectrallyNegative) CHECK(d == Classification::SpectrallyPositive);
      if (c == Classification::Symmetric) CHECK(d == Classification::Symmetric);
    }
  }
}
