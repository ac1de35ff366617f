#include "conetorsion/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ct;

namespace {

constexpr double pi = std::numbers::pi;

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("bessel values against high-precision references") {
  CHECK(rel_close(bessel_eval(BesselKind::J, 2.5, 7.3), -0.300849431587499808, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::J, 0.0, 0.1), 0.997501562066040032, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::J, 20.0, 30.0), 0.00483101999340406454, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::J, -0.5, 2.0), -0.234785710406248469, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::Y, 1.5, 3.2), 0.165183693678222109, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::Y, 0.0, 50.0), -0.0980649954700770790, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::Y, -0.5, 1.0), 0.671396707141803090, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::I, 3.0, 2.5), 0.474370408778035590, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::K, 1.0, 2.0), 0.139865881816522427, 1e-12));
  CHECK(rel_close(bessel_eval(BesselKind::K, 2.5, 0.5), 20.4259044664984845, 1e-12));
}

TEST_CASE("bessel closed forms") {
  CHECK(std::abs(bessel_eval(BesselKind::J, 0.5, pi)) <= 1e-14);
  CHECK(std::abs(bessel_eval(BesselKind::J, 0.0, 1e-8) - 1.0) <= 1e-15);
  CHECK(rel_close(bessel_eval(BesselKind::I, 0.5, 1.0), std::sqrt(2.0 / pi) * std::sinh(1.0), 1e-13));
}

TEST_CASE("half-integer closed forms hold on random arguments") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> xs(0.1, 200.0);
  for (int i = 0; i < 200; ++i) {
    double x = xs(gen);
    CHECK(rel_close(bessel_eval(BesselKind::J, 0.5, x), std::sqrt(2.0 / (pi * x)) * std::sin(x), 1e-12));
    CHECK(rel_close(bessel_eval(BesselKind::J, -0.5, x), std::sqrt(2.0 / (pi * x)) * std::cos(x), 1e-12));
  }
}

TEST_CASE("bessel derivative matches a central difference") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> nus(0.0, 10.0), xs(0.5, 40.0);
  for (int i = 0; i < 100; ++i) {
    double nu = nus(gen), x = xs(gen), h = 1e-5;
    double fd = (bessel_eval(BesselKind::J, nu, x + h) - bessel_eval(BesselKind::J, nu, x - h)) / (2 * h);
    CHECK(std::abs(bessel_eval_prime(BesselKind::J, nu, x) - fd) <= 1e-8);
  }
}

TEST_CASE("bessel domain errors") {
  CHECK_THROWS_AS(bessel_eval(BesselKind::J, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_eval(BesselKind::Y, 1.0, -2.0), std::domain_error);
  CHECK_THROWS_AS(bessel_eval(BesselKind::K, 200.0, 0.01), std::overflow_error);
}

TEST_CASE("zeros of the basic families") {
  CHECK(std::abs(bessel_zero(ZeroFamily::j(0.5), 3) - 3 * pi) <= 1e-12);
  CHECK(std::abs(bessel_zero(ZeroFamily::j(0.0), 1) - 2.404825557695773) <= 1e-12);
  CHECK(rel_close(bessel_zero(ZeroFamily::j(2.5), 10), 34.4704883312849886657, 1e-12));
  CHECK(rel_close(bessel_zero(ZeroFamily::j(7.0), 3), 18.2875828324817264461, 1e-12));
  CHECK(rel_close(bessel_zero(ZeroFamily::y(1.5), 3), 9.31786646179106537901, 1e-12));
  CHECK(rel_close(bessel_zero(ZeroFamily::y(0.0), 1), 0.893576966279167521585, 1e-12));
  auto jh = family_zeros(ZeroFamily::jhat(1.0, -0.5), 3);
  CHECK(rel_close(jh[0], 1.35660202743632882722, 1e-12));
  CHECK(rel_close(jh[1], 5.23357796851343260743, 1e-12));
  CHECK(rel_close(jh[2], 8.47678416074942444603, 1e-12));
  CHECK(rel_close(bessel_zero(ZeroFamily::jhat(2.5, 1.0), 1), 4.06731590883869629858, 1e-12));
}

TEST_CASE("zeros of the frustum families") {
  auto m = family_zeros_below(ZeroFamily::mixed(1.3, 0.5, 1.0, 2.0), 8.0);
  REQUIRE(m.size() == 3);
  CHECK(rel_close(m[0], 1.72878693533871129994, 1e-11));
  CHECK(rel_close(m[1], 4.78475639808312730528, 1e-11));
  CHECK(rel_close(m[2], 7.89890132201470351353, 1e-11));
  auto u = family_zeros_below(ZeroFamily::upsilon(1.3, 1.0, 2.0), 8.0);
  REQUIRE(u.size() == 2);
  CHECK(rel_close(u[0], 3.24627404198952746435, 1e-11));
  CHECK(rel_close(u[1], 6.33906960375578184119, 1e-11));
  auto f = family_zeros_below(ZeroFamily::frustum_f(1.3, 1.0, 2.0), 8.0);
  REQUIRE(f.size() == 3);
  CHECK(rel_close(f[0], 1.93358110834084842358, 1e-11));
  CHECK(rel_close(f[1], 4.86627145020619845577, 1e-11));
  CHECK(rel_close(f[2], 7.94904729922357233323, 1e-11));
}

TEST_CASE("zeros strictly increase and are roots") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> nus(0.0, 20.0);
  for (int trial = 0; trial < 12; ++trial) {
    double nu = nus(gen);
    for (auto fam : {ZeroFamily::j(nu), ZeroFamily::y(nu), ZeroFamily::jhat(nu, 0.5 - trial % 3)}) {
      auto z = family_zeros(fam, 200);
      REQUIRE(z.size() == 200);
      for (std::size_t k = 1; k < z.size(); ++k) CHECK(z[k] > z[k - 1]);
      for (std::size_t k = 0; k < z.size(); k += 37) {
        double h = 1e-9 * z[k];
        long double a = family_value(fam, z[k] - h), b = family_value(fam, z[k] + h);
        CHECK((a <= 0) != (b <= 0));
      }
    }
  }
}

TEST_CASE("robin reduction to a shifted plain family") {
  for (int twice = 1; twice <= 11; twice += 2) {
    double a = twice / 2.0;
    auto hp = family_zeros(ZeroFamily::jhat(a, a), 40);
    auto jp = family_zeros(ZeroFamily::j(a - 1.0), 40);
    auto hm = family_zeros(ZeroFamily::jhat(a, -a), 40);
    auto jm = family_zeros(ZeroFamily::j(a + 1.0), 40);
    for (int k = 0; k < 40; ++k) {
      CHECK(rel_close(hp[k], jp[k], 1e-12));
      CHECK(rel_close(hm[k], jm[k], 1e-12));
    }
  }
  for (int k = 1; k <= 10; ++k) CHECK(std::abs(bessel_zero(ZeroFamily::jhat(0.5, 0.5), k) - (k - 0.5) * pi) <= 1e-11);
}

TEST_CASE("frustum F small-argument normalization") {
  for (double nu : {1.5, 2.5, 3.0}) {
    double l1 = 0.7, l2 = 1.9, x = 1e-6;
    double lhs = x * static_cast<double>(family_value(ZeroFamily::frustum_f(nu, l1, l2), x));
    double rhs = 2.0 / pi * std::pow(l2, nu - 1.0) / std::pow(l1, nu);
    CHECK(rel_close(lhs, rhs, 1e-6));
  }
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(ZeroFamily::j(-2.0).validate(), IntegerOrderError);
  CHECK_THROWS_AS(ZeroFamily::jhat(-3.0, 0.5).validate(), IntegerOrderError);
  CHECK_NOTHROW(ZeroFamily::y(2.0).validate());
  CHECK_NOTHROW(ZeroFamily::j(-1.5).validate());
  CHECK_THROWS_AS(ZeroFamily::upsilon(1.0, 2.0, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS(bessel_zero(ZeroFamily::j(1.0), 0));
}

TEST_CASE("harmonic numbers") {
  CHECK(harmonic_number(0) == 0);
  CHECK(harmonic_number(2) == Rational(3, 2));
  CHECK(harmonic_number(5) == Rational(137, 60));
  for (int k = 1; k < 40; ++k) CHECK(harmonic_number(k) - harmonic_number(k - 1) == Rational(1, k));
}

TEST_CASE("quadratic bessel zeta at zero") {
  for (double nu : {0.5, 1.0, 1.5}) {
    auto z = bessel_zeta_from_zeros(nu, 0.0, 1.0);
    CHECK(std::abs(z.value + 0.5 * (nu + 0.5)) <= 1e-12);
    CHECK(std::abs(z.derivative - bessel_zeta_closed(nu, 0.0, 1.0).derivative) <= 1e-10);
  }
  double zeta_prime_0 = -0.918938533204672741780;
  double riemann = 2.0 * zeta_prime_0 + std::log(pi);
  CHECK(std::abs(riemann + std::log(2.0)) <= 1e-15);
  CHECK(std::abs(bessel_zeta_from_zeros(0.5, 0.0, 1.0).derivative - riemann) <= 1e-10);
  CHECK(std::abs(bessel_zeta_closed(0.5, 0.0, 1.0).derivative + std::log(2.0)) <= 1e-14);
}

TEST_CASE("quadratic bessel zeta with mass and length") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> nus(0.0, 4.0), qs(0.0, 2.0), ls(0.3, 3.0);
  for (int i = 0; i < 8; ++i) {
    double nu = nus(gen), q = qs(gen), l = ls(gen);
    auto a = bessel_zeta_closed(nu, q, l), b = bessel_zeta_from_zeros(nu, q, l);
    CHECK(std::abs(a.value - b.value) <= 1e-14);
    CHECK(std::abs(a.derivative - b.derivative) <= 1e-9);
  }
}
