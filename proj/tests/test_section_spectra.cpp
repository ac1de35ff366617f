#include "conetorsion/section_spectra.hpp"

#include <doctest.h>
#include <json.hpp>

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace ct;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286061;

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::map<long, int> square_torus_counts(long nmax) {
  std::map<long, int> out;
  for (long a = -nmax; a <= nmax; ++a)
    for (long b = -nmax; b <= nmax; ++b) {
      long n = a * a + b * b;
      if (n > 0 && n <= nmax * nmax) ++out[n];
    }
  return out;
}

}  // namespace

TEST_CASE("circle section structure") {
  auto s = make_circle(1.5, 100.0);
  CHECK(s.dim == 1);
  CHECK(s.label == "circle:r=1.5");
  CHECK(s.harmonic_ranks == std::vector<int>{1, 1});
  CHECK(s.euler_characteristic() == 0);
  CHECK(s.coexact[1].empty());
  REQUIRE(s.coexact[0].size() == 15);
  for (int n = 1; n <= 15; ++n) {
    CHECK(rel_close(s.coexact[0][n - 1].lambda, n * n / 2.25, 1e-15));
    CHECK(s.coexact[0][n - 1].mult == 2);
  }
  CHECK(rel_close(s.volume, 3 * pi, 1e-15));
  CHECK_THROWS_AS(make_circle(0.0, 10.0), std::invalid_argument);
}

TEST_CASE("torus section matches a lattice count") {
  auto s = make_flat_torus(1.0, 1.0, 4 * pi * pi * 400);
  CHECK(s.harmonic_ranks == std::vector<int>{1, 2, 1});
  CHECK(s.euler_characteristic() == 0);
  CHECK(s.coexact[0] == s.coexact[1]);
  CHECK(s.coexact[2].empty());
  auto counts = square_torus_counts(20);
  REQUIRE(s.coexact[0].size() == counts.size());
  std::size_t i = 0;
  for (const auto& [n, c] : counts) {
    CHECK(rel_close(s.coexact[0][i].lambda, 4 * pi * pi * n, 1e-13));
    CHECK(s.coexact[0][i].mult == c);
    ++i;
  }
}

TEST_CASE("rectangular torus multiplicities sum to the lattice size") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> side(0.5, 2.0);
  for (int t = 0; t < 6; ++t) {
    double L1 = side(gen), L2 = side(gen), cut = 4000.0;
    auto s = make_flat_torus(L1, L2, cut);
    long total = 0;
    for (const auto& e : s.coexact[0]) total += e.mult;
    long brute = 0;
    for (long a = -200; a <= 200; ++a)
      for (long b = -200; b <= 200; ++b) {
        if (a == 0 && b == 0) continue;
        double lam = 4 * pi * pi * (a * a / (L1 * L1) + b * b / (L2 * L2));
        if (lam <= cut) ++brute;
      }
    CHECK(total == brute);
  }
}

TEST_CASE("section JSON round trip") {
  for (const auto& s : {make_circle(0.7, 300.0), make_flat_torus(1.0, 1.3, 900.0)}) {
    auto back = parse_section_json(section_to_json(s));
    CHECK(back.dim == s.dim);
    CHECK(back.coexact == s.coexact);
    CHECK(back.harmonic_ranks == s.harmonic_ranks);
    CHECK(back.heat_coeffs == s.heat_coeffs);
    CHECK(back.volume == s.volume);
    CHECK(back.kind == SectionKind::File);
  }
}

TEST_CASE("section JSON errors") {
  auto base = nlohmann::json::parse(section_to_json(make_circle(1.0, 30.0)));
  auto fails = [&](auto edit) {
    auto j = base;
    edit(j);
    return j.dump();
  };
  CHECK_THROWS_AS(parse_section_json("{"), SchemaError);
  CHECK_THROWS_AS(parse_section_json(fails([](auto& j) { j.erase("volume"); })), SchemaError);
  CHECK_THROWS_AS(parse_section_json(fails([](auto& j) { j["coexact"]["0"][0][0] = -1.0; })), SchemaError);
  CHECK_THROWS_AS(parse_section_json(fails([](auto& j) { j["coexact"]["0"][1][0] = 0.5; })), OrderingError);
  CHECK_THROWS_AS(parse_section_json(fails([](auto& j) { j["harmonic_ranks"] = {1, 2}; })), DualityError);
  CHECK_THROWS_AS(parse_section_json(fails([](auto& j) { j["coexact"]["1"] = {{1.0, 2}}; })), DualityError);
  CHECK_THROWS_AS(parse_section_json(fails([](auto& j) { j["heat_coeffs"]["0"][0] = 3.0; })), SchemaError);
  CHECK_THROWS_AS(parse_section_json(fails([](auto& j) { j["heat_coeffs"]["0"][1] = 0.1; })), SchemaError);
  CHECK_THROWS_AS(load_section("/nonexistent/section.json"), SchemaError);

  auto tor = nlohmann::json::parse(section_to_json(make_flat_torus(1.0, 1.0, 200.0)));
  tor["coexact"]["1"][0][1] = 5;
  CHECK_THROWS_AS(parse_section_json(tor.dump()), DualityError);
}

TEST_CASE("alpha and mu") {
  CHECK(alpha_q(1, 0) == 0);
  CHECK(alpha_q(2, 0) == Rational(-1, 2));
  CHECK(alpha_q(2, 1) == Rational(1, 2));
  CHECK(alpha_q(5, 4) == Rational(2));
  auto s = make_circle(1.0, 100.0);
  auto am = alpha_mu(0, 3, s);
  CHECK(am.mu == 3.0);
  CHECK(am.integer_mu);
  auto t = make_flat_torus(1.0, 1.0, 200.0);
  auto at = alpha_mu(0, 1, t);
  CHECK(rel_close(at.mu, std::sqrt(4 * pi * pi + 0.25), 1e-15));
  CHECK_FALSE(at.integer_mu);
  CHECK_THROWS_AS(alpha_mu(0, 100, s), std::out_of_range);
}

TEST_CASE("heat residues of the coexact zeta") {
  for (double r : {0.5, 1.0, 3.0}) {
    auto res = coexact_heat_residues(make_circle(r, 50.0), 0);
    REQUIRE(res.size() == 1);
    CHECK(rel_close(res[0].value, 2 * r, 1e-14));
  }
  auto t = make_flat_torus(1.2, 0.8, 500.0);
  for (int q : {0, 1}) {
    auto res = coexact_heat_residues(t, q);
    REQUIRE(res.size() == 2);
    CHECK(res[0].structural_zero);
    CHECK(res[0].value == 0.0);
    CHECK(rel_close(res[1].value, 1.2 * 0.8 / (2 * pi), 1e-14));
  }
}

TEST_CASE("zeta at zero from heat data") {
  auto c = make_circle(1.0, 50.0);
  CHECK(zeta_zero(c, 0) == -1);
  CHECK(zeta_zero(c, 1) == -1);
  CHECK(zeta_cex_zero(c, 0) == -1);
  CHECK(zeta_cex_zero(c, 1) == 0);
  auto t = make_flat_torus(1.0, 1.0, 100.0);
  CHECK(zeta_zero(t, 1) == -2);
  CHECK(zeta_cex_zero(t, 1) == -1);
  CHECK(zeta_cex_zero(t, 2) == 0);
}

TEST_CASE("section zeta against riemann and epstein oracles") {
  for (double r : {1.0, 2.0}) {
    auto s = make_circle(r, 100.0);
    for (double w : {1.5, 2.0, 0.25, -0.75})
      CHECK(rel_close(section_zeta(s, 0, w).value, 2 * std::pow(r, 2 * w) * boost::math::zeta(2 * w), 1e-13));
    CHECK_THROWS_AS(section_zeta(s, 0, 0.5), ContinuationError);
  }
  auto t = make_flat_torus(1.0, 1.0, 100.0);
  CHECK(rel_close(section_zeta(t, 0, 1.5).value, 0.0364185200961284778, 1e-11));
  CHECK(rel_close(section_zeta(t, 0, 0.75).value, -0.639860892652151581, 1e-11));
  CHECK(rel_close(section_zeta(t, 0, -0.5).value, -1.43774554488764351, 1e-11));
  CHECK(rel_close(section_zeta(t, 1, 3.0).value, 7.57191007869468729e-5, 1e-11));
  CHECK_THROWS_AS(section_zeta(t, 0, 1.0), ContinuationError);
}

TEST_CASE("epstein continuation is symmetric under swapping sides") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> side(0.6, 1.8), ws(-1.5, 2.5);
  for (int t = 0; t < 10; ++t) {
    double L1 = side(gen), L2 = side(gen), w = ws(gen);
    if (std::abs(w - 1.0) < 1e-3 || std::abs(w) < 1e-3) continue;
    CHECK(rel_close(epstein_zeta_2d(L1, L2, w), epstein_zeta_2d(L2, L1, w), 1e-11));
    CHECK(rel_close(shifted_epstein_zeta_2d(L1, L2, 0.0, w), epstein_zeta_2d(L1, L2, w), 1e-11));
  }
}

TEST_CASE("zeta_Q paths") {
  auto c = make_circle(1.0, 1e4);
  CHECK(rel_close(zeta_Q(c, 0, 3.0).value, 2.40411380631918857, 1e-12));
  auto ct3 = zeta_Q(c, 0, 3.0, ZetaMethod::Truncation);
  CHECK(std::abs(ct3.value - 2.40411380631918857) <= ct3.tail_bound);
  CHECK(std::abs(ct3.value - 2.40411380631918857) <= 1e-8);
  CHECK(rel_close(zeta_Q(c, 0, 1.5).value, 5.22475069737097669, 1e-12));
  CHECK_THROWS_AS(zeta_Q(c, 0, 1.0), ContinuationError);
  CHECK_THROWS_AS(zeta_Q(c, 0, -1.0), std::domain_error);

  auto t = make_flat_torus(1.0, 1.0, 1e4 * 4 * pi * pi);
  double cont = zeta_Q(t, 0, 3.0, ZetaMethod::Continuation).value;
  double ewald = zeta_Q(t, 0, 3.0, ZetaMethod::ShiftedEwald).value;
  auto trunc = zeta_Q(t, 0, 3.0, ZetaMethod::Truncation);
  CHECK(std::abs(cont - ewald) <= 1e-10);
  CHECK(std::abs(cont - trunc.value) <= 1e-6);
  CHECK(trunc.tail_bound > 0.0);
  CHECK(std::abs(zeta_Q(t, 1, 1.0, ZetaMethod::Continuation).value - zeta_Q(t, 1, 1.0, ZetaMethod::ShiftedEwald).value) <=
        1e-10);
  CHECK_THROWS_AS(zeta_Q(t, 0, 2.0), ContinuationError);
  CHECK_THROWS_AS(zeta_Q(c, 0, 3.0, ZetaMethod::ShiftedEwald), ContinuationError);
}

TEST_CASE("log ratio series on a synthetic convergent instance") {
  auto zeta_tail = [](int w) { return w == 1 ? euler_gamma - 1.0 : boost::math::zeta(static_cast<double>(w)) - 1.0; };
  double series = log_ratio_series(0.5, zeta_tail);
  double subtracted = 0.0;
  const long N = 2000000;
  for (long n = 2; n <= N; ++n) subtracted += std::log((n + 0.5) / (n - 0.5)) - 1.0 / n;
  double direct = subtracted + 2 * 0.5 * (euler_gamma - 1.0);
  CHECK(std::abs(series - direct) <= 1e-9);
  CHECK(std::abs(series + std::log(1.5)) <= 1e-12);
  CHECK(std::abs(log_ratio_series(-0.5, zeta_tail) - (-series)) <= 1e-15);
  CHECK(log_ratio_series(0.0, zeta_tail) == 0.0);
}

TEST_CASE("log ratio series matches a convergent direct sum") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> al(-0.9, 0.9);
  for (int t = 0; t < 5; ++t) {
    double a = al(gen);
    auto zeta_odd = [](int w) {
      double s = 0.0;
      for (int k = 1; k <= 6; ++k) s += std::pow(static_cast<double>(k * k + 1), -0.5 * w);
      return s;
    };
    double direct = 0.0;
    for (int k = 1; k <= 6; ++k) {
      double mu = std::sqrt(k * k + 1.0);
      direct += std::log((1 + a / mu) / (1 - a / mu));
    }
    CHECK(std::abs(log_ratio_series(a, zeta_odd, 1e-15) - direct) <= 1e-11);
  }
}

TEST_CASE("regularized log ratio on the torus") {
  auto t = make_flat_torus(1.0, 1.0, 1e3);
  double r0 = regularized_log_ratio(t, 0);
  double r1 = regularized_log_ratio(t, 1);
  CHECK(std::abs(r0 + r1) <= 1e-14);
  CHECK(std::isfinite(r0));
  CHECK(regularized_log_ratio(make_flat_torus(1.0, 1.0, 1e3), 0) == r0);
  CHECK_THROWS_AS(regularized_log_ratio(make_circle(1.0, 100.0), 0), ContinuationError);
}

TEST_CASE("section analytic torsion") {
  CHECK(rel_close(section_analytic_torsion(make_circle(1.0, 10.0)), std::log(2 * pi), 1e-15));
  CHECK(rel_close(section_analytic_torsion(make_circle(2.0, 10.0)), std::log(4 * pi), 1e-15));
  CHECK(section_analytic_torsion(make_flat_torus(1.0, 2.0, 100.0)) == 0.0);
  auto j = nlohmann::json::parse(section_to_json(make_circle(1.0, 30.0)));
  CHECK_THROWS_AS(section_analytic_torsion(parse_section_json(j.dump())), SectionError);
  j["torsion_logT"] = 1.25;
  CHECK(section_analytic_torsion(parse_section_json(j.dump())) == 1.25);
}
