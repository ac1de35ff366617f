#include "conetorsion/cone_frustum_spectra.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace ct;

namespace {

struct Ref {
  double value;
  int mult;
};

std::vector<double> expand(const EigenList& e, double below) {
  std::vector<double> v;
  for (const auto& x : e.entries)
    if (x.value <= below)
      for (int i = 0; i < x.mult; ++i) v.push_back(x.value);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<double> expand(const std::vector<Ref>& refs) {
  std::vector<double> v;
  for (const auto& r : refs)
    for (int i = 0; i < r.mult; ++i) v.push_back(r.value);
  return v;
}

bool contains(const EigenList& e, double value, int mult) {
  for (const auto& x : e.entries)
    if (std::abs(x.value - value) <= 1e-10 * value && x.mult == mult) return true;
  return false;
}

const std::vector<Ref> neumann_disc = {{3.3899577166718887, 2}, {9.328363213746358, 2},  {14.681970642123893, 1},
                                       {17.64998851974964, 2},  {28.27637124872566, 2},  {28.424282047372292, 2},
                                       {41.16013348015309, 2},  {44.97222241779394, 2},  {49.2184563216946, 1},
                                       {56.2689937733846, 2}};

const std::vector<Ref> dirichlet_disc = {{5.783185962946785, 1},  {14.681970642123893, 2}, {26.37461642716339, 2},
                                         {30.471262343662086, 1}, {40.70646581820032, 2},  {49.2184563216946, 2},
                                         {57.58294090329112, 2},  {70.84999891909586, 2},  {74.88700679069518, 1}};

}  // namespace

TEST_CASE("cone over the unit circle is the unit disc") {
  auto s = make_circle(1.0, 1e3);
  auto e0 = expand(cone_spectrum(s, 0, 1.0, 60.0), 60.0);
  auto n0 = expand(neumann_disc);
  REQUIRE(e0.size() == n0.size());
  for (std::size_t i = 0; i < n0.size(); ++i) CHECK(std::abs(e0[i] - n0[i]) <= 1e-10 * n0[i]);

  auto e2 = expand(cone_spectrum(s, 2, 1.0, 75.0), 75.0);
  auto d2 = expand(dirichlet_disc);
  REQUIRE(e2.size() == d2.size());
  for (std::size_t i = 0; i < d2.size(); ++i) CHECK(std::abs(e2[i] - d2[i]) <= 1e-10 * d2[i]);

  auto e1 = expand(cone_spectrum(s, 1, 1.0, 60.0), 60.0);
  std::vector<double> merged = n0;
  for (double v : d2)
    if (v <= 60.0) merged.push_back(v);
  std::sort(merged.begin(), merged.end());
  REQUIRE(e1.size() == merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) CHECK(std::abs(e1[i] - merged[i]) <= 1e-10 * merged[i]);
}

TEST_CASE("annulus over the circle") {
  auto s = make_circle(1.0, 1e3);
  auto a0 = frustum_spectrum(s, 0, FrustumBC::Absolute, 1.0, 2.0, 45.0);
  for (double v : {10.218113344665941, 39.845756341109575}) CHECK(contains(a0, v, 1));
  for (double v : {0.4587840638543865, 10.774617120804406, 40.36329215217223}) CHECK(contains(a0, v, 2));
  auto a2 = frustum_spectrum(s, 2, FrustumBC::Absolute, 1.0, 2.0, 45.0);
  for (double v : {9.753322124750715, 39.35599565759258}) CHECK(contains(a2, v, 1));
  CHECK_FALSE(contains(a2, 10.218113344665941, 1));
  auto m0 = frustum_spectrum(s, 0, FrustumBC::Mixed, 1.0, 2.0, 45.0);
  CHECK_FALSE(m0.entries.empty());
  CHECK(m0.geometry.frustum);
  CHECK(m0.geometry.bc == FrustumBC::Mixed);
}

TEST_CASE("serial and parallel enumeration agree exactly") {
  auto s = make_flat_torus(1.0, 1.2, 4e3);
  for (int q = 0; q <= 3; ++q) {
    auto a = cone_spectrum(s, q, 1.0, 300.0, Execution::Serial);
    auto b = cone_spectrum(s, q, 1.0, 300.0, Execution::Parallel);
    CHECK(a.to_json() == b.to_json());
    auto c = frustum_spectrum(s, q, FrustumBC::Absolute, 0.5, 1.0, 300.0, Execution::Serial);
    auto d = frustum_spectrum(s, q, FrustumBC::Absolute, 0.5, 1.0, 300.0, Execution::Parallel);
    CHECK(c.to_json() == d.to_json());
  }
}

TEST_CASE("cone eigenvalues scale as one over l squared") {
  auto s = make_circle(1.0, 1e4);
  for (int q = 0; q <= 2; ++q) {
    auto a = cone_spectrum(s, q, 1.0, 400.0);
    auto b = cone_spectrum(s, q, 2.0, 100.0);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i)
      CHECK(std::abs(4.0 * b.entries[i].value - a.entries[i].value) <= 1e-12 * a.entries[i].value);
  }
}

TEST_CASE("hodge pairing of cone rows") {
  for (const auto& s : {make_circle(1.0, 1e4), make_flat_torus(1.0, 1.0, 1e4)}) {
    std::vector<EigenList> lists;
    for (int q = 0; q <= s.dim + 1; ++q) lists.push_back(cone_spectrum(s, q, 1.0, 500.0));
    auto d = cone_duality(lists, 1e-10);
    CHECK(d.ok);
    CHECK(d.max_deviation <= 1e-10);
  }
}

TEST_CASE("weyl counting on the cone") {
  auto s = make_circle(1.0, 1e4);
  for (int q = 0; q <= 2; ++q) {
    auto e = cone_spectrum(s, q, 1.0, 8500.0);
    CHECK(e.count_below(8500.0) >= 2000);
    auto rep = verify_spectrum(e, s);
    REQUIRE(rep.weyl.size() == 3);
    CHECK(std::abs(rep.weyl.back().ratio - 1.0) <= 0.05);
    long long total = 0;
    for (const auto& [name, n] : rep.family_counts) total += n;
    CHECK(total == e.count_below(8500.0));
  }
  auto t = make_flat_torus(1.0, 1.0, 1e4);
  auto e = cone_spectrum(t, 1, 1.0, 2000.0);
  CHECK(std::abs(verify_spectrum(e, t).weyl.back().ratio - 1.0) <= 0.1);
}

TEST_CASE("spectrum JSON shape") {
  auto e = cone_spectrum(make_circle(1.0, 100.0), 0, 1.0, 20.0);
  auto j = nlohmann::json::parse(e.to_json());
  CHECK(j["q"] == 0);
  CHECK(j["geometry"]["type"] == "cone");
  CHECK(j["entries"].size() == e.entries.size());
  CHECK(j["entries"][0][0].get<double>() == e.entries[0].value);
}

TEST_CASE("spectrum errors") {
  auto s = make_circle(1.0, 50.0);
  CHECK_THROWS_AS(cone_spectrum(s, 3, 1.0, 10.0), std::out_of_range);
  CHECK_THROWS_AS(cone_spectrum(s, 0, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(frustum_spectrum(s, 0, FrustumBC::Absolute, 2.0, 1.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(cone_spectrum(s, 0, 1.0, 1e4), SectionError);

  nlohmann::json j;
  j["dim"] = 2;
  j["label"] = "odd-middle";
  j["volume"] = 1.0;
  j["cutoff"] = 100.0;
  j["coexact"] = {{"0", {{40.0, 1}}}, {"1", {{40.0, 1}}}, {"2", nlohmann::json::array()}};
  j["harmonic_ranks"] = {1, 1, 1};
  auto odd = parse_section_json(j.dump());
  CHECK_THROWS_AS(cone_spectrum(odd, 1, 1.0, 10.0), SectionError);
  CHECK_NOTHROW(frustum_spectrum(odd, 1, FrustumBC::Absolute, 0.5, 1.0, 10.0));
}
