#include "conetorsion/cone_frustum_spectra.hpp"

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ct {

std::string to_string(FrustumBC bc) { return bc == FrustumBC::Mixed ? "mixed" : "abs"; }

namespace {

struct RowTask {
  ZeroFamily family;
  std::string row;
  int qprime;
  int n;
  int mult;
  bool coexact_type;
};

struct RowPlan {
  std::vector<RowTask> tasks;
  // indices of the last task of each coexact sweep; those rows must come back empty
  std::vector<std::size_t> sentinels;
};

std::vector<double> alpha_list(int m) {
  std::vector<double> a;
  for (int q = 0; q <= m; ++q) a.push_back(to_double(alpha_q(m, q)));
  return a;
}


void add_coexact_rows(RowPlan& plan, const SectionSpectrum& s, int qp, const std::string& row, bool coexact_type,
                      double mu_limit, const std::function<ZeroFamily(double)>& make) {
  if (qp < 0 || qp > s.dim) return;
  const auto& list = s.coexact[qp];
  if (list.empty()) return;
  const double a = to_double(alpha_q(s.dim, qp));
  std::size_t n = 0;
  for (; n < list.size(); ++n) {
    double mu = std::sqrt(list[n].lambda + a * a);
    plan.tasks.push_back({make(mu), row, qp, static_cast<int>(n + 1), list[n].mult, coexact_type});
    if (std::sqrt(list[n].lambda) > mu_limit) break;
  }
  if (n == list.size()) {
    double need = mu_limit * mu_limit;
    if (s.cutoff < need) {
      std::ostringstream os;
      os << "spectrum: section cutoff " << s.cutoff << " below the required " << need << " for degree " << qp;
      throw SectionError(os.str());
    }
    return;
  }
  plan.sentinels.push_back(plan.tasks.size() - 1);
}

void add_single(RowPlan& plan, const ZeroFamily& f, const std::string& row, int qp, int mult, bool coexact_type) {
  if (mult <= 0) return;
  plan.tasks.push_back({f, row, qp, 0, mult, coexact_type});
}

EigenList run_plan(const RowPlan& plan, double xmax, double scale, Execution ex) {
  std::vector<std::vector<double>> zeros(plan.tasks.size());
  const long ntasks = static_cast<long>(plan.tasks.size());
  std::string error;
  if (ex == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < ntasks; ++i) {
      try {
        zeros[i] = family_zeros_below(plan.tasks[i].family, xmax);
      } catch (const std::exception& e) {
#pragma omp critical
        if (error.empty()) error = e.what();
      }
    }
    if (!error.empty()) throw ZeroError(error);
  } else {
    for (long i = 0; i < ntasks; ++i) zeros[i] = family_zeros_below(plan.tasks[i].family, xmax);
  }
  for (std::size_t i : plan.sentinels)
    if (!zeros[i].empty()) throw ZeroError("spectrum: enumeration window too small for row " + plan.tasks[i].row);
  EigenList out;
  for (std::size_t i = 0; i < plan.tasks.size(); ++i) {
    const auto& t = plan.tasks[i];
    for (std::size_t k = 0; k < zeros[i].size(); ++k) {
      double v = zeros[i][k] / scale;
      out.entries.push_back({v * v, t.mult, t.family.kind, t.row, t.qprime, t.n, static_cast<int>(k + 1), t.coexact_type});
    }
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const EigenEntry& a, const EigenEntry& b) { return a.value < b.value; });
  return out;
}

void check_ideal(const SectionSpectrum& s) {
  if (s.dim % 2 == 0 && s.harmonic_ranks[s.dim / 2] % 2 != 0)
    throw SectionError("ideal boundary condition needs an even middle harmonic rank");
}

}  // namespace

EigenList cone_spectrum(const SectionSpectrum& s, int q, double l, double Lambda, Execution ex) {
  if (q < 0 || q > s.dim + 1) throw std::out_of_range("cone_spectrum: degree out of range");
  if (!(l > 0.0) || !(Lambda > 0.0)) throw std::invalid_argument("cone_spectrum: l and cutoff must be positive");
  check_ideal(s);
  const int m = s.dim;
  const double X = std::sqrt(Lambda) * l;
  const double mu_limit = 1.05 * X + 1.0;
  const auto a = alpha_list(m);
  RowPlan plan;
  auto hat = [](double c) { return [c](double mu) { return ZeroFamily::jhat(mu, c); }; };
  auto plain = [](double mu) { return ZeroFamily::j(mu); };
  if (q <= m) add_coexact_rows(plan, s, q, "cex_q:hat", true, mu_limit, hat(a[q]));
  if (q - 1 >= 0) {
    add_coexact_rows(plan, s, q - 1, "cex_q-1:hat", false, mu_limit, hat(a[q - 1]));
    add_coexact_rows(plan, s, q - 1, "cex_q-1:J", true, mu_limit, plain);
  }
  if (q - 2 >= 0) add_coexact_rows(plan, s, q - 2, "cex_q-2:J", false, mu_limit, plain);
  const bool even = m % 2 == 0;
  const int p = m / 2;
  if (even && (q == p || q == p + 1)) {
    int half = s.harmonic_ranks[p] / 2;
    add_single(plan, ZeroFamily::j(0.5), "har_p:J(1/2)", p, half, q == p);
    add_single(plan, ZeroFamily::j(-0.5), "har_p:J(-1/2)", p, half, q == p);
  }
  if (q <= m && !(even && q == p))
    add_single(plan, ZeroFamily::jhat(std::abs(a[q]), a[q]), "har_q:hat", q, s.harmonic_ranks[q], true);
  if (q - 1 >= 0 && !(even && q == p + 1))
    add_single(plan, ZeroFamily::jhat(std::abs(a[q - 1]), a[q - 1]), "har_q-1:hat", q - 1, s.harmonic_ranks[q - 1], false);
  EigenList out = run_plan(plan, X, l, ex);
  out.q = q;
  out.geometry.frustum = false;
  out.geometry.l = l;
  out.cutoff = Lambda;
  return out;
}

EigenList frustum_spectrum(const SectionSpectrum& s, int q, FrustumBC bc, double l1, double l2, double Lambda,
                           Execution ex) {
  if (q < 0 || q > s.dim + 1) throw std::out_of_range("frustum_spectrum: degree out of range");
  if (!(l1 > 0.0) || !(l2 > l1)) throw std::invalid_argument("frustum_spectrum: need 0 < l1 < l2");
  if (!(Lambda > 0.0)) throw std::invalid_argument("frustum_spectrum: cutoff must be positive");
  const int m = s.dim;
  const double X = std::sqrt(Lambda);
  const double mu_limit = 1.05 * X * l2 + 1.0;
  const auto a = alpha_list(m);
  RowPlan plan;
  if (bc == FrustumBC::Mixed) {
    auto fwd = [&](double c) { return [c, l1, l2](double mu) { return ZeroFamily::mixed(mu, c, l1, l2, false); }; };
    auto rev = [&](double c) { return [c, l1, l2](double mu) { return ZeroFamily::mixed(mu, c, l1, l2, true); }; };
    if (q <= m) add_coexact_rows(plan, s, q, "cex_q:F(l1,l2)", true, mu_limit, fwd(a[q]));
    if (q - 1 >= 0) {
      add_coexact_rows(plan, s, q - 1, "cex_q-1:F(l1,l2)", false, mu_limit, fwd(a[q - 1]));
      add_coexact_rows(plan, s, q - 1, "cex_q-1:F(l2,l1)", true, mu_limit, rev(-a[q - 1]));
    }
    if (q - 2 >= 0) add_coexact_rows(plan, s, q - 2, "cex_q-2:F(l2,l1)", false, mu_limit, rev(-a[q - 2]));
    if (q <= m)
      add_single(plan, ZeroFamily::mixed(std::abs(a[q]), a[q], l1, l2), "har_q:F(l1,l2)", q, s.harmonic_ranks[q], true);
    if (q - 1 >= 0)
      add_single(plan, ZeroFamily::mixed(std::abs(a[q - 1]), a[q - 1], l1, l2), "har_q-1:F(l1,l2)", q - 1,
                 s.harmonic_ranks[q - 1], false);
  } else {
    auto hat = [&](double c) { return [c, l1, l2](double mu) { return ZeroFamily::upsilon_hat(mu, c, l1, l2); }; };
    auto plain = [&](double mu) { return ZeroFamily::upsilon(mu, l1, l2); };
    if (q <= m) add_coexact_rows(plan, s, q, "cex_q:Uhat", true, mu_limit, hat(a[q]));
    if (q - 1 >= 0) {
      add_coexact_rows(plan, s, q - 1, "cex_q-1:Uhat", false, mu_limit, hat(a[q - 1]));
      add_coexact_rows(plan, s, q - 1, "cex_q-1:U", true, mu_limit, plain);
    }
    if (q - 2 >= 0) add_coexact_rows(plan, s, q - 2, "cex_q-2:U", false, mu_limit, plain);
    if (q <= m)
      add_single(plan, ZeroFamily::upsilon_hat(std::abs(a[q]), a[q], l1, l2), "har_q:Uhat", q, s.harmonic_ranks[q], true);
    if (q - 1 >= 0)
      add_single(plan, ZeroFamily::upsilon_hat(std::abs(a[q - 1]), a[q - 1], l1, l2), "har_q-1:Uhat", q - 1,
                 s.harmonic_ranks[q - 1], false);
  }
  EigenList out = run_plan(plan, X, 1.0, ex);
  out.q = q;
  out.geometry = {true, 0.0, l1, l2, bc};
  out.cutoff = Lambda;
  return out;
}

long long EigenList::count_below(double lambda) const {
  long long n = 0;
  for (const auto& e : entries)
    if (e.value <= lambda) n += e.mult;
  return n;
}

std::string EigenList::to_json() const {
  nlohmann::json j;
  j["q"] = q;
  nlohmann::json g;
  if (geometry.frustum) {
    g["type"] = "frustum";
    g["l1"] = geometry.l1;
    g["l2"] = geometry.l2;
    g["bc"] = to_string(geometry.bc);
  } else {
    g["type"] = "cone";
    g["l"] = geometry.l;
  }
  j["geometry"] = g;
  j["cutoff"] = cutoff;
  nlohmann::json entries_json = nlohmann::json::array();
  for (const auto& e : entries)
    entries_json.push_back({e.value, e.mult, to_string(e.family) + ":" + e.row, e.qprime, e.n, e.k});
  j["entries"] = entries_json;
  return j.dump();
}

double weyl_constant(const SectionSpectrum& s, const EigenList& e) {
  const int d = s.dim + 1;
  double vol = e.geometry.frustum ? s.volume * (std::pow(e.geometry.l2, d) - std::pow(e.geometry.l1, d)) / d
                                  : s.volume * std::pow(e.geometry.l, d) / d;
  return boost::math::binomial_coefficient<double>(d, e.q) * vol /
         (std::pow(4.0 * std::numbers::pi, d / 2.0) * boost::math::tgamma(d / 2.0 + 1.0));
}

SpectrumReport verify_spectrum(const EigenList& e, const SectionSpectrum& s) {
  SpectrumReport r;
  r.empty = e.entries.empty();
  const double C = weyl_constant(s, e);
  const int d = s.dim + 1;
  for (double f : {0.25, 0.5, 1.0}) {
    double lam = f * e.cutoff;
    long long n = e.count_below(lam);
    double pred = C * std::pow(lam, d / 2.0);
    r.weyl.push_back({lam, n, pred, pred > 0 ? n / pred : 0.0});
  }
  for (const auto& x : e.entries) r.family_counts[to_string(x.family) + ":" + x.row] += x.mult;
  return r;
}

namespace {

std::vector<double> expand(const EigenList& e, bool coexact_type, double cutoff) {
  std::vector<double> v;
  for (const auto& x : e.entries)
    if (x.coexact_type == coexact_type && x.value <= cutoff)
      for (int i = 0; i < x.mult; ++i) v.push_back(x.value);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

DualityReport cone_duality(const std::vector<EigenList>& by_degree, double tol) {
  DualityReport r;
  for (std::size_t q = 0; q + 1 < by_degree.size(); ++q) {
    double cutoff = std::min(by_degree[q].cutoff, by_degree[q + 1].cutoff);
    auto a = expand(by_degree[q], true, cutoff * (1 - 1e-9));
    auto b = expand(by_degree[q + 1], false, cutoff * (1 - 1e-9));
    if (a.size() != b.size()) {
      r.ok = false;
      r.mismatches.push_back("degree " + std::to_string(q) + ": count " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
      continue;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      double dev = std::abs(std::sqrt(a[i]) - std::sqrt(b[i])) / std::sqrt(a[i]);
      r.max_deviation = std::max(r.max_deviation, dev);
      if (dev > tol) {
        r.ok = false;
        r.mismatches.push_back("degree " + std::to_string(q) + ": entry " + std::to_string(i));
        break;
      }
    }
  }
  return r;
}

}  // namespace ct
