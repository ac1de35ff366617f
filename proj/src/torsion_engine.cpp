#include "conetorsion/torsion_engine.hpp"

#include "conetorsion/special_functions.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ct {

namespace {

constexpr double kLog2 = std::numbers::ln2;

int neg1(int q) { return q % 2 == 0 ? 1 : -1; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

int half_rank(const SectionSpectrum& s) {
  int p = s.dim / 2;
  if (s.harmonic_ranks[p] % 2 != 0)
    throw std::domain_error("even-dimensional section needs an even middle rank, got r_" + std::to_string(p) + " = " +
                            std::to_string(s.harmonic_ranks[p]));
  return p;
}

double log_double_factorial(int n) {
  double acc = 0.0;
  for (int k = n; k > 1; k -= 2) acc += std::log(static_cast<double>(k));
  return acc;
}

struct Ingredients {
  double logT = 0.0;
  double chi = 0.0;
  double anomaly = 0.0;
  double b1 = 0.0;
};

Ingredients ingredients(const SectionSpectrum& s) {
  if (s.dim % 2 == 0) half_rank(s);
  Ingredients in;
  in.chi = s.euler_characteristic();
  in.logT = section_analytic_torsion(s);
  in.anomaly = anomaly_bm_cone(s);
  if (s.dim % 2 == 0) in.b1 = b1_term(s);
  return in;
}

Geometry cone_geometry(double l) {
  Geometry g;
  g.l = l;
  return g;
}

double cone_log_l_coeff(const SectionSpectrum& s) {
  int m = s.dim;
  double c = 0.0;
  if (m % 2 == 1) {
    int p = (m + 1) / 2;
    for (int q = 0; q < p; ++q) c += 0.5 * neg1(q) * (2 * p - 2 * q) * s.harmonic_ranks[q];
  } else {
    int p = m / 2;
    for (int q = 0; q < p; ++q) c += 0.5 * neg1(q) * (2 * p - 2 * q + 1) * s.harmonic_ranks[q];
    c += neg1(p) * s.harmonic_ranks[p] / 4.0;
  }
  return c;
}

TorsionReport assemble_cone(const SectionSpectrum& s, double l, const Ingredients& in) {
  TorsionReport r;
  r.section = s.label;
  r.geometry = cone_geometry(l);
  r.bc = "abs-ideal";
  r.log_l_coeff = cone_log_l_coeff(s);
  r.global = 0.5 * in.logT;
  r.det_ratio = det_ratio(DetKind::ConeAbsIdeal, s, r.geometry);
  r.euler = 0.25 * in.chi * kLog2;
  r.anomaly = in.anomaly;
  if (s.dim % 2 == 0) {
    r.b1 = in.b1;
    r.b2 = 0.25 * in.chi * kLog2;
    r.notes.push_back("b1 uses the zeta-regularized log-ratio series");
  }
  r.finalize();
  return r;
}

TorsionReport assemble_negative(const SectionSpectrum& s, double l, const Ingredients& in) {
  TorsionReport r;
  r.section = s.label;
  r.geometry = cone_geometry(l);
  r.bc = "negative";
  const auto& rk = s.harmonic_ranks;
  double det_cone = det_ratio(DetKind::ConeAbsIdeal, s, r.geometry);
  double logl = std::log(l);
  if (s.dim % 2 == 1) {
    int p = (s.dim + 1) / 2;
    double corr = 0.0;
    for (int q = 0; q <= p - 2; ++q)
      corr += neg1(q) * rk[q] * std::log(static_cast<double>(p - q) / static_cast<double>(p - q - 1));
    r.global = 0.5 * in.logT;
    r.det_ratio = -det_cone - corr;
    r.log_l_coeff = -cone_log_l_coeff(s);
    r.anomaly = in.anomaly;
    r.notes.push_back("det_ratio includes the correction -sum (-1)^q r_q log((p-q)/(p-q-1)) for q <= p-2");
  } else {
    int p = half_rank(s);
    double corr = neg1(p) * rk[p] / 2.0 * logl;
    double coeff = neg1(p) * rk[p] / 2.0;
    for (int q = 0; q < p; ++q) {
      corr += neg1(q) * rk[q] * logl;
      corr -= 0.5 * neg1(q) * rk[q] * std::log(static_cast<double>((2 * p - 2 * q - 1) * (2 * p - 2 * q + 1)));
      coeff += neg1(q) * rk[q];
    }
    r.global = 0.5 * in.logT;
    r.det_ratio = -det_cone + corr;
    r.log_l_coeff = -cone_log_l_coeff(s) + coeff;
    r.euler = 0.25 * in.chi * kLog2;
    r.anomaly = in.anomaly;
    r.b1 = -in.b1;
    r.b2 = 0.25 * in.chi * kLog2;
    r.notes.push_back("det_ratio includes +(-1)^p (r_p/2) log l + sum_{q<p} (-1)^q r_q log l");
    r.notes.push_back("det_ratio includes -1/2 sum_{q<p} (-1)^q r_q log((2p-2q-1)(2p-2q+1))");
  }
  r.finalize();
  return r;
}

TorsionReport assemble_frustum(const SectionSpectrum& s, double l1, double l2, FrustumBC bc, double logT) {
  TorsionReport r;
  r.section = s.label;
  r.geometry.frustum = true;
  r.geometry.l1 = l1;
  r.geometry.l2 = l2;
  r.geometry.bc = bc;
  r.bc = to_string(bc);
  r.euler = 0.5 * s.euler_characteristic() * kLog2;
  r.anomaly = anomaly_bm_frustum_terms(s, bc).value;
  if (bc == FrustumBC::Absolute) {
    r.global = logT;
    r.det_ratio = det_ratio(DetKind::FrustumAbs, s, r.geometry);
  }
  r.notes.push_back("log_l_coeff not defined for a frustum");
  r.finalize();
  return r;
}

struct Combination {
  std::string part;
  int q;
  int j;
  Rational fp;
};

void accumulate(AnomalyResult& out, const SectionSpectrum& s, const std::vector<Combination>& combos, double weight_base) {
  for (const auto& c : combos) {
    auto res = coexact_heat_residues(s, c.q);
    const auto& e = res[c.j - 1];
    if (e.structural_zero) continue;
    double w = weight_base * neg1(c.q);
    double contrib = w * to_double(c.fp) * e.value;
    out.terms.push_back({c.part, c.q, c.j, c.fp, e.value, w, contrib});
    out.value += contrib;
  }
}

Rational regular_fp(const RationalPoly& poly, const std::string& what) {
  PhiValue v = phi_finite_part(poly);
  if (!v.regular()) throw std::logic_error(what + ": combination has nonzero residue " + v.residue.str());
  return *v.finite_part;
}

Rational regular_fp(const Composite& c, const std::string& what) {
  CompositePhi v = composite_finite_part(c);
  if (!v.regular())
    throw std::logic_error(what + ": composite has nonzero residue (inner " + v.inner.residue.str() + ", outer " +
                           v.outer.residue.str() + ")");
  return v.exact_finite_part();
}

bool residue_skipped(const SectionSpectrum& s, int q, int j) {
  auto res = coexact_heat_residues(s, q);
  return res[j - 1].structural_zero;
}

}  // namespace

void TorsionReport::finalize() { total = global + det_ratio + euler + anomaly + b1 + b2; }

std::string TorsionReport::to_json() const {
  nlohmann::ordered_json g;
  if (geometry.frustum) {
    g["kind"] = "frustum";
    g["l1"] = geometry.l1;
    g["l2"] = geometry.l2;
  } else {
    g["kind"] = "cone";
    g["l"] = geometry.l;
  }
  g["section"] = section;
  nlohmann::ordered_json j;
  j["geometry"] = g;
  j["bc"] = bc;
  j["parts"] = {{"log_l_coeff", log_l_coeff}, {"global", global}, {"det_ratio", det_ratio},
                {"euler", euler},             {"anomaly", anomaly}, {"b1", b1},
                {"b2", b2}};
  j["total"] = total;
  j["notes"] = notes;
  return j.dump(2);
}

double norm_factor(NormKind kind, int m, int q, const Geometry& g) {
  int k = m - 2 * q + 1;
  if (kind == NormKind::ConeGamma) {
    require_positive(g.l, "l");
    if (k <= 0) throw std::invalid_argument("norm_factor: cone factor needs m-2q+1 > 0");
    return std::pow(g.l, k) / k;
  }
  require_positive(g.l1, "l1");
  require_positive(g.l2, "l2");
  if (k == 0) return std::log(g.l2 / g.l1);
  return (std::pow(g.l2, k) - std::pow(g.l1, k)) / k;
}

double det_ratio(DetKind kind, const SectionSpectrum& s, const Geometry& g) {
  int m = s.dim;
  const auto& rk = s.harmonic_ranks;
  double acc = 0.0;
  if (kind == DetKind::FrustumAbs) {
    if (!(g.l1 < g.l2)) throw std::invalid_argument("det_ratio: frustum needs l1 < l2");
    for (int q = 0; q <= m; ++q) acc += 0.5 * neg1(q) * rk[q] * std::log(norm_factor(NormKind::FrustumGamma, m, q, g));
    return acc;
  }
  int top = m % 2 == 1 ? (m + 1) / 2 - 1 : m / 2 - 1;
  for (int q = 0; q <= top; ++q) acc += 0.5 * neg1(q) * rk[q] * std::log(norm_factor(NormKind::ConeGamma, m, q, g));
  if (m % 2 == 0) {
    int p = half_rank(s);
    acc += neg1(p) * rk[p] / 4.0 * std::log(norm_factor(NormKind::ConeGamma, m, p, g));
  }
  return acc;
}

AnomalyResult anomaly_bm_cone_terms(const SectionSpectrum& s, int order) {
  int m = s.dim;
  int top = order > 0 ? order : m;
  AnomalyResult out;
  std::vector<Combination> main, odd;
  for (int q = 0; q <= m / 2 - 1; ++q) {
    Rational a = alpha_q(m, q);
    for (int j = 1; j <= top; ++j) {
      if (residue_skipped(s, q, j)) continue;
      RationalPoly c = (phi(j) - phi_hat(j, a, +1)) + Rational(neg1(m - 1)) * (phi(j) - phi_hat(j, a, -1));
      main.push_back({"t0", q, j, regular_fp(c, "anomaly_bm_cone")});
    }
  }
  accumulate(out, s, main, 0.25);
  if (m % 2 == 1) {
    int p = (m + 1) / 2;
    Rational a = alpha_q(m, p - 1);
    for (int j = 1; j <= top; ++j) {
      if (residue_skipped(s, p - 1, j)) continue;
      odd.push_back({"t1", p - 1, j, regular_fp(phi(j) - phi_hat(j, a, +1), "anomaly_bm_cone")});
    }
    accumulate(out, s, odd, 0.25);
  }
  return out;
}

double anomaly_bm_cone(const SectionSpectrum& s) { return anomaly_bm_cone_terms(s).value; }

AnomalyResult anomaly_bm_frustum_terms(const SectionSpectrum& s, FrustumBC bc, int order) {
  int m = s.dim;
  int top = order > 0 ? order : m;
  const Scale I = Scale::Inner, O = Scale::Outer;
  AnomalyResult out;
  std::vector<Combination> main, odd;
  Rational sm(neg1(m - 1));
  for (int q = 0; q <= m / 2 - 1; ++q) {
    Rational a = alpha_q(m, q);
    for (int j = 1; j <= top; ++j) {
      if (residue_skipped(s, q, j)) continue;
      Composite c;
      if (bc == FrustumBC::Mixed) {
        Composite x = phi_hat_frustum(j, a, -1, O, I) - phi_hat_frustum(j, a, +1, I, O);
        Composite y = phi_hat_frustum(j, a, +1, O, I) - phi_hat_frustum(j, a, -1, I, O);
        y *= sm;
        c = x + y;
      } else {
        Composite x = phi_frustum_abs(j) - phi_hat_frustum_abs(j, a, +1);
        Composite y = phi_frustum_abs(j) - phi_hat_frustum_abs(j, a, -1);
        y *= sm;
        c = x + y;
      }
      main.push_back({bc == FrustumBC::Mixed ? "w0" : "y0", q, j, regular_fp(c, "anomaly_bm_frustum")});
    }
  }
  accumulate(out, s, main, 0.25);
  if (m % 2 == 1) {
    int p = (m + 1) / 2;
    Rational a = alpha_q(m, p - 1);
    for (int j = 1; j <= top; ++j) {
      if (residue_skipped(s, p - 1, j)) continue;
      Composite c = bc == FrustumBC::Mixed ? phi_hat_frustum(j, a, +1, O, I) - phi_hat_frustum(j, a, +1, I, O)
                                           : phi_frustum_abs(j) - phi_hat_frustum_abs(j, a, +1);
      odd.push_back({bc == FrustumBC::Mixed ? "w1" : "y1", p - 1, j, regular_fp(c, "anomaly_bm_frustum")});
    }
    accumulate(out, s, odd, 0.25);
  }
  return out;
}

double b1_term(const SectionSpectrum& s) {
  if (s.dim % 2 == 1) throw std::domain_error("b1_term: defined for even-dimensional sections only");
  int p = s.dim / 2;
  double acc = 0.0;
  for (int q = 0; q < p; ++q) {
    int r = s.harmonic_ranks[q];
    acc -= neg1(q) * r * log_double_factorial(2 * p - 2 * q - 1);
    acc += 0.5 * neg1(q) * regularized_log_ratio(s, q);
  }
  return acc;
}

TorsionReport torsion_cone(const SectionSpectrum& s, double l) {
  require_positive(l, "l");
  return assemble_cone(s, l, ingredients(s));
}

double torsion_cone_closed_form(const SectionSpectrum& s, double l) {
  require_positive(l, "l");
  const auto& rk = s.harmonic_ranks;
  double logl = std::log(l);
  double chi = s.euler_characteristic();
  double A = anomaly_bm_cone(s);
  double acc = 0.0;
  if (s.dim % 2 == 1) {
    int p = (s.dim + 1) / 2;
    double har = 0.0;
    for (int q = 0; q < p; ++q) {
      acc += 0.5 * neg1(q) * (2 * p - 2 * q) * rk[q] * logl;
      acc -= 0.5 * neg1(q) * rk[q] * std::log(2.0 * (p - q));
      har += 0.5 * neg1(q) * rk[q] * std::log(std::pow(l, 2 * p - 2 * q) / (2 * p - 2 * q));
    }
    double alt = har + 0.5 * section_analytic_torsion(s) + A;
    acc += 0.5 * section_analytic_torsion(s) + A;
    if (std::abs(alt - acc) > 1e-12 * std::max(1.0, std::abs(acc)))
      throw std::logic_error("torsion_cone_closed_form: regular-part assemblies disagree");
    return acc;
  }
  int p = half_rank(s);
  double coeff = neg1(p) * rk[p] / 4.0;
  for (int q = 0; q < p; ++q) {
    coeff += 0.5 * neg1(q) * (2 * p - 2 * q + 1) * rk[q];
    double df = log_double_factorial(2 * p - 2 * q - 1);
    acc -= 0.5 * neg1(q) * rk[q] * (std::log(static_cast<double>(2 * p - 2 * q + 1)) + 2.0 * df);
    acc += 0.5 * neg1(q) * regularized_log_ratio(s, q);
  }
  return coeff * logl + acc + 0.5 * chi * kLog2 + A;
}

TorsionReport torsion_frustum(const SectionSpectrum& s, double l1, double l2, FrustumBC bc) {
  require_positive(l1, "l1");
  require_positive(l2, "l2");
  if (!(l1 < l2)) throw std::invalid_argument("torsion_frustum: needs 0 < l1 < l2");
  return assemble_frustum(s, l1, l2, bc, bc == FrustumBC::Absolute ? section_analytic_torsion(s) : 0.0);
}

TorsionReport negative_torsion_cone(const SectionSpectrum& s, double l) {
  require_positive(l, "l");
  return assemble_negative(s, l, ingredients(s));
}

std::string LimitReport::to_json() const {
  nlohmann::ordered_json j;
  j["section"] = section;
  j["l2"] = l2;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  for (const auto& p : points)
    pts.push_back({{"l1", p.l1}, {"delta", p.delta}, {"divergent_model", p.divergent_model}, {"remainder", p.remainder}});
  j["points"] = pts;
  j["predicted_log_coeff"] = predicted_log_coeff;
  j["fitted_log_coeff"] = fitted_log_coeff;
  j["finite_part"] = finite_part;
  j["target"] = target;
  j["delta_to_target"] = delta_to_target;
  j["observed_order"] = observed_order;
  j["notes"] = notes;
  return j.dump(2);
}

LimitReport limit_experiment(const SectionSpectrum& s, double l2, const std::vector<double>& l1_list) {
  require_positive(l2, "l2");
  if (l1_list.empty()) throw std::invalid_argument("limit_experiment: empty l1 list");
  for (std::size_t i = 0; i < l1_list.size(); ++i) {
    if (!(l1_list[i] > 0.0 && l1_list[i] < l2)) throw std::invalid_argument("limit_experiment: l1 values must lie in (0, l2)");
    if (i > 0 && !(l1_list[i] < l1_list[i - 1])) throw std::invalid_argument("limit_experiment: l1 values must descend");
  }
  bool odd = s.dim % 2 == 1;
  if (odd && l1_list.size() < 3) throw std::invalid_argument("limit_experiment: odd case needs at least 3 points");

  Ingredients in = ingredients(s);
  double logT = in.logT;
  const auto& rk = s.harmonic_ranks;
  LimitReport rep;
  rep.section = s.label;
  rep.l2 = l2;
  rep.target = assemble_cone(s, l2, in).total - 0.5 * in.chi * kLog2;

  int p = odd ? (s.dim + 1) / 2 : s.dim / 2;
  double log_coeff = 0.0;
  if (odd) {
    for (int q = 0; q < p; ++q) log_coeff += neg1(q) * rk[q] * (2 * p - 1 - 2 * q);
  } else {
    log_coeff = -neg1(p) * rk[p] / 4.0;
  }
  rep.predicted_log_coeff = log_coeff;

  for (double l1 : l1_list) {
    LimitPoint pt;
    pt.l1 = l1;
    pt.delta = assemble_frustum(s, l1, l2, FrustumBC::Absolute, logT).total - assemble_negative(s, l1, in).total;
    if (odd)
      pt.divergent_model = 0.5 * neg1(p) * rk[p] * std::log(std::log(l2 / l1)) + log_coeff * std::log(l1);
    else
      pt.divergent_model = log_coeff * std::log(l1 / l2);
    pt.remainder = pt.delta - pt.divergent_model;
    rep.points.push_back(pt);
  }

  const auto& P = rep.points;
  std::size_t n = P.size();
  if (odd) {
    const auto &a = P[n - 3], &b = P[n - 2], &c = P[n - 1];
    double h1 = std::abs(a.remainder - b.remainder), h2 = std::abs(b.remainder - c.remainder);
    double ratio = b.l1 / c.l1;
    rep.observed_order = (h1 > 0 && h2 > 0) ? std::log(h1 / h2) / std::log(a.l1 / b.l1) : 0.0;
    double k = rep.observed_order > 0 ? rep.observed_order : 1.0;
    rep.finite_part = c.remainder - (b.remainder - c.remainder) / (std::pow(ratio, k) - 1.0);
    rep.fitted_log_coeff = log_coeff;
    rep.notes.push_back("odd model: 1/2 (-1)^p r_p log log(l2/l1) + sum_{q<p} (-1)^q r_q (2p-1-2q) log l1, Richardson extrapolation");
  } else {
    std::vector<double> x, y;
    for (const auto& pt : P) {
      x.push_back(pt.l1);
      y.push_back(pt.remainder);
    }
    int deg = std::min<int>(2, static_cast<int>(n) - 1);
    std::vector<std::vector<double>> A(deg + 1, std::vector<double>(deg + 2, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (int r = 0; r <= deg; ++r) {
        for (int c2 = 0; c2 <= deg; ++c2) A[r][c2] += std::pow(x[i], r + c2);
        A[r][deg + 1] += std::pow(x[i], r) * y[i];
      }
    for (int col = 0; col <= deg; ++col) {
      int piv = col;
      for (int r = col + 1; r <= deg; ++r)
        if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
      std::swap(A[col], A[piv]);
      for (int r = 0; r <= deg; ++r) {
        if (r == col) continue;
        double f = A[r][col] / A[col][col];
        for (int c2 = col; c2 <= deg + 1; ++c2) A[r][c2] -= f * A[col][c2];
      }
    }
    rep.finite_part = A[0][deg + 1] / A[0][0];
    if (n >= 2) {
      double dl = std::log(P[n - 2].l1) - std::log(P[n - 1].l1);
      rep.fitted_log_coeff = (P[n - 2].delta - P[n - 1].delta) / dl;
    }
    rep.notes.push_back("even model: -(-1)^p (r_p/4) log(l1/l2) plus a polynomial in l1 fitted by least squares");
  }
  rep.delta_to_target = rep.finite_part - rep.target;
  if (std::abs(in.chi) > 0) rep.notes.push_back("target includes the -1/2 chi log 2 shift");
  return rep;
}

}  // namespace ct
