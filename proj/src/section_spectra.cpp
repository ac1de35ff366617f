#include "conetorsion/section_spectra.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ct {

namespace {

constexpr double kPi = std::numbers::pi;

double binom_int(int m, int q) { return boost::math::binomial_coefficient<double>(m, q); }

std::vector<Eigenvalue> group_sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<Eigenvalue> out;
  for (double v : values) {
    if (!out.empty() && std::abs(v - out.back().lambda) <= 1e-12 * v) {
      ++out.back().mult;
    } else {
      out.push_back({v, 1});
    }
  }
  return out;
}

bool same_list(const std::vector<Eigenvalue>& a, const std::vector<Eigenvalue>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].mult != b[i].mult) return false;
    if (std::abs(a[i].lambda - b[i].lambda) > 1e-12 * std::max(1.0, a[i].lambda)) return false;
  }
  return true;
}

Rational exact(double x) { return Rational(x); }

// Coexact heat data for degree q: A_h (h = 0..m) and the alternating rank sum.
struct CoexactHeat {
  std::vector<double> A;
  double R = 0.0;
};

CoexactHeat coexact_heat(const SectionSpectrum& s, int q) {
  if (s.heat_coeffs.empty()) throw ContinuationError("section has no heat coefficients");
  CoexactHeat h;
  h.A.assign(s.dim + 1, 0.0);
  for (int k = 0; k <= q; ++k) {
    double sign = ((q - k) % 2 == 0) ? 1.0 : -1.0;
    for (int i = 0; i <= s.dim && i < static_cast<int>(s.heat_coeffs[k].size()); ++i) h.A[i] += sign * s.heat_coeffs[k][i];
    h.R += sign * s.harmonic_ranks[k];
  }
  return h;
}

double upper_gamma_positive(double a, double x) { return boost::math::tgamma(a, x); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

int SectionSpectrum::euler_characteristic() const {
  int chi = 0;
  for (std::size_t q = 0; q < harmonic_ranks.size(); ++q) chi += (q % 2 == 0 ? 1 : -1) * harmonic_ranks[q];
  return chi;
}

void SectionSpectrum::validate() const {
  if (dim < 1) throw SchemaError("section: dim must be >= 1");
  if (!(volume > 0.0)) throw SchemaError("section: volume must be positive");
  if (static_cast<int>(coexact.size()) != dim + 1) throw SchemaError("section: coexact needs one list per degree 0..dim");
  if (static_cast<int>(harmonic_ranks.size()) != dim + 1) throw SchemaError("section: harmonic_ranks needs dim+1 entries");
  if (!heat_coeffs.empty() && static_cast<int>(heat_coeffs.size()) != dim + 1)
    throw SchemaError("section: heat_coeffs needs one list per degree 0..dim");
  for (int r : harmonic_ranks)
    if (r < 0) throw SchemaError("section: negative harmonic rank");
  for (int q = 0; q <= dim; ++q) {
    double prev = 0.0;
    for (const auto& e : coexact[q]) {
      if (!(e.lambda > 0.0)) throw SchemaError("section: nonpositive coexact eigenvalue in degree " + std::to_string(q));
      if (e.mult <= 0) throw SchemaError("section: nonpositive multiplicity in degree " + std::to_string(q));
      if (!(e.lambda > prev)) throw OrderingError("section: coexact list not strictly ascending in degree " + std::to_string(q));
      if (e.lambda > cutoff * (1 + 1e-12)) throw SchemaError("section: eigenvalue above declared cutoff");
      prev = e.lambda;
    }
  }
  if (!coexact[dim].empty()) throw DualityError("section: top degree carries no coexact forms");
  for (int q = 0; q <= dim; ++q) {
    if (harmonic_ranks[q] != harmonic_ranks[dim - q]) throw DualityError("section: harmonic ranks violate Poincare duality");
    if (q <= dim - 1 && !same_list(coexact[q], coexact[dim - 1 - q]))
      throw DualityError("section: coexact lists of degrees " + std::to_string(q) + " and " + std::to_string(dim - 1 - q) +
                         " differ");
  }
  for (int q = 0; q <= dim && !heat_coeffs.empty(); ++q) {
    const auto& a = heat_coeffs[q];
    if (a.empty() || static_cast<int>(a.size()) > dim + 1) throw SchemaError("section: heat_coeffs lists need 1..dim+1 entries");
    double lead = binom_int(dim, q) * volume / std::pow(4.0 * kPi, dim / 2.0);
    if (std::abs(a[0] - lead) > 1e-10 * std::max(1.0, std::abs(lead)))
      throw SchemaError("section: leading heat coefficient inconsistent with volume in degree " + std::to_string(q));
    for (std::size_t h = 1; h < a.size(); h += 2)
      if (a[h] != 0.0) throw SchemaError("section: odd heat coefficients must vanish on a closed section");
  }
}

bool SectionSpectrum::operator==(const SectionSpectrum& o) const {
  return dim == o.dim && label == o.label && volume == o.volume && coexact == o.coexact &&
         harmonic_ranks == o.harmonic_ranks && heat_coeffs == o.heat_coeffs && cutoff == o.cutoff &&
         torsion_logT == o.torsion_logT;
}

SectionSpectrum make_circle(double r, double cutoff) {
  if (!(r > 0.0)) throw std::invalid_argument("make_circle: radius must be positive");
  SectionSpectrum s;
  s.dim = 1;
  s.label = "circle:r=" + fmt(r);
  s.volume = 2.0 * kPi * r;
  s.cutoff = cutoff;
  s.coexact.resize(2);
  for (long n = 1;; ++n) {
    double lam = static_cast<double>(n * n) / (r * r);
    if (lam > cutoff) break;
    s.coexact[0].push_back({lam, 2});
  }
  s.harmonic_ranks = {1, 1};
  double a0 = 2.0 * kPi * r / std::sqrt(4.0 * kPi);
  s.heat_coeffs = {{a0, 0.0}, {a0, 0.0}};
  s.kind = SectionKind::Circle;
  s.params = {r};
  s.validate();
  return s;
}

SectionSpectrum make_flat_torus(double L1, double L2, double cutoff) {
  if (!(L1 > 0.0) || !(L2 > 0.0)) throw std::invalid_argument("make_flat_torus: side lengths must be positive");
  SectionSpectrum s;
  s.dim = 2;
  s.label = "torus:" + fmt(L1) + "," + fmt(L2);
  s.volume = L1 * L2;
  s.cutoff = cutoff;
  const double f = 4.0 * kPi * kPi;
  long K1 = static_cast<long>(std::floor(L1 * std::sqrt(cutoff / f))) + 1;
  long K2 = static_cast<long>(std::floor(L2 * std::sqrt(cutoff / f))) + 1;
  std::vector<double> vals;
  for (long k1 = -K1; k1 <= K1; ++k1)
    for (long k2 = -K2; k2 <= K2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      double lam = f * (static_cast<double>(k1 * k1) / (L1 * L1) + static_cast<double>(k2 * k2) / (L2 * L2));
      if (lam <= cutoff) vals.push_back(lam);
    }
  auto list = group_sorted(std::move(vals));
  s.coexact = {list, list, {}};
  s.harmonic_ranks = {1, 2, 1};
  double a0 = L1 * L2 / (4.0 * kPi);
  s.heat_coeffs = {{a0, 0.0, 0.0}, {2.0 * a0, 0.0, 0.0}, {a0, 0.0, 0.0}};
  s.kind = SectionKind::FlatTorus;
  s.params = {L1, L2};
  s.validate();
  return s;
}

SectionSpectrum parse_section_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("section: invalid JSON: ") + e.what());
  }
  SectionSpectrum s;
  try {
    s.dim = j.at("dim").get<int>();
    s.label = j.at("label").get<std::string>();
    s.volume = j.at("volume").get<double>();
    s.cutoff = j.at("cutoff").get<double>();
    if (s.dim < 1) throw SchemaError("section: dim must be >= 1");
    s.coexact.assign(s.dim + 1, {});
    for (const auto& [key, list] : j.at("coexact").items()) {
      int q = std::stoi(key);
      if (q < 0 || q > s.dim) throw SchemaError("section: coexact degree out of range");
      for (const auto& e : list) {
        if (!e.is_array() || e.size() != 2) throw SchemaError("section: coexact entries are [lambda, mult]");
        s.coexact[q].push_back({e[0].get<double>(), e[1].get<int>()});
      }
    }
    s.harmonic_ranks = j.at("harmonic_ranks").get<std::vector<int>>();
    if (j.contains("heat_coeffs") && !j["heat_coeffs"].is_null()) {
      s.heat_coeffs.assign(s.dim + 1, {});
      for (const auto& [key, list] : j["heat_coeffs"].items()) {
        int q = std::stoi(key);
        if (q < 0 || q > s.dim) throw SchemaError("section: heat_coeffs degree out of range");
        s.heat_coeffs[q] = list.get<std::vector<double>>();
      }
      bool any = false;
      for (const auto& a : s.heat_coeffs) any = any || !a.empty();
      if (!any) s.heat_coeffs.clear();
    }
    if (j.contains("torsion_logT") && !j["torsion_logT"].is_null()) s.torsion_logT = j["torsion_logT"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("section: schema violation: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw SchemaError("section: degree keys must be integers");
  }
  s.kind = SectionKind::File;
  s.validate();
  return s;
}

SectionSpectrum load_section(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("section: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_section_json(buf.str());
}

std::string section_to_json(const SectionSpectrum& s) {
  nlohmann::json j;
  j["dim"] = s.dim;
  j["label"] = s.label;
  j["volume"] = s.volume;
  j["cutoff"] = s.cutoff;
  nlohmann::json cex = nlohmann::json::object();
  for (int q = 0; q <= s.dim; ++q) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& e : s.coexact[q]) list.push_back({e.lambda, e.mult});
    cex[std::to_string(q)] = list;
  }
  j["coexact"] = cex;
  j["harmonic_ranks"] = s.harmonic_ranks;
  nlohmann::json heat = nlohmann::json::object();
  for (std::size_t q = 0; q < s.heat_coeffs.size(); ++q) heat[std::to_string(q)] = s.heat_coeffs[q];
  j["heat_coeffs"] = heat;
  j["torsion_logT"] = s.torsion_logT ? nlohmann::json(*s.torsion_logT) : nlohmann::json(nullptr);
  return j.dump(1);
}

Rational alpha_q(int m, int q) { return Rational(1 + 2 * q - m, 2); }

AlphaMu alpha_mu(int q, int n, const SectionSpectrum& s) {
  if (q < 0 || q > s.dim) throw std::out_of_range("alpha_mu: degree out of range");
  if (n < 1 || n > static_cast<int>(s.coexact[q].size())) throw std::out_of_range("alpha_mu: index beyond truncation");
  Rational a = alpha_q(s.dim, q);
  double ad = to_double(a);
  double mu = std::sqrt(s.coexact[q][n - 1].lambda + ad * ad);
  return {a, mu, std::abs(mu - std::round(mu)) <= 1e-12 * std::max(1.0, mu)};
}

std::vector<ResidueEntry> coexact_heat_residues(const SectionSpectrum& s, int q) {
  if (q < 0 || q > s.dim) throw std::out_of_range("coexact_heat_residues: degree out of range");
  CoexactHeat heat = coexact_heat(s, q);
  double a = to_double(alpha_q(s.dim, q));
  std::vector<ResidueEntry> out;
  for (int j = 1; j <= s.dim; ++j) {
    ResidueEntry e{j, 0.0, (s.dim - j) % 2 != 0};
    if (!e.structural_zero) {
      double acc = 0.0;
      for (int n = 0; s.dim - j - 2 * n >= 0; ++n) {
        int h = s.dim - j - 2 * n;
        acc += heat.A[h] * std::pow(-a * a, n) / boost::math::factorial<double>(n);
      }
      e.value = 2.0 * acc / boost::math::tgamma(j / 2.0);
    }
    out.push_back(e);
  }
  return out;
}

Rational zeta_zero(const SectionSpectrum& s, int q) {
  if (s.heat_coeffs.empty()) throw ContinuationError("zeta_zero: section has no heat coefficients");
  const auto& a = s.heat_coeffs[q];
  Rational am = s.dim < static_cast<int>(a.size()) ? exact(a[s.dim]) : Rational(0);
  return am - s.harmonic_ranks[q];
}

Rational zeta_cex_zero(const SectionSpectrum& s, int q) {
  Rational acc = 0;
  for (int k = 0; k <= q; ++k) acc += ((q - k) % 2 == 0 ? Rational(1) : Rational(-1)) * zeta_zero(s, k);
  return acc;
}

double upper_incomplete_gamma(double a, double x) {
  if (!(x > 0.0)) throw std::domain_error("upper_incomplete_gamma: x must be positive");
  if (a > 0.0) return upper_gamma_positive(a, x);
  if (a == 0.0) return boost::math::expint(1, x);
  return (upper_incomplete_gamma(a + 1.0, x) - std::pow(x, a) * std::exp(-x)) / a;
}

double epstein_zeta_2d(double L1, double L2, double s) {
  if (std::abs(s - 1.0) < 1e-14) throw ContinuationError("epstein zeta: pole at s=1");
  const double A = L1 * L2;
  const double t0 = A / (4.0 * kPi);
  const double f = 4.0 * kPi * kPi;
  const double cut = 60.0;
  double direct = 0.0, dual = 0.0;
  long K1 = static_cast<long>(std::ceil(L1 * std::sqrt(cut / (f * t0)))) + 1;
  long K2 = static_cast<long>(std::ceil(L2 * std::sqrt(cut / (f * t0)))) + 1;
  for (long k1 = -K1; k1 <= K1; ++k1)
    for (long k2 = -K2; k2 <= K2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      double lam = f * (static_cast<double>(k1 * k1) / (L1 * L1) + static_cast<double>(k2 * k2) / (L2 * L2));
      if (lam * t0 > cut + 10) continue;
      direct += std::pow(lam, -s) * upper_incomplete_gamma(s, lam * t0);
    }
  long N1 = static_cast<long>(std::ceil(std::sqrt(4.0 * t0 * cut) / L1)) + 1;
  long N2 = static_cast<long>(std::ceil(std::sqrt(4.0 * t0 * cut) / L2)) + 1;
  for (long n1 = -N1; n1 <= N1; ++n1)
    for (long n2 = -N2; n2 <= N2; ++n2) {
      if (n1 == 0 && n2 == 0) continue;
      double R = static_cast<double>(n1 * n1) * L1 * L1 + static_cast<double>(n2 * n2) * L2 * L2;
      if (R / (4.0 * t0) > cut + 10) continue;
      dual += std::pow(R / 4.0, s - 1.0) * upper_incomplete_gamma(1.0 - s, R / (4.0 * t0));
    }
  double bracket = direct + (A / (4.0 * kPi)) * std::pow(t0, s - 1.0) / (s - 1.0) - std::pow(t0, s) / s +
                   (A / (4.0 * kPi)) * dual;
  return bracket / boost::math::tgamma(s);
}

double shifted_epstein_zeta_2d(double L1, double L2, double shift, double s) {
  const double A = L1 * L2;
  const double t0 = A / (4.0 * kPi);
  const double f = 4.0 * kPi * kPi;
  const double cut = 60.0;
  std::vector<double> c{1.0};
  for (int j = 1; j < 60; ++j) {
    c.push_back(c.back() * (-shift) / j);
    if (std::abs(c.back()) * std::pow(t0, j) < 1e-20) break;
  }
  double direct = 0.0, small = 0.0, dual = 0.0;
  long K1 = static_cast<long>(std::ceil(L1 * std::sqrt(cut / (f * t0)))) + 1;
  long K2 = static_cast<long>(std::ceil(L2 * std::sqrt(cut / (f * t0)))) + 1;
  for (long k1 = -K1; k1 <= K1; ++k1)
    for (long k2 = -K2; k2 <= K2; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      double lam = f * (static_cast<double>(k1 * k1) / (L1 * L1) + static_cast<double>(k2 * k2) / (L2 * L2)) + shift;
      if (lam * t0 > cut + 10) continue;
      direct += std::pow(lam, -s) * upper_incomplete_gamma(s, lam * t0);
    }
  for (std::size_t j = 0; j < c.size(); ++j) {
    double e1 = s - 1.0 + j, e0 = s + j;
    if (std::abs(e1) < 1e-14 || std::abs(e0) < 1e-14) throw ContinuationError("shifted epstein zeta: pole");
    small += c[j] * ((A / (4.0 * kPi)) * std::pow(t0, e1) / e1 - std::pow(t0, e0) / e0);
  }
  long N1 = static_cast<long>(std::ceil(std::sqrt(4.0 * t0 * cut) / L1)) + 1;
  long N2 = static_cast<long>(std::ceil(std::sqrt(4.0 * t0 * cut) / L2)) + 1;
  for (long n1 = -N1; n1 <= N1; ++n1)
    for (long n2 = -N2; n2 <= N2; ++n2) {
      if (n1 == 0 && n2 == 0) continue;
      double R = static_cast<double>(n1 * n1) * L1 * L1 + static_cast<double>(n2 * n2) * L2 * L2;
      if (R / (4.0 * t0) > cut + 10) continue;
      for (std::size_t j = 0; j < c.size(); ++j)
        dual += c[j] * std::pow(R / 4.0, s - 1.0 + j) * upper_incomplete_gamma(1.0 - s - j, R / (4.0 * t0));
    }
  return (direct + small + (A / (4.0 * kPi)) * dual) / boost::math::tgamma(s);
}

namespace {

double mellin_zeta(const SectionSpectrum& s, int q, double w) {
  CoexactHeat heat = coexact_heat(s, q);
  if (s.coexact[q].empty()) return 0.0;
  const double T = 30.0 / s.cutoff;
  double acc = 0.0;
  for (int h = 0; h <= s.dim; ++h) {
    if (heat.A[h] == 0.0) continue;
    double e = w + (h - s.dim) / 2.0;
    if (std::abs(e) < 1e-14) throw ContinuationError("section zeta: pole at requested argument");
    acc += heat.A[h] * std::pow(T, e) / e;
  }
  acc -= heat.R * std::pow(T, w) / w;
  for (const auto& ev : s.coexact[q]) acc += ev.mult * std::pow(ev.lambda, -w) * upper_incomplete_gamma(w, ev.lambda * T);
  return acc / boost::math::tgamma(w);
}

// Weyl counting function of mu = sqrt(lambda + alpha^2) for the coexact list in degree q.
double weyl_count(const CoexactHeat& heat, int m, double alpha2, double mu) {
  double lam = mu * mu - alpha2;
  if (lam <= 0) return 0.0;
  double n = -heat.R;
  for (int h = 0; h <= m; ++h) {
    if (heat.A[h] == 0.0) continue;
    double e = (m - h) / 2.0;
    n += heat.A[h] * std::pow(lam, e) / boost::math::tgamma(e + 1.0);
  }
  return n;
}

ZetaResult truncated_zeta_Q(const SectionSpectrum& s, int q, double w) {
  if (!(w > s.dim)) throw ContinuationError("zeta_Q truncation path needs w > m");
  double a = to_double(alpha_q(s.dim, q));
  double a2 = a * a;
  double sum = 0.0;
  double count = 0.0;
  for (const auto& e : s.coexact[q]) {
    sum += e.mult * std::pow(e.lambda + a2, -w / 2.0);
    count += e.mult;
  }
  if (s.coexact[q].empty()) return {0.0, 0.0, "truncation"};
  if (s.heat_coeffs.empty()) throw ContinuationError("zeta_Q: tail estimate needs heat coefficients");
  CoexactHeat heat = coexact_heat(s, q);
  double M = std::sqrt(s.cutoff + a2);
  auto integrand = [&](double mu) { return weyl_count(heat, s.dim, a2, mu) * std::pow(mu, -w - 1.0); };
  boost::math::quadrature::exp_sinh<double> integrator;
  double shifted = integrator.integrate([&](double t) { return integrand(M + t); });
  double tail = -count * std::pow(M, -w) + w * shifted;
  double bound = std::pow(std::max(count, 1.0), (s.dim - 1.0) / s.dim) * std::pow(M, -w);
  return {sum + tail, bound, "truncation"};
}

}  // namespace

ZetaResult section_zeta(const SectionSpectrum& s, int q, double w) {
  if (q < 0 || q > s.dim) throw std::out_of_range("section_zeta: degree out of range");
  if (s.coexact[q].empty()) return {0.0, 0.0, "empty"};
  switch (s.kind) {
    case SectionKind::Circle: {
      if (std::abs(w - 0.5) < 1e-14) throw ContinuationError("section zeta: pole at 1/2");
      double r = s.params[0];
      return {2.0 * std::pow(r, 2.0 * w) * boost::math::zeta(2.0 * w), 0.0, "riemann"};
    }
    case SectionKind::FlatTorus:
      return {epstein_zeta_2d(s.params[0], s.params[1], w), 0.0, "ewald"};
    case SectionKind::File:
      return {mellin_zeta(s, q, w), 0.0, "heat-mellin"};
  }
  return {0.0, 0.0, ""};
}

ZetaResult zeta_Q(const SectionSpectrum& s, int q, double w, ZetaMethod method) {
  if (q < 0 || q > s.dim) throw std::out_of_range("zeta_Q: degree out of range");
  if (!(w > 0.0)) throw std::domain_error("zeta_Q: w must be positive");
  for (int p = s.dim; p >= 1; p -= 2)
    if (std::abs(w - p) < 1e-12) throw ContinuationError("zeta_Q: w = " + std::to_string(p) + " is a pole");
  if (method == ZetaMethod::Truncation || (method == ZetaMethod::Auto && s.kind == SectionKind::File && w > s.dim))
    return truncated_zeta_Q(s, q, w);
  if (s.coexact[q].empty()) return {0.0, 0.0, "empty"};
  if (method == ZetaMethod::ShiftedEwald) {
    if (s.kind != SectionKind::FlatTorus) throw ContinuationError("zeta_Q: shifted Ewald path needs a flat torus");
    double a = to_double(alpha_q(s.dim, q));
    return {shifted_epstein_zeta_2d(s.params[0], s.params[1], a * a, w / 2.0), 0.0, "shifted-ewald"};
  }
  double a = to_double(alpha_q(s.dim, q));
  double a2 = a * a;
  double sum = 0.0;
  double coeff = 1.0;
  std::string how;
  for (int j = 0; j < 400; ++j) {
    if (j > 0) coeff *= (-w / 2.0 - (j - 1)) / j;
    if (j > 0 && a2 == 0.0) break;
    ZetaResult z = section_zeta(s, q, w / 2.0 + j);
    how = z.method;
    double term = coeff * std::pow(a2, j) * z.value;
    sum += term;
    if (j > 2 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return {sum, 0.0, "binomial+" + how};
}

double log_ratio_series(double alpha, const std::function<double(int)>& zeta_at_odd, double tol) {
  if (alpha == 0.0) return 0.0;
  double sum = 0.0;
  for (int j = 0; j < 1000; ++j) {
    int w = 2 * j + 1;
    double term = 2.0 * std::pow(alpha, w) * zeta_at_odd(w) / w;
    sum += term;
    if (j >= 2 && std::abs(term) < tol) return sum;
  }
  throw ContinuationError("log_ratio_series: no convergence");
}

double regularized_log_ratio(const SectionSpectrum& s, int q) {
  if (s.dim % 2 == 1) throw ContinuationError("regularized_log_ratio: odd-dimensional section hits the pole set");
  double a = to_double(alpha_q(s.dim, q));
  if (a == 0.0) return 0.0;
  if (!s.coexact[q].empty() && std::abs(a) >= std::sqrt(s.coexact[q][0].lambda + a * a))
    throw std::domain_error("regularized_log_ratio: |alpha| must be below the first mu");
  return log_ratio_series(a, [&](int w) { return zeta_Q(s, q, w, ZetaMethod::Continuation).value; });
}

double section_analytic_torsion(const SectionSpectrum& s) {
  switch (s.kind) {
    case SectionKind::Circle: return std::log(2.0 * kPi * s.params[0]);
    case SectionKind::FlatTorus: return 0.0;
    case SectionKind::File:
      if (s.torsion_logT) return *s.torsion_logT;
      if (s.dim % 2 == 0) return 0.0;
      throw SectionError("section_analytic_torsion: cannot derive torsion of an odd-dimensional file section");
  }
  return 0.0;
}

}  // namespace ct
