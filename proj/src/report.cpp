#include "conetorsion/report.hpp"

#include "conetorsion/exact_asymptotics.hpp"
#include "conetorsion/special_functions.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace ct {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + what + ": '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) throw ConfigError("bad number for " + what + ": '" + text + "'");
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

double need(const std::optional<double>& v, const std::string& flag) {
  if (!v) throw ConfigError("missing required flag " + flag);
  return *v;
}

std::vector<Rational> half_integers(int max_twice) {
  std::vector<Rational> out;
  for (int t = -max_twice; t <= max_twice; t += 2) out.push_back(Rational(t, 2));
  return out;
}

}  // namespace

SectionSpectrum parse_section_spec(const std::string& spec, std::optional<double> cutoff) {
  double cut = cutoff.value_or(kDefaultSectionCutoff);
  auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("section spec needs a kind prefix: '" + spec + "'");
  std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
  if (kind == "circle") {
    if (rest.rfind("r=", 0) != 0) throw ConfigError("circle spec must read circle:r=<radius>");
    return make_circle(parse_number(rest.substr(2), "circle radius"), cut);
  }
  if (kind == "torus") {
    auto comma = rest.find(',');
    if (comma == std::string::npos) throw ConfigError("torus spec must read torus:<L1>,<L2>");
    return make_flat_torus(parse_number(rest.substr(0, comma), "L1"), parse_number(rest.substr(comma + 1), "L2"), cut);
  }
  if (kind == "file") return load_section(rest);
  throw ConfigError("unknown section kind '" + kind + "'");
}

FrustumBC parse_bc(const std::string& s) {
  if (s == "abs" || s == "absolute") return FrustumBC::Absolute;
  if (s == "mixed") return FrustumBC::Mixed;
  throw ConfigError("bc must be abs or mixed, got '" + s + "'");
}

void SuiteResult::check(bool cond, const std::string& what) {
  ++total;
  if (cond) ++passed;
  else failures.push_back(what);
}

SuiteResult verify_asymptotics() {
  SuiteResult r;
  r.name = "asymptotics";
  for (int j = 1; j <= 10; ++j)
    for (const auto& a : half_integers(11)) {
      std::string tag = " j=" + std::to_string(j) + " alpha=" + to_string(a);
      RationalPoly c = j % 2 == 1 ? phi(j) * Rational(2) - phi_hat(j, a, +1) - phi_hat(j, a, -1)
                                  : phi_hat(j, a, -1) - phi_hat(j, a, +1);
      r.check(c.at_one() == 0, "vanishing at lambda=0" + tag);
      r.check(phi_finite_part(c).residue == 0, "zero residue" + tag);
    }
  for (int j = 1; j <= 8; ++j)
    for (const auto& a : half_integers(9))
      for (int sign : {+1, -1})
        for (auto [f, s] : {std::pair{Scale::Inner, Scale::Outer}, std::pair{Scale::Outer, Scale::Inner}})
          r.check(phi_hat_frustum(j, a, sign, f, s) == phi_hat_frustum_direct(j, a, sign, f, s),
                  "frustum composition j=" + std::to_string(j) + " alpha=" + to_string(a));
  for (const auto& sec : {make_circle(1.0, 100.0), make_circle(2.5, 100.0), make_flat_torus(1.0, 1.0, 100.0),
                          make_flat_torus(1.0, 2.5, 100.0)}) {
    double cone = anomaly_bm_cone(sec);
    double mixed = anomaly_bm_frustum_terms(sec, FrustumBC::Mixed).value;
    double abs = anomaly_bm_frustum_terms(sec, FrustumBC::Absolute).value;
    r.check(std::abs(mixed - 2.0 * cone) <= 1e-14 * std::max(1.0, std::abs(cone)), "mixed doubling " + sec.label);
    if (sec.dim % 2 == 1) r.check(abs == 0.0, "odd absolute frustum anomaly " + sec.label);
    else r.check(std::abs(abs - 2.0 * cone) <= 1e-14 * std::max(1.0, std::abs(cone)), "even absolute doubling " + sec.label);
  }
  return r;
}

SuiteResult verify_bessel() {
  SuiteResult r;
  r.name = "bessel";
  for (double nu : {0.5, 1.0, 1.5}) {
    auto closed = bessel_zeta_closed(nu, 0.0, 1.0);
    auto zeros = bessel_zeta_from_zeros(nu, 0.0, 1.0);
    r.check(std::abs(zeros.value + 0.5 * (nu + 0.5)) <= 1e-12, "z(0) nu=" + fmt(nu));
    r.check(std::abs(zeros.derivative - closed.derivative) <= 1e-10, "z'(0) nu=" + fmt(nu));
  }
  r.check(std::abs(bessel_zero(ZeroFamily::j(0.5), 3) - 3.0 * std::numbers::pi) <= 1e-12, "j_{1/2,3} = 3 pi");
  r.check(std::abs(bessel_zero(ZeroFamily::j(0.0), 1) - 2.404825557695773) <= 1e-12, "j_{0,1}");
  for (int k = 1; k <= 5; ++k)
    r.check(std::abs(bessel_zero(ZeroFamily::jhat(0.5, 0.5), k) - (k - 0.5) * std::numbers::pi) <= 1e-11,
            "Robin reduction k=" + std::to_string(k));
  return r;
}

SuiteResult verify_identities() {
  SuiteResult r;
  r.name = "identities";
  for (const auto& s : {make_circle(1.0, 100.0), make_flat_torus(1.0, 1.0, 100.0), make_flat_torus(1.0, 2.5, 100.0)}) {
    const auto& rk = s.harmonic_ranks;
    for (int q = 0; q <= s.dim; ++q) {
      r.check(zeta_zero(s, q) == Rational(-rk[q]), "zeta(0) = -r_q " + s.label + " q=" + std::to_string(q));
      Rational alt = 0;
      for (int k = 0; k <= q; ++k) alt += Rational(((q - k) % 2 == 0 ? 1 : -1) * -rk[k]);
      r.check(zeta_cex_zero(s, q) == alt, "alternating sum " + s.label + " q=" + std::to_string(q));
      if (q < s.dim)
        r.check(std::abs(0.5 * (section_zeta(s, q, 1e-6).value + section_zeta(s, q, -1e-6).value) -
                         to_double(zeta_cex_zero(s, q))) <= 1e-10,
                "coexact zeta(0) numeric " + s.label + " q=" + std::to_string(q));
    }
    int pmax = s.dim % 2 == 1 ? (s.dim + 1) / 2 : s.dim / 2 + 1;
    for (int p = 1; p <= pmax; ++p) {
      Rational lhs = 0, rhs = 0;
      for (int q = 0; q <= p - 2; ++q) lhs += Rational(q % 2 == 0 ? 1 : -1) * zeta_cex_zero(s, q);
      lhs += Rational((p - 1) % 2 == 0 ? 1 : -1, 2) * zeta_cex_zero(s, p - 1);
      for (int q = 0; q <= p - 1; ++q) rhs -= Rational((q % 2 == 0 ? 1 : -1) * (2 * p - 1 - 2 * q) * rk[q], 2);
      r.check(lhs == rhs, "alternating identity " + s.label + " p=" + std::to_string(p));
    }
  }
  return r;
}

SuiteResult verify_spectra() {
  SuiteResult r;
  r.name = "spectra";
  auto s = make_circle(1.0, 1e4);
  const double lambda = 2000.0;
  std::vector<EigenList> lists;
  for (int q = 0; q <= 2; ++q) {
    lists.push_back(cone_spectrum(s, q, 1.0, lambda));
    auto rep = verify_spectrum(lists.back(), s);
    r.check(!rep.weyl.empty() && std::abs(rep.weyl.back().ratio - 1.0) < 0.1, "Weyl ratio q=" + std::to_string(q));
  }
  auto d = cone_duality(lists, 1e-10);
  r.check(d.ok, "coexact/exact pairing");
  auto scaled = cone_spectrum(s, 1, 2.0, lambda / 4.0);
  bool same = scaled.entries.size() == lists[1].entries.size();
  for (std::size_t i = 0; same && i < scaled.entries.size(); ++i)
    same = std::abs(4.0 * scaled.entries[i].value - lists[1].entries[i].value) <= 1e-10 * lists[1].entries[i].value;
  r.check(same, "1/l^2 scaling");
  return r;
}

SuiteResult verify_torsion() {
  SuiteResult r;
  r.name = "torsion";
  for (double rad : {0.5, 1.0, 2.0})
    for (double l : {0.5, 1.0, 2.0}) {
      auto s = make_circle(rad, 100.0);
      auto t = torsion_cone(s, l);
      double expect = std::log(l) + 0.5 * std::log(std::numbers::pi * rad) - 3.0 * rad / 8.0;
      r.check(std::abs(t.total - expect) <= 1e-12, "circle cone total r=" + fmt(rad) + " l=" + fmt(l));
      r.check(std::abs(torsion_cone_closed_form(s, l) - t.total) <= 1e-12, "circle closed form r=" + fmt(rad));
    }
  auto tor = make_flat_torus(1.0, 1.0, 1e3);
  for (double l : {0.5, 2.0}) {
    auto t = torsion_cone(tor, l);
    r.check(std::abs(torsion_cone_closed_form(tor, l) - t.total) <= 1e-12, "torus closed form l=" + fmt(l));
    r.check(t.total == t.global + t.det_ratio + t.euler + t.anomaly + t.b1 + t.b2, "sum of parts l=" + fmt(l));
  }
  return r;
}

std::string format_text(const TorsionReport& r) {
  std::ostringstream os;
  os << "section     " << r.section << "\n";
  if (r.geometry.frustum) os << "geometry    frustum l1=" << fmt(r.geometry.l1) << " l2=" << fmt(r.geometry.l2) << "\n";
  else os << "geometry    cone l=" << fmt(r.geometry.l) << "\n";
  os << "bc          " << r.bc << "\n";
  os << "log_l_coeff " << fmt(r.log_l_coeff) << "\n";
  os << "global      " << fmt(r.global) << "\n";
  os << "det_ratio   " << fmt(r.det_ratio) << "\n";
  os << "euler       " << fmt(r.euler) << "\n";
  os << "anomaly     " << fmt(r.anomaly) << "\n";
  os << "b1          " << fmt(r.b1) << "\n";
  os << "b2          " << fmt(r.b2) << "\n";
  os << "total       " << fmt(r.total) << "\n";
  for (const auto& n : r.notes) os << "note        " << n << "\n";
  return os.str();
}

std::string format_text(const LimitReport& r) {
  std::ostringstream os;
  os << "section " << r.section << "  l2=" << fmt(r.l2) << "\n";
  os << std::left << std::setw(12) << "l1" << std::setw(24) << "delta" << std::setw(24) << "model" << "remainder\n";
  for (const auto& p : r.points)
    os << std::setw(12) << fmt(p.l1) << std::setw(24) << fmt(p.delta) << std::setw(24) << fmt(p.divergent_model)
       << fmt(p.remainder) << "\n";
  os << "predicted log coeff " << fmt(r.predicted_log_coeff) << "\n";
  os << "fitted log coeff    " << fmt(r.fitted_log_coeff) << "\n";
  os << "finite part         " << fmt(r.finite_part) << "\n";
  os << "target              " << fmt(r.target) << "\n";
  os << "finite - target     " << fmt(r.delta_to_target) << "\n";
  if (r.observed_order != 0.0) os << "observed order      " << fmt(r.observed_order) << "\n";
  for (const auto& n : r.notes) os << "note " << n << "\n";
  return os.str();
}

std::string format_text(const EigenList& e, const SpectrumReport& rep) {
  std::ostringstream os;
  os << "degree " << e.q << "  cutoff " << fmt(e.cutoff) << "  entries " << e.entries.size() << "\n";
  for (const auto& w : rep.weyl)
    os << "weyl lambda=" << fmt(w.lambda) << " count=" << w.count << " predicted=" << fmt(w.predicted)
       << " ratio=" << fmt(w.ratio) << "\n";
  for (const auto& [fam, n] : rep.family_counts) os << "family " << fam << " " << n << "\n";
  std::size_t shown = std::min<std::size_t>(e.entries.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& x = e.entries[i];
    os << fmt(x.value) << " x" << x.mult << " " << x.row << " n=" << x.n << " k=" << x.k << "\n";
  }
  return os.str();
}

std::string format_text(const SectionSpectrum& s) {
  std::ostringstream os;
  os << "section " << s.label << "  dim " << s.dim << "  volume " << fmt(s.volume) << "  cutoff " << fmt(s.cutoff)
     << "\n";
  os << "ranks";
  for (int r : s.harmonic_ranks) os << " " << r;
  os << "  euler " << s.euler_characteristic() << "\n";
  for (int q = 0; q <= s.dim; ++q) {
    long long total = 0;
    for (const auto& e : s.coexact[q]) total += e.mult;
    os << "coexact degree " << q << ": " << s.coexact[q].size() << " values, " << total << " with multiplicity";
    if (!s.coexact[q].empty()) os << ", first " << fmt(s.coexact[q].front().lambda);
    os << "\n";
  }
  return os.str();
}

std::string error_json(const std::string& type, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"type", type}, {"message", message}};
  return j.dump(2);
}

RunResult run(const RunConfig& c) {
  bool json = c.format == OutputFormat::Json;
  try {
    RunResult out;
    const std::string& cmd = c.subcommand;
    if (cmd == "verify") {
      std::vector<SuiteResult> suites;
      auto want = [&](const char* n) { return c.suite == "all" || c.suite == n; };
      if (!want("asymptotics") && !want("bessel") && !want("identities") && !want("spectra") && !want("torsion"))
        throw ConfigError("unknown suite '" + c.suite + "'");
      if (want("bessel")) suites.push_back(verify_bessel());
      if (want("asymptotics")) suites.push_back(verify_asymptotics());
      if (want("identities")) suites.push_back(verify_identities());
      if (want("torsion")) suites.push_back(verify_torsion());
      if (want("spectra")) suites.push_back(verify_spectra());
      nlohmann::ordered_json j = nlohmann::ordered_json::array();
      std::ostringstream os;
      bool ok = true;
      for (const auto& s : suites) {
        ok = ok && s.ok();
        j.push_back({{"suite", s.name}, {"passed", s.passed}, {"total", s.total}, {"failures", s.failures}});
        os << s.name << ": " << s.passed << "/" << s.total << " passed\n";
        for (const auto& f : s.failures) os << "  failed: " << f << "\n";
      }
      out.output = json ? j.dump(2) : os.str();
      out.status = ok ? 0 : 1;
      return out;
    }
    SectionSpectrum s = parse_section_spec(c.section, c.cutoff);
    if (cmd == "section") {
      out.output = json ? section_to_json(s) : format_text(s);
    } else if (cmd == "cone-torsion") {
      auto r = torsion_cone(s, need(c.l, "--l"));
      out.output = json ? r.to_json() : format_text(r);
    } else if (cmd == "negative-torsion") {
      auto r = negative_torsion_cone(s, need(c.l, "--l"));
      out.output = json ? r.to_json() : format_text(r);
    } else if (cmd == "frustum-torsion") {
      auto r = torsion_frustum(s, need(c.l1, "--l1"), need(c.l2, "--l2"), parse_bc(c.bc));
      out.output = json ? r.to_json() : format_text(r);
    } else if (cmd == "limit") {
      if (c.l1_list.empty()) throw ConfigError("missing required flag --l1");
      auto r = limit_experiment(s, c.l2.value_or(1.0), c.l1_list);
      out.output = json ? r.to_json() : format_text(r);
    } else if (cmd == "spectrum") {
      double lambda = c.lambda.value_or(kDefaultSpectrumCutoff);
      bool frustum = c.l1.has_value() || c.l2.has_value();
      double scale = frustum ? need(c.l2, "--l2") : c.l.value_or(1.0);
      double mu = 1.05 * std::sqrt(lambda) * scale + 2.0;
      if (!c.cutoff && s.kind != SectionKind::File && mu * mu > s.cutoff) s = parse_section_spec(c.section, mu * mu);
      EigenList e = frustum ? frustum_spectrum(s, c.degree, parse_bc(c.bc), need(c.l1, "--l1"), *c.l2, lambda)
                            : cone_spectrum(s, c.degree, scale, lambda);
      auto rep = verify_spectrum(e, s);
      out.output = json ? e.to_json() : format_text(e, rep);
    } else {
      throw ConfigError("unknown subcommand '" + cmd + "'");
    }
    return out;
  } catch (const ConfigError& e) {
    return {2, error_json("config", e.what()), true};
  } catch (const SchemaError& e) {
    return {1, error_json("schema", e.what()), true};
  } catch (const DualityError& e) {
    return {1, error_json("duality", e.what()), true};
  } catch (const OrderingError& e) {
    return {1, error_json("ordering", e.what()), true};
  } catch (const ContinuationError& e) {
    return {1, error_json("continuation", e.what()), true};
  } catch (const SectionError& e) {
    return {1, error_json("section", e.what()), true};
  } catch (const IntegerOrderError& e) {
    return {1, error_json("integer_order", e.what()), true};
  } catch (const ZeroError& e) {
    return {1, error_json("zero_bracketing", e.what()), true};
  } catch (const std::invalid_argument& e) {
    return {1, error_json("invalid_argument", e.what()), true};
  } catch (const std::domain_error& e) {
    return {1, error_json("domain", e.what()), true};
  } catch (const std::exception& e) {
    return {1, error_json("internal", e.what()), true};
  }
}

}  // namespace ct
