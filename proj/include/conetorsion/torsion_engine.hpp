#pragma once

#include "conetorsion/cone_frustum_spectra.hpp"
#include "conetorsion/exact_asymptotics.hpp"
#include "conetorsion/section_spectra.hpp"

#include <string>
#include <vector>

namespace ct {

struct TorsionReport {
  std::string section;
  Geometry geometry;
  std::string bc;
  double log_l_coeff = 0.0;
  double global = 0.0;
  double det_ratio = 0.0;
  double euler = 0.0;
  double anomaly = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double total = 0.0;
  std::vector<std::string> notes;

  void finalize();
  std::string to_json() const;
};

enum class NormKind { ConeGamma, FrustumGamma };
enum class DetKind { ConeAbsIdeal, FrustumAbs };

double norm_factor(NormKind kind, int m, int q, const Geometry& g);
double det_ratio(DetKind kind, const SectionSpectrum& s, const Geometry& g);

struct AnomalyTerm {
  std::string part;
  int q;
  int j;
  Rational finite_part;
  double residue;
  double weight;
  double contribution;
};

struct AnomalyResult {
  double value = 0.0;
  std::vector<AnomalyTerm> terms;
};

AnomalyResult anomaly_bm_cone_terms(const SectionSpectrum& s, int order = 0);
double anomaly_bm_cone(const SectionSpectrum& s);
AnomalyResult anomaly_bm_frustum_terms(const SectionSpectrum& s, FrustumBC bc, int order = 0);

double b1_term(const SectionSpectrum& s);

TorsionReport torsion_cone(const SectionSpectrum& s, double l);
double torsion_cone_closed_form(const SectionSpectrum& s, double l);
TorsionReport torsion_frustum(const SectionSpectrum& s, double l1, double l2, FrustumBC bc);
TorsionReport negative_torsion_cone(const SectionSpectrum& s, double l);

struct LimitPoint {
  double l1;
  double delta;
  double divergent_model;
  double remainder;
};

struct LimitReport {
  std::string section;
  double l2 = 1.0;
  std::vector<LimitPoint> points;
  double predicted_log_coeff = 0.0;
  double fitted_log_coeff = 0.0;
  double finite_part = 0.0;
  double target = 0.0;
  double delta_to_target = 0.0;
  double observed_order = 0.0;
  std::vector<std::string> notes;

  std::string to_json() const;
};

LimitReport limit_experiment(const SectionSpectrum& s, double l2, const std::vector<double>& l1_list);

}  // namespace ct
