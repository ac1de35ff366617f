#pragma once

#include "conetorsion/rational.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ct {

struct SectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : SectionError {
  using SectionError::SectionError;
};
struct DualityError : SectionError {
  using SectionError::SectionError;
};
struct OrderingError : SectionError {
  using SectionError::SectionError;
};
struct ContinuationError : SectionError {
  using SectionError::SectionError;
};

enum class SectionKind { Circle, FlatTorus, File };

struct Eigenvalue {
  double lambda;
  int mult;
  bool operator==(const Eigenvalue& o) const { return lambda == o.lambda && mult == o.mult; }
};

struct SectionSpectrum {
  int dim = 0;
  std::string label;
  double volume = 0.0;
  std::vector<std::vector<Eigenvalue>> coexact;
  std::vector<int> harmonic_ranks;
  std::vector<std::vector<double>> heat_coeffs;
  double cutoff = 0.0;
  std::optional<double> torsion_logT;

  SectionKind kind = SectionKind::File;
  std::vector<double> params;

  int euler_characteristic() const;
  void validate() const;
  bool operator==(const SectionSpectrum& o) const;
};

SectionSpectrum make_circle(double r, double cutoff);
SectionSpectrum make_flat_torus(double L1, double L2, double cutoff);
SectionSpectrum load_section(const std::string& path);
SectionSpectrum parse_section_json(const std::string& text);
std::string section_to_json(const SectionSpectrum& s);

Rational alpha_q(int m, int q);

struct AlphaMu {
  Rational alpha;
  double mu;
  bool integer_mu;
};
AlphaMu alpha_mu(int q, int n, const SectionSpectrum& s);

// Res_{s=j} zeta(s, U_q) for j = 1..m; index j-1.
struct ResidueEntry {
  int j;
  double value;
  bool structural_zero;
};
std::vector<ResidueEntry> coexact_heat_residues(const SectionSpectrum& s, int q);

// zeta(0, Delta_q) on the positive spectrum, from the heat expansion.
Rational zeta_zero(const SectionSpectrum& s, int q);
Rational zeta_cex_zero(const SectionSpectrum& s, int q);

enum class ZetaMethod { Auto, Continuation, Truncation, ShiftedEwald };

struct ZetaResult {
  double value;
  double tail_bound;
  std::string method;
};

ZetaResult section_zeta(const SectionSpectrum& s, int q, double w);
ZetaResult zeta_Q(const SectionSpectrum& s, int q, double w, ZetaMethod method = ZetaMethod::Auto);

double log_ratio_series(double alpha, const std::function<double(int)>& zeta_at_odd, double tol = 1e-12);
double regularized_log_ratio(const SectionSpectrum& s, int q);

double section_analytic_torsion(const SectionSpectrum& s);

double epstein_zeta_2d(double L1, double L2, double s);
double shifted_epstein_zeta_2d(double L1, double L2, double shift, double s);
double upper_incomplete_gamma(double a, double x);

}  // namespace ct
