#pragma once

#include "conetorsion/section_spectra.hpp"
#include "conetorsion/special_functions.hpp"

#include <map>
#include <string>
#include <vector>

namespace ct {

enum class FrustumBC { Mixed, Absolute };
enum class Execution { Serial, Parallel };

std::string to_string(FrustumBC bc);

struct Geometry {
  bool frustum = false;
  double l = 1.0;
  double l1 = 0.0;
  double l2 = 0.0;
  FrustumBC bc = FrustumBC::Absolute;
};

struct EigenEntry {
  double value;
  int mult;
  ZeroKind family;
  std::string row;
  int qprime;
  int n;
  int k;
  bool coexact_type;
};

struct EigenList {
  int q = 0;
  Geometry geometry;
  double cutoff = 0.0;
  std::vector<EigenEntry> entries;

  long long count_below(double lambda) const;
  std::string to_json() const;
};

EigenList cone_spectrum(const SectionSpectrum& s, int q, double l, double Lambda, Execution ex = Execution::Parallel);
EigenList frustum_spectrum(const SectionSpectrum& s, int q, FrustumBC bc, double l1, double l2, double Lambda,
                           Execution ex = Execution::Parallel);

struct WeylPoint {
  double lambda;
  long long count;
  double predicted;
  double ratio;
};

struct SpectrumReport {
  std::vector<WeylPoint> weyl;
  std::map<std::string, long long> family_counts;
  bool empty = false;
};

double weyl_constant(const SectionSpectrum& s, const EigenList& e);
SpectrumReport verify_spectrum(const EigenList& e, const SectionSpectrum& s);

struct DualityReport {
  bool ok = true;
  double max_deviation = 0.0;
  std::vector<std::string> mismatches;
};

// Coexact-type rows of degree q against exact-type rows of degree q+1, below a common cutoff.
DualityReport cone_duality(const std::vector<EigenList>& by_degree, double tol);

}  // namespace ct
