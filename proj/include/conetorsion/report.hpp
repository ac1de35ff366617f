#pragma once

#include "conetorsion/cone_frustum_spectra.hpp"
#include "conetorsion/section_spectra.hpp"
#include "conetorsion/torsion_engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ct {

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string subcommand;
  std::string section = "circle:r=1";
  std::optional<double> l;
  std::optional<double> l1;
  std::optional<double> l2;
  std::vector<double> l1_list;
  std::string bc = "abs";
  std::optional<double> cutoff;
  std::optional<double> lambda;
  int degree = 0;
  std::string suite = "all";
  OutputFormat format = OutputFormat::Text;
  std::string out_path;
};

struct RunResult {
  int status = 0;
  std::string output;
  bool error = false;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

constexpr double kDefaultSectionCutoff = 1e4;
constexpr double kDefaultSpectrumCutoff = 1e3;

SectionSpectrum parse_section_spec(const std::string& spec, std::optional<double> cutoff);
FrustumBC parse_bc(const std::string& s);

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::vector<std::string> failures;

  bool ok() const { return passed == total; }
  void check(bool cond, const std::string& what);
};

SuiteResult verify_asymptotics();
SuiteResult verify_bessel();
SuiteResult verify_identities();
SuiteResult verify_spectra();
SuiteResult verify_torsion();

std::string format_text(const TorsionReport& r);
std::string format_text(const LimitReport& r);
std::string format_text(const EigenList& e, const SpectrumReport& rep);
std::string format_text(const SectionSpectrum& s);
std::string error_json(const std::string& type, const std::string& message);

RunResult run(const RunConfig& config);

}  // namespace ct
