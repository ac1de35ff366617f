#include "conetorsion/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<double> split_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size()) throw ct::ConfigError("bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void add_common(CLI::App* sub, ct::RunConfig& cfg, bool& json, std::string& out) {
  sub->add_option("--section", cfg.section, "circle:r=<f>, torus:<L1>,<L2> or file:<path>")->capture_default_str();
  sub->add_option("--cutoff", cfg.cutoff, "section eigenvalue cutoff");
  sub->add_flag("--json", json, "emit JSON");
  sub->add_option("--out", out, "write output to a file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic torsion of metric cones and frusta"};
  app.require_subcommand(1);
  ct::RunConfig cfg;
  bool json = false;
  std::string out_path, l1_text;

  auto* section = app.add_subcommand("section", "build a section spectrum");
  add_common(section, cfg, json, out_path);

  auto* cone = app.add_subcommand("cone-torsion", "torsion of the cone C_l(W)");
  add_common(cone, cfg, json, out_path);
  cone->add_option("--l", cfg.l, "cone length")->required();

  auto* neg = app.add_subcommand("negative-torsion", "negative torsion of the cone");
  add_common(neg, cfg, json, out_path);
  neg->add_option("--l", cfg.l, "cone length")->required();

  auto* fr = app.add_subcommand("frustum-torsion", "torsion of the frustum");
  add_common(fr, cfg, json, out_path);
  fr->add_option("--l1", cfg.l1, "inner radius")->required();
  fr->add_option("--l2", cfg.l2, "outer radius")->required();
  fr->add_option("--bc", cfg.bc, "abs or mixed")->capture_default_str();

  auto* lim = app.add_subcommand("limit", "frustum collapse experiment");
  add_common(lim, cfg, json, out_path);
  lim->add_option("--l1", l1_text, "descending comma list of inner radii")->required();
  lim->add_option("--l2", cfg.l2, "outer radius");

  auto* spec = app.add_subcommand("spectrum", "enumerate cone or frustum eigenvalues");
  add_common(spec, cfg, json, out_path);
  spec->add_option("--l", cfg.l, "cone length");
  spec->add_option("--l1", cfg.l1, "inner radius, selects a frustum");
  spec->add_option("--l2", cfg.l2, "outer radius");
  spec->add_option("--bc", cfg.bc, "abs or mixed")->capture_default_str();
  spec->add_option("--degree", cfg.degree, "form degree")->capture_default_str();
  spec->add_option("--lambda", cfg.lambda, "eigenvalue cutoff");

  auto* ver = app.add_subcommand("verify", "run built-in verification suites");
  ver->add_option("--suite", cfg.suite, "all, bessel, asymptotics, identities, torsion or spectra")->capture_default_str();
  ver->add_flag("--json", json, "emit JSON");
  ver->add_option("--out", out_path, "write output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cout << ct::error_json("usage", e.what()) << "\n";
    return 2;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = json ? ct::OutputFormat::Json : ct::OutputFormat::Text;
  cfg.out_path = out_path;
  ct::RunResult res;
  try {
    if (!l1_text.empty()) cfg.l1_list = split_list(l1_text);
    res = ct::run(cfg);
  } catch (const std::exception& e) {
    res = {2, ct::error_json("config", e.what()), true};
  }

  std::string text = res.output;
  if (!text.empty() && text.back() != '\n') text += '\n';
  if (!out_path.empty() && !res.error) {
    std::ofstream f(out_path);
    if (!f) {
      std::cout << ct::error_json("io", "cannot open " + out_path) << "\n";
      return 1;
    }
    f << text;
  } else {
    std::cout << text;
  }
  return res.status;
}
