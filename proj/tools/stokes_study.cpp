#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "stokesfem/properties.hpp"
#include "stokesfem/study.hpp"

namespace {

bool parse_levels(const std::string& text, int& lo, int& hi) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      lo = hi = std::stoi(text);
    } else {
      lo = std::stoi(text.substr(0, colon));
      hi = std::stoi(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence-free mixed finite element solver for the Stokes equation"};
  app.require_subcommand(1);

  stokesfem::RunConfig config;
  std::string levels = "3:7";

  CLI::App* run = app.add_subcommand("run", "Run a manufactured-solution convergence study");
  run->add_option("--k", config.k, "Velocity polynomial degree (0..2)");
  run->add_option("--l", config.l, "Pressure degree: k (RT) or k-1 (BDM)");
  run->add_option("--example", config.example, "Manufactured example name")->default_str("ex1");
  run->add_option("--levels", levels, "Refinement levels A:B (mesh n = 2^level)")
      ->default_str("3:7");
  run->add_option("--out", config.out_dir, "Output directory")->default_str(".");
  run->add_flag("--postprocess", config.postprocess, "Compute the superconvergent velocity lift");
  run->add_flag("--vtk", config.vtk, "Write legacy VTK files per level");
  run->add_flag("--properties", config.properties,
                "Run the module invariant suite and write properties.json");
  run->add_flag("--debug-flip-normals", config.debug_flip_normals,
                "Fault injection: break the edge-normal convention");

  CLI11_PARSE(app, argc, argv);

  if (!parse_levels(levels, config.level_min, config.level_max)) {
    std::cerr << "error: cannot parse --levels '" << levels << "' (expected A:B)\n";
    return 2;
  }
  try {
    config.validate();
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }

  try {
    const stokesfem::ErrorReport report = stokesfem::run_convergence_study(config);
    std::cout << stokesfem::report_to_markdown(report, config);
    std::cout << "\nwrote " << config.csv_path() << "\n";
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }

  if (config.properties) {
    const auto results = stokesfem::run_property_suite(config);
    const std::string path = config.out_dir + "/properties.json";
    std::ofstream out(path, std::ios::binary);
    out << stokesfem::properties_to_json(results, config);
    int failures = 0;
    for (const auto& r : results) {
      if (!r.pass) {
        ++failures;
        std::cerr << "property failed: " << r.name << " (" << r.detail << ")\n";
      }
    }
    std::cout << "wrote " << path << " (" << results.size() - failures << "/" << results.size()
              << " passed)\n";
    if (failures > 0) return 3;
  }
  return 0;
}
