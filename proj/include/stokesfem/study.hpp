#pragma once

#include <string>
#include <vector>

#include "stokesfem/postproc.hpp"

namespace stokesfem {

/// Configuration of one convergence study: spaces (k, l), the manufactured
/// example, the refinement levels (mesh n = 2^level, h = 2^-level), output
/// locations and toggles.
struct RunConfig {
  int k = 0;
  int l = 0;
  std::string example = "ex1";
  int level_min = 3;
  int level_max = 7;
  std::string out_dir = ".";
  bool postprocess = false;
  bool vtk = false;
  bool properties = false;
  bool debug_flip_normals = false;

  /// Throws std::invalid_argument for unsupported combinations.
  void validate() const;
  std::string csv_path() const;
  std::string markdown_path() const;
};

/// Runs the study over all levels, writes study_k{K}_l{L}.csv and .md (plus
/// optional level{N}.vtk files) under out_dir, and returns the report.
ErrorReport run_convergence_study(const RunConfig& config);

std::string report_to_csv(const ErrorReport& report);
std::string report_to_markdown(const ErrorReport& report, const RunConfig& config);

}  // namespace stokesfem
