#include "stokesfem/study.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "stokesfem/vtk.hpp"

namespace stokesfem {

namespace {

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

std::string order_cell(const std::vector<ErrorRow>& rows, std::size_t i,
                       double ErrorRow::* member, const char* format, const char* blank) {
  if (i == 0) return blank;
  const auto ord = ErrorReport::order(rows[i - 1].*member, rows[i].*member);
  return ord ? fmt(format, *ord) : blank;
}

}  // namespace

void RunConfig::validate() const {
  SpaceConfig{k, l}.validate();
  if (level_min < 0 || level_min > level_max)
    throw std::invalid_argument("RunConfig: levels must satisfy 0 <= A <= B");
  if (level_max > 10) throw std::invalid_argument("RunConfig: level too large (max 10)");
  if (find_example(example) == nullptr)
    throw std::invalid_argument("RunConfig: unknown example '" + example + "'");
}

std::string RunConfig::csv_path() const {
  return out_dir + "/study_k" + std::to_string(k) + "_l" + std::to_string(l) + ".csv";
}

std::string RunConfig::markdown_path() const {
  return out_dir + "/study_k" + std::to_string(k) + "_l" + std::to_string(l) + ".md";
}

ErrorReport run_convergence_study(const RunConfig& config) {
  config.validate();
  const ExactSolution& exact = *find_example(config.example);
  std::filesystem::create_directories(config.out_dir);

  ErrorReport report;
  for (int level = config.level_min; level <= config.level_max; ++level) {
    const int n = 1 << level;
    Mesh mesh = Mesh::uniform_unit_square(n);
    if (config.debug_flip_normals) mesh.flip_normals_for_testing();
    const StokesSolution solution = solve_stokes(mesh, SpaceConfig{config.k, config.l},
                                                 exact.forcing);
    PostprocessedVelocity post;
    if (config.postprocess) post = postprocess(solution);
    report.rows.push_back(
        error_norms(solution, config.postprocess ? &post : nullptr, exact));
    if (config.vtk)
      write_vtk_solution(solution, config.out_dir + "/level" + std::to_string(level) + ".vtk");
  }

  std::ofstream csv(config.csv_path(), std::ios::binary);
  if (!csv) throw std::runtime_error("run_convergence_study: cannot write " + config.csv_path());
  csv << report_to_csv(report);
  std::ofstream md(config.markdown_path(), std::ios::binary);
  md << report_to_markdown(report, config);
  return report;
}

std::string report_to_csv(const ErrorReport& report) {
  std::string out =
      "h,err_u,ord_u,err_sigma,ord_sigma,err_sigma_0h,ord_sigma_0h,err_p,ord_p,"
      "err_Iu,ord_Iu,err_upost,ord_upost,err_grad_upost,ord_grad_upost\n";
  const auto& rows = report.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ErrorRow& r = rows[i];
    out += fmt("%.10g", r.h);
    out += "," + fmt("%.6e", r.err_u) + "," + order_cell(rows, i, &ErrorRow::err_u, "%.2f", "");
    out += "," + fmt("%.6e", r.err_sigma) + "," +
           order_cell(rows, i, &ErrorRow::err_sigma, "%.2f", "");
    out += "," + fmt("%.6e", r.err_sigma_0h) + "," +
           order_cell(rows, i, &ErrorRow::err_sigma_0h, "%.2f", "");
    out += "," + fmt("%.6e", r.err_p) + "," + order_cell(rows, i, &ErrorRow::err_p, "%.2f", "");
    out += "," + fmt("%.6e", r.err_iu) + "," + order_cell(rows, i, &ErrorRow::err_iu, "%.2f", "");
    if (r.has_postprocessed) {
      out += "," + fmt("%.6e", r.err_upost) + "," +
             order_cell(rows, i, &ErrorRow::err_upost, "%.2f", "");
      out += "," + fmt("%.6e", r.err_grad_upost) + "," +
             order_cell(rows, i, &ErrorRow::err_grad_upost, "%.2f", "");
    } else {
      out += ",,,,";
    }
    out += "\n";
  }
  return out;
}

std::string report_to_markdown(const ErrorReport& report, const RunConfig& config) {
  std::string out;
  out += "# Convergence study: k=" + std::to_string(config.k) + ", l=" + std::to_string(config.l) +
         ", example=" + config.example + "\n\n";
  out += "Mesh: uniform unit-square triangulation, diagonal split " +
         std::string(Mesh::diagonal_convention()) + "; h = 1/n.\n\n";
  const auto& rows = report.rows;

  out += "| h | \\|u-u_h\\| | order | \\|sigma-sigma_h\\| | order | \\|p-p_h\\| | order |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ErrorRow& r = rows[i];
    const int level = static_cast<int>(std::lround(-std::log2(r.h)));
    out += "| 2^-" + std::to_string(level) + " | " + fmt("%.3e", r.err_u) + " | " +
           order_cell(rows, i, &ErrorRow::err_u, "%.2f", "--") + " | " +
           fmt("%.3e", r.err_sigma) + " | " +
           order_cell(rows, i, &ErrorRow::err_sigma, "%.2f", "--") + " | " +
           fmt("%.3e", r.err_p) + " | " + order_cell(rows, i, &ErrorRow::err_p, "%.2f", "--") +
           " |\n";
  }
  if (!rows.empty() && rows.front().has_postprocessed) {
    out += "\n| h | \\|u-u*\\| | order | \\|grad_h(u-u*)\\| | order |\n";
    out += "|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ErrorRow& r = rows[i];
      const int level = static_cast<int>(std::lround(-std::log2(r.h)));
      out += "| 2^-" + std::to_string(level) + " | " + fmt("%.3e", r.err_upost) + " | " +
             order_cell(rows, i, &ErrorRow::err_upost, "%.2f", "--") + " | " +
             fmt("%.3e", r.err_grad_upost) + " | " +
             order_cell(rows, i, &ErrorRow::err_grad_upost, "%.2f", "--") + " |\n";
    }
  }
  return out;
}

}  // namespace stokesfem
