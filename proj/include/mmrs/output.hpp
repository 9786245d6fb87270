#pragma once

#include <string>
#include <vector>

#include "mmrs/config.hpp"

namespace mmrs {

// Header x,rho,u,p,S,q,material,phase; 17 significant digits.
std::string snapshot_csv(const std::vector<CellRow>& rows, const std::vector<std::string>& material_names);

// n samples of the self-similar fan at time t, interface initially at x_if.
std::string fan_csv(const StarState& star, double t, int n, double x_if,
                    const std::vector<std::string>& material_names);

std::string plot_script(const std::vector<std::string>& csv_files, const std::string& title);

struct RunResult {
  bool ok = false;
  std::string error;
  int steps = 0;
  double time = 0;
  std::vector<std::string> snapshot_files;
  std::string manifest_path;
};

// Runs cfg to t_end, writing snapshot_NNN.csv, manifest.txt and plot.py into out_dir.
// On failure the partial outputs stay and the manifest records the error.
RunResult run_to_directory(const ProblemConfig& cfg, const std::string& out_dir);

}  // namespace mmrs
