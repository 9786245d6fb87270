#pragma once

#include <string>
#include <vector>

#include "mmrs/sim1d.hpp"

namespace mmrs {

struct NamedMaterial {
  std::string name;
  Material material;
};

struct RegionConfig {
  std::string material;
  double xl = 0, xr = 0;
  Primitive state;
};

struct ProblemConfig {
  std::string name;
  Geometry geometry = Geometry::Planar;
  double x0 = 0, x1 = 1;
  int cells = 400;
  double cfl = 0.4;
  double t_end = 0;
  std::vector<double> snapshots;  // empty: t_end only
  double tolerance = 1e-10;
  Boundary left = Boundary::Outflow, right = Boundary::Outflow;
  std::vector<NamedMaterial> materials;
  std::vector<RegionConfig> regions;
  std::string output_dir = "out";

  int material_index(const std::string& name) const;  // -1 if absent
  // Snapshot times, sorted, t_end appended when missing.
  std::vector<double> snapshot_times() const;
};

// Line grammar:
//   # comment          blank lines ignored
//   [problem] | [material NAME] | [region]
//   key = value
// Errors: Parse with "line N: ..." for syntax, unknown keys and bad numbers.
ProblemConfig parse_config_text(const std::string& text, const std::string& origin = "<text>");
ProblemConfig parse_config(const std::string& path);

// Throws Validation with a field path like "region[1].range" or "material.gas.gamma".
void validate(const ProblemConfig& cfg);

// Canonical text; parse_config_text(to_text(c)) reproduces c.
std::string to_text(const ProblemConfig& cfg);

Simulation make_simulation(const ProblemConfig& cfg);

// Riemann problem across the boundary between region k and k+1.
RiemannInput riemann_input(const ProblemConfig& cfg, std::size_t k = 0);

// Catalogue.
std::vector<std::string> preset_names();
bool has_preset(const std::string& name);
const std::string& preset_text(const std::string& name);  // throws Validation
ProblemConfig preset(const std::string& name);

// FNV-1a 64 of a byte string.
unsigned long long fnv1a64(const std::string& s);

}  // namespace mmrs
