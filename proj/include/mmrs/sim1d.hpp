#pragma once

#include <array>
#include <string>
#include <vector>

#include "mmrs/riemann.hpp"

namespace mmrs {

enum class Geometry { Planar, Spherical };
enum class Boundary { Outflow, Wall };

struct Grid1D {
  double x0 = 0, x1 = 1;
  int n = 100;
  Geometry geometry = Geometry::Planar;

  double dx() const { return (x1 - x0) / n; }
  double face(int i) const { return i == n ? x1 : x0 + i * dx(); }
  double center(int i) const { return 0.5 * (face(i) + face(i + 1)); }
  double area(double x) const { return geometry == Geometry::Planar ? 1.0 : x * x; }
  // Spherical volumes are per unit solid angle.
  double volume(double a, double b) const {
    if (b <= a) return 0.0;
    return geometry == Geometry::Planar ? b - a : (b * b * b - a * a * a) / 3.0;
  }
  double cell_volume(int i) const { return volume(face(i), face(i + 1)); }
  void validate() const;
};

struct Conserved {
  double rho = 0, mom = 0, E = 0, rhoS = 0;
};

struct Primitive {
  double rho = 0, u = 0, p = 0, S = 0;
};

Conserved to_conserved(const Material& m, const Primitive& w);
Primitive to_primitive(const Material& m, const Conserved& U);

// Signal speed |u| + sqrt(c^2 + 4 beta/(3 rho^2)) with beta of the current phase.
double signal_speed(const Material& m, const Primitive& w);

struct Flux {
  double mass = 0, mom = 0, energy = 0, rhoS = 0;
};

Flux physical_flux(const Material& m, const Primitive& w);
// LLF for mass, momentum and energy; upwind by face velocity for rho S.
Flux edge_flux(const Material& m, const Primitive& l, const Primitive& r);

struct InterfaceFlux {
  double q = 0, u = 0;
  int iterations = 0;
};
InterfaceFlux interface_flux(const Material& ml, const Primitive& l, const Material& mr,
                             const Primitive& r, double tolerance);

struct InterfaceTrack {
  std::vector<double> x;
  std::vector<int> left_material, right_material;
};
InterfaceTrack advance_interface(const InterfaceTrack& t, const std::vector<double>& ustar, double dt);

// Piecewise evolution law over one strain increment (du/dx - u/r) dt, with
// effective shear moduli mu_e = beta_e/rho and mu_p = beta_p/rho.
double evolve_deviator(double S, double strain, double mu_e, double mu_p, const DeviatoricModel& m);

// Momentum source of one fragment [rl, rr] in spherical geometry.
double spherical_momentum_source(double p, double S, double rl, double rr);

struct RegionInit {
  int material = 0;
  double xl = 0, xr = 0;
  Primitive state;
  // Continue the previous region's medium without a tracked interface.
  // xl must sit on a cell face.
  bool untracked = false;
};

struct Region {
  int material = 0;
  double xl = 0, xr = 0;
  int first = 0;
  std::vector<Conserved> cells;
};

struct StepReport {
  double dt = 0;
  int max_iterations = 0;
  std::vector<double> ustar, qstar;
  // Net inflow over the step through the domain boundaries (and retired regions).
  std::array<double, 3> boundary_inflow{};
};

struct Totals {
  double mass = 0, momentum = 0, energy = 0;
};

struct CellRow {
  double x = 0, rho = 0, u = 0, p = 0, S = 0, q = 0;
  int material = 0;
  Phase phase = Phase::Elastic;
};

class Simulation {
 public:
  Simulation(Grid1D grid, std::vector<Material> materials, std::vector<RegionInit> regions,
             Boundary left = Boundary::Outflow, Boundary right = Boundary::Outflow,
             double tolerance = 1e-10);

  double time() const { return time_; }
  const Grid1D& grid() const { return grid_; }
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<Material>& materials() const { return materials_; }
  InterfaceTrack track() const;

  double cfl_dt(double cfl) const;
  StepReport step(double cfl, double dt_max = kInf);

  Totals totals() const;
  std::vector<CellRow> snapshot() const;
  // Fragment volume of region r in cell i.
  double fragment_volume(const Region& r, int i) const;

 private:
  Grid1D grid_;
  std::vector<Material> materials_;
  std::vector<Region> regions_;
  Boundary bl_, br_;
  double tol_;
  double time_ = 0;
};

}  // namespace mmrs
