#include "mmrs/sim1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmrs/error.hpp"

namespace mmrs {

void Grid1D::validate() const {
  if (n <= 0) fail(ErrorKind::Validation, "grid: cells must be positive");
  if (!(x1 > x0)) fail(ErrorKind::Validation, "grid: domain must satisfy x0 < x1");
  if (geometry == Geometry::Spherical && x0 < 0)
    fail(ErrorKind::Validation, "grid: spherical geometry needs x0 >= 0");
}

namespace {

double specific_energy(const Material& m, double rho, double p) {
  if (m.eos.barotropic()) return 0.0;
  return internal_energy(m.eos, rho, p);
}

double effective_beta(const std::optional<double>& over, double mu, double rho) {
  return over ? *over : rho * mu;
}

}  // namespace

Conserved to_conserved(const Material& m, const Primitive& w) {
  Conserved U;
  U.rho = w.rho;
  U.mom = w.rho * w.u;
  U.E = w.rho * specific_energy(m, w.rho, w.p) + 0.5 * w.rho * w.u * w.u;
  U.rhoS = w.rho * w.S;
  return U;
}

Primitive to_primitive(const Material& m, const Conserved& U) {
  Primitive w;
  w.rho = U.rho;
  if (!(U.rho > 0)) {
    std::ostringstream os;
    os << "non-positive density " << U.rho;
    fail(ErrorKind::NonHyperbolic, os.str());
  }
  w.u = U.mom / U.rho;
  w.S = U.rhoS / U.rho;
  if (m.eos.barotropic()) {
    w.p = coefficients(m.eos, w.rho).h;
  } else {
    const double e = (U.E - 0.5 * U.rho * w.u * w.u) / U.rho;
    w.p = pressure(m.eos, w.rho, e);
  }
  return w;
}

double signal_speed(const Material& m, const Primitive& w) {
  // Unloading from any phase is elastic, so the elastic speed bounds all waves.
  const double b = effective_beta(m.model.beta_e, m.model.mu_e, w.rho);
  const double c2 = sound_speed_squared(m.eos, w.rho, w.p);
  return std::abs(w.u) + std::sqrt(c2 + 4.0 * b / (3.0 * w.rho * w.rho));
}

Flux physical_flux(const Material& m, const Primitive& w) {
  const double E = w.rho * specific_energy(m, w.rho, w.p) + 0.5 * w.rho * w.u * w.u;
  Flux f;
  f.mass = w.rho * w.u;
  f.mom = w.rho * w.u * w.u + w.p - w.S;
  f.energy = (E + w.p - w.S) * w.u;
  f.rhoS = w.rho * w.S * w.u;
  return f;
}

Flux edge_flux(const Material& m, const Primitive& l, const Primitive& r) {
  const double lam = std::max(signal_speed(m, l), signal_speed(m, r));
  const Flux fl = physical_flux(m, l), fr = physical_flux(m, r);
  const Conserved ul = to_conserved(m, l), ur = to_conserved(m, r);
  Flux f;
  f.mass = 0.5 * (fl.mass + fr.mass) - 0.5 * lam * (ur.rho - ul.rho);
  f.mom = 0.5 * (fl.mom + fr.mom) - 0.5 * lam * (ur.mom - ul.mom);
  f.energy = 0.5 * (fl.energy + fr.energy) - 0.5 * lam * (ur.E - ul.E);
  const double uf = 0.5 * (l.u + r.u);
  f.rhoS = uf * (uf >= 0 ? ul.rhoS : ur.rhoS);
  return f;
}

InterfaceFlux interface_flux(const Material& ml, const Primitive& l, const Material& mr,
                             const Primitive& r, double tolerance) {
  RiemannInput in;
  in.left = {l.rho, l.u, l.p, l.S};
  in.right = {r.rho, r.u, r.p, r.S};
  in.left_material = ml;
  in.right_material = mr;
  in.tolerance = tolerance;
  const auto st = solve(in);
  return {st.q, st.u, st.iterations};
}

InterfaceTrack advance_interface(const InterfaceTrack& t, const std::vector<double>& ustar, double dt) {
  if (!(dt > 0)) fail(ErrorKind::Validation, "advance_interface: dt must be positive");
  if (ustar.size() != t.x.size()) fail(ErrorKind::Validation, "advance_interface: one u* per interface");
  InterfaceTrack out = t;
  for (std::size_t k = 0; k < t.x.size(); ++k) out.x[k] = t.x[k] + ustar[k] * dt;
  for (std::size_t k = 1; k < out.x.size(); ++k)
    if (!(out.x[k] > out.x[k - 1])) {
      std::ostringstream os;
      os << "interfaces " << k - 1 << " and " << k << " collide near x = " << out.x[k];
      fail(ErrorKind::Topology, os.str());
    }
  return out;
}

double evolve_deviator(double S, double strain, double mu_e, double mu_p, const DeviatoricModel& m) {
  const double a = 2.0 * m.y_e / 3.0;
  const double b = 2.0 * m.y_p / 3.0;
  auto clamp = [&](double s) { return std::isfinite(b) ? std::clamp(s, -b, b) : s; };
  double rem = strain;
  for (int it = 0; it < 8 && rem != 0; ++it) {
    const double dir = rem > 0 ? 1.0 : -1.0;
    const bool outward = S == 0 || (S > 0) == (dir > 0);
    const double s = std::abs(S);
    double rate, target;
    if (b == 0) return 0.0;
    if (!outward || s < a * (1 - 1e-12)) {
      rate = mu_e;
      target = dir * a;
    } else if (!std::isfinite(b) || s < b * (1 - 1e-12)) {
      rate = mu_p;
      target = dir * b;
    } else {
      return clamp(S);
    }
    if (!(rate > 0)) return clamp(S);
    const double k = 4.0 * rate / 3.0;
    const double dS = k * rem;
    if (std::isfinite(target) && (target - S) * dir < dS * dir) {
      rem -= (target - S) / k;
      S = target;
    } else {
      S += dS;
      rem = 0;
    }
  }
  return clamp(S);
}

double spherical_momentum_source(double p, double S, double rl, double rr) {
  // Hoop stresses -p - S/2 give (2p + S)/r; integrated over r^2 dr.
  return (p + 0.5 * S) * (rr * rr - rl * rl);
}

Simulation::Simulation(Grid1D grid, std::vector<Material> materials, std::vector<RegionInit> regions,
                       Boundary left, Boundary right, double tolerance)
    : grid_(grid), materials_(std::move(materials)), bl_(left), br_(right), tol_(tolerance) {
  grid_.validate();
  for (const auto& m : materials_) {
    m.eos.validate();
    m.model.validate();
  }
  if (regions.empty()) fail(ErrorKind::Validation, "at least one region is required");
  std::sort(regions.begin(), regions.end(), [](const auto& a, const auto& b) { return a.xl < b.xl; });
  const double eps = 1e-12 * (grid_.x1 - grid_.x0);
  if (std::abs(regions.front().xl - grid_.x0) > eps || std::abs(regions.back().xr - grid_.x1) > eps)
    fail(ErrorKind::Validation, "regions must cover the whole domain");
  for (std::size_t k = 0; k < regions.size(); ++k) {
    const auto& ri = regions[k];
    if (!(ri.xr > ri.xl)) fail(ErrorKind::Validation, "region " + std::to_string(k) + " is empty");
    if (k > 0 && std::abs(ri.xl - regions[k - 1].xr) > eps)
      fail(ErrorKind::Validation, "regions " + std::to_string(k - 1) + " and " + std::to_string(k) +
                                      (ri.xl < regions[k - 1].xr ? " overlap" : " leave a gap"));
    if (ri.material < 0 || ri.material >= static_cast<int>(materials_.size()))
      fail(ErrorKind::Validation, "region " + std::to_string(k) + " has an unknown material");
    const auto& mat = materials_[ri.material];
    if (ri.untracked) {
      if (k == 0 || regions[k - 1].material != ri.material)
        fail(ErrorKind::Validation, "region " + std::to_string(k) + ": untracked jump needs the same material on both sides");
      const double f = (ri.xl - grid_.x0) / grid_.dx();
      if (std::abs(f - std::round(f)) > 1e-9)
        fail(ErrorKind::Validation, "region " + std::to_string(k) + ": untracked jump must sit on a cell face");
    }
    if (!(ri.state.rho > 0)) fail(ErrorKind::Validation, "region " + std::to_string(k) + ": rho must be > 0");
    classify_phase(effective_stress(ri.state.S), mat.model);
    sound_speed_squared(mat.eos, ri.state.rho, ri.state.p);
  }
  for (std::size_t k = 0; k < regions.size(); ++k) {
    const auto& ri = regions[k];
    Region r;
    r.material = ri.material;
    r.xl = k == 0 ? grid_.x0 : regions[k - 1].xr;
    r.xr = k + 1 == regions.size() ? grid_.x1 : ri.xr;
    Primitive w = ri.state;
    if (materials_[ri.material].eos.barotropic()) w.p = coefficients(materials_[ri.material].eos, w.rho).h;
    const Conserved U = to_conserved(materials_[ri.material], w);
    if (ri.untracked) {
      Region& prev = regions_.back();
      prev.xr = r.xr;
      for (int i = prev.first + static_cast<int>(prev.cells.size()); i < grid_.n; ++i)
        if (fragment_volume(prev, i) > 0) prev.cells.push_back(U);
      for (std::size_t j = 0; j < prev.cells.size(); ++j)
        if (grid_.center(prev.first + static_cast<int>(j)) > ri.xl) prev.cells[j] = U;
      continue;
    }
    r.first = -1;
    for (int i = 0; i < grid_.n; ++i) {
      if (fragment_volume(r, i) <= 0) continue;
      if (r.first < 0) r.first = i;
      r.cells.push_back(U);
    }
    regions_.push_back(std::move(r));
  }
}

double Simulation::fragment_volume(const Region& r, int i) const {
  return grid_.volume(std::max(grid_.face(i), r.xl), std::min(grid_.face(i + 1), r.xr));
}

InterfaceTrack Simulation::track() const {
  InterfaceTrack t;
  for (std::size_t k = 0; k + 1 < regions_.size(); ++k) {
    t.x.push_back(regions_[k].xr);
    t.left_material.push_back(regions_[k].material);
    t.right_material.push_back(regions_[k + 1].material);
  }
  return t;
}

double Simulation::cfl_dt(double cfl) const {
  if (!(cfl > 0 && cfl <= 1)) fail(ErrorKind::Validation, "cfl must be in (0, 1]");
  double smax = 0;
  for (const auto& r : regions_) {
    const auto& m = materials_[r.material];
    for (std::size_t j = 0; j < r.cells.size(); ++j) {
      Primitive w;
      try {
        w = to_primitive(m, r.cells[j]);
        smax = std::max(smax, signal_speed(m, w));
      } catch (const Error& e) {
        std::ostringstream os;
        os << "cell " << r.first + static_cast<int>(j) << ": " << e.what();
        fail(e.kind(), os.str());
      }
    }
  }
  return cfl * grid_.dx() / smax;
}

namespace {

int cell_lo(const Grid1D& g, double x) {
  return std::clamp(static_cast<int>(std::floor((x - g.x0) / g.dx())), 0, g.n - 1);
}
int cell_hi(const Grid1D& g, double x) {
  return std::clamp(static_cast<int>(std::ceil((x - g.x0) / g.dx())) - 1, 0, g.n - 1);
}

}  // namespace

StepReport Simulation::step(double cfl, double dt_max) {
  StepReport rep;
  const int R = static_cast<int>(regions_.size());
  std::vector<std::vector<Primitive>> W(R);
  for (int r = 0; r < R; ++r) {
    const auto& reg = regions_[r];
    const auto& m = materials_[reg.material];
    W[r].resize(reg.cells.size());
    for (std::size_t j = 0; j < reg.cells.size(); ++j) {
      try {
        W[r][j] = to_primitive(m, reg.cells[j]);
        sound_speed_squared(m.eos, W[r][j].rho, W[r][j].p);
      } catch (const Error& e) {
        std::ostringstream os;
        os << "region " << r << " cell " << reg.first + static_cast<int>(j) << " at t = " << time_ << ": "
           << e.what();
        fail(e.kind(), os.str());
      }
    }
  }

  // State seen by an interface: the adjacent fragment, merged with its
  // neighbour when it is a small cut.
  auto end_state = [&](int r, bool right_end) {
    const auto& reg = regions_[r];
    const auto& m = materials_[reg.material];
    const int nc = static_cast<int>(reg.cells.size());
    const int j = right_end ? nc - 1 : 0;
    const int i = reg.first + j;
    const double v = fragment_volume(reg, i);
    if (v >= 0.1 * grid_.cell_volume(i) || nc < 2) return W[r][j];
    const int j2 = right_end ? j - 1 : j + 1;
    const double v2 = fragment_volume(reg, reg.first + j2);
    Conserved U;
    const auto& a = reg.cells[j];
    const auto& b = reg.cells[j2];
    U.rho = (v * a.rho + v2 * b.rho) / (v + v2);
    U.mom = (v * a.mom + v2 * b.mom) / (v + v2);
    U.E = (v * a.E + v2 * b.E) / (v + v2);
    U.rhoS = (v * a.rhoS + v2 * b.rhoS) / (v + v2);
    return to_primitive(m, U);
  };

  std::vector<InterfaceFlux> iflux(std::max(R - 1, 0));
  for (int k = 0; k + 1 < R; ++k) {
    try {
      iflux[k] = interface_flux(materials_[regions_[k].material], end_state(k, true),
                                materials_[regions_[k + 1].material], end_state(k + 1, false), tol_);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "interface " << k << " at x = " << regions_[k].xr << ", t = " << time_ << ": " << e.what();
      fail(e.kind(), os.str());
    }
    rep.max_iterations = std::max(rep.max_iterations, iflux[k].iterations);
    rep.ustar.push_back(iflux[k].u);
    rep.qstar.push_back(iflux[k].q);
  }

  double dt = std::min(cfl_dt(cfl), dt_max);
  for (const auto& f : iflux)
    if (f.u != 0) dt = std::min(dt, 0.5 * grid_.dx() / std::abs(f.u));
  if (!(dt > 0)) fail(ErrorKind::Validation, "non-positive time step");
  rep.dt = dt;

  // New interface positions; an interface leaving the domain retires the
  // region beyond it.
  std::vector<double> Xo(std::max(R - 1, 0)), Xn(std::max(R - 1, 0));
  for (int k = 0; k + 1 < R; ++k) {
    Xo[k] = regions_[k].xr;
    Xn[k] = std::clamp(Xo[k] + iflux[k].u * dt, grid_.x0, grid_.x1);
  }
  for (int k = 1; k + 1 < R; ++k)
    if (!(Xn[k] > Xn[k - 1])) {
      std::ostringstream os;
      os << "interfaces " << k - 1 << " and " << k << " collide near x = " << Xn[k];
      fail(ErrorKind::Topology, os.str());
    }

  std::vector<Region> next;
  for (int r = 0; r < R; ++r) {
    const auto& reg = regions_[r];
    const auto& m = materials_[reg.material];
    const double oL = reg.xl, oR = reg.xr;
    const double nL = r == 0 ? grid_.x0 : Xn[r - 1];
    const double nR = r + 1 == R ? grid_.x1 : Xn[r];
    const int a = std::min(reg.first, cell_lo(grid_, nL));
    const int b = std::max(reg.first + static_cast<int>(reg.cells.size()) - 1, cell_hi(grid_, nR));
    const int nc = b - a + 1;
    std::vector<double> Vo(nc), Vn(nc);
    std::vector<char> small(nc);
    for (int i = a; i <= b; ++i) {
      const double cv = grid_.cell_volume(i);
      Vo[i - a] = grid_.volume(std::max(grid_.face(i), oL), std::min(grid_.face(i + 1), oR));
      Vn[i - a] = grid_.volume(std::max(grid_.face(i), nL), std::min(grid_.face(i + 1), nR));
      small[i - a] = Vo[i - a] < 0.1 * cv || Vn[i - a] < 0.1 * cv;
    }
    auto Wi = [&](int i) -> const Primitive& { return W[r][i - reg.first]; };
    auto Ui = [&](int i) -> const Conserved& { return reg.cells[i - reg.first]; };
    auto has_old = [&](int i) { return i >= reg.first && i < reg.first + static_cast<int>(reg.cells.size()); };

    // Groups of cells updated together.
    std::vector<std::pair<int, int>> groups;
    int jl = a;
    while (jl < b && small[jl - a]) ++jl;
    int kr = b;
    while (kr > a && small[kr - a]) --kr;
    if (jl >= kr) {
      groups.push_back({a, b});
    } else {
      groups.push_back({a, jl});
      for (int i = jl + 1; i < kr; ++i) groups.push_back({i, i});
      groups.push_back({kr, b});
    }
    const int G = static_cast<int>(groups.size());

    // Fluxes at group boundaries 0..G (area-weighted), and face velocities.
    std::vector<Flux> F(G + 1);
    std::vector<double> uface(G + 1);
    if (r == 0) {
      const Primitive& w = Wi(a);
      Primitive ghost = w;
      if (bl_ == Boundary::Wall) ghost.u = -w.u;
      Flux f = edge_flux(m, ghost, w);
      const double A = grid_.area(grid_.x0);
      F[0] = {A * f.mass, A * f.mom, A * f.energy, A * f.rhoS};
      uface[0] = 0.5 * (ghost.u + w.u);
      rep.boundary_inflow[0] += dt * F[0].mass;
      rep.boundary_inflow[1] += dt * F[0].mom;
      rep.boundary_inflow[2] += dt * F[0].energy;
    } else {
      const auto& fi = iflux[r - 1];
      const double A = grid_.area(0.5 * (Xo[r - 1] + Xn[r - 1]));
      F[0] = {0.0, A * fi.q, A * fi.q * fi.u, 0.0};
      uface[0] = fi.u;
    }
    if (r + 1 == R) {
      const Primitive& w = Wi(b);
      Primitive ghost = w;
      if (br_ == Boundary::Wall) ghost.u = -w.u;
      Flux f = edge_flux(m, w, ghost);
      const double A = grid_.area(grid_.x1);
      F[G] = {A * f.mass, A * f.mom, A * f.energy, A * f.rhoS};
      uface[G] = 0.5 * (ghost.u + w.u);
      rep.boundary_inflow[0] -= dt * F[G].mass;
      rep.boundary_inflow[1] -= dt * F[G].mom;
      rep.boundary_inflow[2] -= dt * F[G].energy;
    } else {
      const auto& fi = iflux[r];
      const double A = grid_.area(0.5 * (Xo[r] + Xn[r]));
      F[G] = {0.0, A * fi.q, A * fi.q * fi.u, 0.0};
      uface[G] = fi.u;
    }
    for (int g = 1; g < G; ++g) {
      const int i = groups[g].first;  // face between cells i-1 and i
      Flux f = edge_flux(m, Wi(i - 1), Wi(i));
      const double A = grid_.area(grid_.face(i));
      F[g] = {A * f.mass, A * f.mom, A * f.energy, A * f.rhoS};
      uface[g] = 0.5 * (Wi(i - 1).u + Wi(i).u);
    }

    Region nr;
    nr.material = reg.material;
    nr.xl = nL;
    nr.xr = nR;
    nr.first = -1;
    std::vector<Conserved> newU(nc);
    for (int g = 0; g < G; ++g) {
      const auto [i0, i1] = groups[g];
      Conserved sum;
      double vn = 0, msrc = 0;
      for (int i = i0; i <= i1; ++i) {
        vn += Vn[i - a];
        if (!has_old(i) || Vo[i - a] <= 0) continue;
        const double v = Vo[i - a];
        const auto& U = Ui(i);
        sum.rho += v * U.rho;
        sum.mom += v * U.mom;
        sum.E += v * U.E;
        sum.rhoS += v * U.rhoS;
        if (grid_.geometry == Geometry::Spherical) {
          const double rl = std::max(grid_.face(i), oL), rr = std::min(grid_.face(i + 1), oR);
          msrc += spherical_momentum_source(Wi(i).p, Wi(i).S, rl, rr);
        }
      }
      sum.rho -= dt * (F[g + 1].mass - F[g].mass);
      sum.mom -= dt * (F[g + 1].mom - F[g].mom);
      sum.mom += dt * msrc;
      sum.E -= dt * (F[g + 1].energy - F[g].energy);
      sum.rhoS -= dt * (F[g + 1].rhoS - F[g].rhoS);
      if (!(vn > 0)) {
        // Region left the domain through a boundary.
        rep.boundary_inflow[0] -= sum.rho;
        rep.boundary_inflow[1] -= sum.mom;
        rep.boundary_inflow[2] -= sum.E;
        continue;
      }
      Conserved U{sum.rho / vn, sum.mom / vn, sum.E / vn, sum.rhoS / vn};
      if (!(U.rho > 0)) {
        std::ostringstream os;
        os << "region " << r << " cells " << i0 << "-" << i1 << ": density " << U.rho << " at t = " << time_;
        fail(ErrorKind::NonHyperbolic, os.str());
      }
      // Deviator source over the group's old extent.
      const double xL = std::max(grid_.face(i0), oL), xR = std::min(grid_.face(i1 + 1), oR);
      double strain = 0;
      if (xR > xL) {
        double dudx = (uface[g + 1] - uface[g]) / (xR - xL);
        if (grid_.geometry == Geometry::Spherical) {
          const double rc = 0.5 * (xL + xR);
          const double ug = 0.5 * (uface[g] + uface[g + 1]);
          if (rc > 0) dudx -= ug / rc;
        }
        strain = dt * dudx;
      }
      const double Sadv = U.rhoS / U.rho;
      const double me = m.model.beta_e ? *m.model.beta_e / U.rho : m.model.mu_e;
      const double mp = m.model.beta_p ? *m.model.beta_p / U.rho : m.model.mu_p;
      U.rhoS = U.rho * evolve_deviator(Sadv, strain, me, mp, m.model);
      for (int i = i0; i <= i1; ++i) newU[i - a] = U;
    }
    for (int i = a; i <= b; ++i) {
      if (!(Vn[i - a] > 0)) continue;
      if (nr.first < 0) nr.first = i;
      nr.cells.push_back(newU[i - a]);
    }
    if (nr.cells.empty()) continue;
    for (std::size_t j = 0; j < nr.cells.size(); ++j) {
      try {
        const auto w = to_primitive(m, nr.cells[j]);
        sound_speed_squared(m.eos, w.rho, w.p);
      } catch (const Error& e) {
        std::ostringstream os;
        os << "region " << r << " cell " << nr.first + static_cast<int>(j) << " after step at t = " << time_
           << ": " << e.what();
        fail(e.kind(), os.str());
      }
    }
    next.push_back(std::move(nr));
  }
  regions_ = std::move(next);
  time_ += dt;
  return rep;
}

Totals Simulation::totals() const {
  Totals t;
  for (const auto& r : regions_)
    for (std::size_t j = 0; j < r.cells.size(); ++j) {
      const double v = fragment_volume(r, r.first + static_cast<int>(j));
      t.mass += v * r.cells[j].rho;
      t.momentum += v * r.cells[j].mom;
      t.energy += v * r.cells[j].E;
    }
  return t;
}

std::vector<CellRow> Simulation::snapshot() const {
  std::vector<CellRow> rows(grid_.n);
  for (int i = 0; i < grid_.n; ++i) {
    const double x = grid_.center(i);
    rows[i].x = x;
    for (const auto& r : regions_) {
      const bool last = &r == &regions_.back();
      if (!(x >= r.xl && (x < r.xr || (last && x <= r.xr)))) continue;
      int j = i - r.first;
      j = std::clamp(j, 0, static_cast<int>(r.cells.size()) - 1);
      const auto& m = materials_[r.material];
      const auto w = to_primitive(m, r.cells[j]);
      rows[i].rho = w.rho;
      rows[i].u = w.u;
      rows[i].p = w.p;
      rows[i].S = w.S;
      rows[i].q = w.p - w.S;
      rows[i].material = r.material;
      const double b = 2.0 * m.model.y_p / 3.0;
      const double s = std::abs(w.S);
      rows[i].phase = (std::isfinite(b) && s >= b * (1 - 1e-9)) ? Phase::Fluid
                      : s <= 2.0 * m.model.y_e / 3.0 * (1 + 1e-12) ? Phase::Elastic
                                                                   : Phase::Plastic;
      break;
    }
  }
  return rows;
}

}  // namespace mmrs
