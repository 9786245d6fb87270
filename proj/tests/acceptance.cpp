// One PASS/FAIL line per acceptance criterion, with the measured numbers.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmrs/config.hpp"
#include "mmrs/error.hpp"
#include "oracles/exact_stiffened.hpp"

using namespace mmrs;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& why) {
    if (!ok) {
      if (pass) detail << " first failure: " << why << ";";
      pass = false;
    }
  }
};

int failures = 0;

void report(int n, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.detail.precision(4);
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  if (!o.pass) ++failures;
  std::printf("criterion %d: %s:%s\n", n, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
  std::fflush(stdout);
}

void run_to(Simulation& s, double t_end, double cfl) {
  while (s.time() < t_end * (1 - 1e-14)) s.step(cfl, t_end - s.time());
}

// q at which f changes sign, by bisection on branch evaluations only.
double bisect_q(const RiemannInput& in, double lo, double hi) {
  const WaveCurve l(in.left, in.left_material), r(in.right, in.right_material);
  auto f = [&](double q) { return l.evaluate(q).F + r.evaluate(q).F + in.right.u - in.left.u; };
  for (int i = 0; i < 300 && hi - lo > 1e-15 * std::abs(hi); ++i) {
    const double m = 0.5 * (lo + hi);
    (f(m) < 0 ? lo : hi) = m;
  }
  return 0.5 * (lo + hi);
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = preset("gas-gas");
  const oracle::Prim l{1, 0, 1000}, r{1, 0, 0.01};
  const oracle::Gas g{1.4, 0};
  const auto ex = oracle::solve(g, l, g, r);
  const auto s = solve(riemann_input(cfg));
  const double eq = rel(s.q, ex.p), eu = rel(s.u, ex.u);
  o.detail << " q* rel err " << eq << ", u* rel err " << eu;
  o.require(eq <= 1e-6 && eu <= 1e-6, "star state");

  auto sim = make_simulation(cfg);
  run_to(sim, cfg.t_end, cfg.cfl);
  double num = 0, den = 0;
  for (const auto& row : sim.snapshot()) {
    const double xi = (row.x - 0.5) / cfg.t_end;
    const double re = oracle::sample(g, l, g, r, ex, xi).rho;
    num += std::abs(row.rho - re);
    den += std::abs(re);
  }
  const double l1 = num / den;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.detail << ", L1 density rel err " << l1 << " (bound 0.02), runtime " << secs << " s";
  o.require(l1 <= 0.02, "L1 density error");
  o.require(secs < 10, "runtime");
}

struct MaterialCase {
  std::string label;
  SideState state;
  Material material;
};

std::vector<MaterialCase> hugoniot_materials() {
  auto from = [](const std::string& p, std::size_t region) {
    const auto c = preset(p);
    const auto& r = c.regions[region];
    const Material& m = c.materials[c.material_index(r.material)].material;
    SideState s{r.state.rho, r.state.u, r.state.p, r.state.S};
    if (m.eos.barotropic()) s.p = coefficients(m.eos, s.rho).h;
    return MaterialCase{p + "/" + r.material, s, m};
  };
  return {from("gas-gas", 0),           from("gavrilyuk-elastic", 0),     from("jwl-polynomial", 0),
          from("jwl-polynomial", 1),    from("perfect-elastoplastic", 0), from("hydro-elastoplastic", 0),
          from("jwl-elastic", 1)};
}

void criterion2(Outcome& o) {
  int total = 0, skipped_concavity = 0, min_points = 1 << 30;
  for (const auto& mc : hugoniot_materials()) {
    const WaveCurve c(mc.state, mc.material);
    for (std::size_t seg = 0; seg < c.compression().size(); ++seg) {
      const Segment& g = c.compression()[seg];
      const double rb = g.base.rho, rmax = g.rho_max;
      const double scale = std::abs(g.base.q) + rb * c.sound_speed2(rb, g.base.p);
      const double qhi = g.end ? g.end->q : g.base.q + 100 * scale;
      int points = 0;
      for (int iq = 1; iq <= 20; ++iq) {
        const double q = g.end ? g.base.q + (qhi - g.base.q) * iq / 20.0
                               : g.base.q + scale * std::pow(10.0, -3 + 5.0 * iq / 20.0);
        const double pb = c.phi(seg, q, rb), pm = c.phi(seg, q, rmax);
        o.require(pb > 0, mc.label + " " + c.kind_label(seg) + " Phi(rho_base) > 0");
        o.require(pm < 0, mc.label + " " + c.kind_label(seg) + " Phi(rho_max) < 0");
        // admissible densities: hydrostatic pressure behind the jump stays hyperbolic
        auto admissible = [&](double r) { return c.sound_speed2(r, q + c.deviator(g, r)) > 0; };
        double radm = rmax;
        if (!admissible(rmax)) {
          double a = rb;
          for (int it = 0; it < 200 && radm - a > 1e-14 * radm; ++it) {
            const double mid = 0.5 * (a + radm);
            (admissible(mid) ? a : radm) = mid;
          }
          radm = a;
        }
        for (int ir = 1; ir < 20; ++ir) {
          const double r = rb + (radm - rb) * ir / 20.0;
          if (!admissible(r)) continue;
          ++points;
          o.require(c.phi_drho(seg, q, r) < 0, mc.label + " " + c.kind_label(seg) + " dPhi/drho < 0");
          if (!c.concavity_condition(seg, r)) {
            ++skipped_concavity;
            continue;
          }
          const double d = 1e-3 * (radm - rb);
          const double a = c.phi(seg, q, r - d), m = c.phi(seg, q, r), b = c.phi(seg, q, r + d);
          // each value carries rounding of its largest term, about |slope| * rho
          const double round =
              64 * 2.2e-16 * (std::abs(a) + 2 * std::abs(m) + std::abs(b) + 4 * std::abs(c.phi_drho(seg, q, r)) * r);
          if (a - 2 * m + b > round && std::getenv("ACCEPTANCE_VERBOSE"))
            std::printf("  %s seg %zu q %.6g rho %.6g d2 %.3g round %.3g phi %.3g\n", mc.label.c_str(), seg, q, r,
                        a - 2 * m + b, round, m);
          o.require(a - 2 * m + b <= round, mc.label + " " + c.kind_label(seg) + " second difference <= 0");
        }
      }
      o.require(points >= 200, mc.label + " " + c.kind_label(seg) + " fewer than 200 admissible points");
      total += points;
      min_points = std::min(min_points, points);
    }
  }
  o.detail << " " << total << " admissible points over 7 materials (min per kind " << min_points << "), concavity gate skipped " << skipped_concavity;
}

void criterion3(Outcome& o) {
  int samples = 0;
  double worst = 0;
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name);
    const auto in = riemann_input(cfg);
    const auto star = solve(in);
    for (int side = 0; side < 2; ++side) {
      const WaveCurve& c = side == 0 ? *star.left_curve : *star.right_curve;
      const double scale = std::max({std::abs(c.q_k()), std::abs(star.q), 1.0});
      const double qmin = c.q_min();
      const double lo = std::isfinite(qmin) ? qmin + 0.05 * (c.q_k() - qmin) : c.q_k() - scale;
      const double hi = std::max(c.q_k(), star.q) + scale;
      std::vector<double> kinks{c.q_k()};
      for (const auto& s : c.compression())
        if (s.end) kinks.push_back(s.end->q);
      for (const auto& s : c.tension())
        if (s.end) kinks.push_back(s.end->q);
      const double h = 1e-5 * (hi - lo);
      for (int i = 0; i < 100; ++i) {
        double q = lo + (hi - lo) * (i + 0.5) / 100.0;
        for (double k : kinks)
          if (std::abs(q - k) < 2 * h) q = k + 2 * h;  // same count, off the kink
        const auto ev = c.evaluate(q, 1e-13);
        const double fd = (c.evaluate(q + h, 1e-13).F - c.evaluate(q - h, 1e-13).F) / (2 * h);
        ++samples;
        o.require(fd > 0, name + " F not increasing");
        const double e = rel(ev.dF, fd);
        worst = std::max(worst, e);
        o.require(e <= 1e-4, name + " F' vs finite difference");
      }
    }
  }
  o.detail << " " << samples << " samples, worst F' rel err " << worst;
}

void criterion4(Outcome& o) {
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0, worst_oracle = 0;
  for (int k = 0; k < 20; ++k) {
    auto pick_eos = [&]() -> std::pair<EosParams, oracle::Gas> {
      const double g = 1.1 + 3.5 * U(rng);
      if (U(rng) < 0.5) return {IdealGas{g}, {g, 0}};
      const double pi = std::pow(10.0, 3 + 5 * U(rng));
      return {StiffenedGas{g, pi}, {g, pi}};
    };
    const auto [el, gl] = pick_eos();
    const auto [er, gr] = pick_eos();
    const oracle::Prim l{std::pow(10.0, -1 + 4 * U(rng)), 20 * (U(rng) - 0.5), std::pow(10.0, 2 + 5 * U(rng))};
    const oracle::Prim r{std::pow(10.0, -1 + 4 * U(rng)), 20 * (U(rng) - 0.5), std::pow(10.0, 2 + 5 * U(rng))};
    RiemannInput fluid;
    fluid.left = {l.rho, l.u, l.p, 0};
    fluid.right = {r.rho, r.u, r.p, 0};
    fluid.left_material = {el, DeviatoricModel::fluid()};
    fluid.right_material = {er, DeviatoricModel::fluid()};
    RiemannInput degenerate = fluid;
    const DeviatoricModel zero = DeviatoricModel::hydro_elastoplastic(0, 0, kInf, kInf);
    degenerate.left_material.model = zero;
    degenerate.right_material.model = zero;
    const auto a = solve(fluid), b = solve(degenerate);
    const double e = std::max(rel(b.q, a.q), std::abs(b.u - a.u) / std::max(std::abs(a.u), 1e-300));
    worst = std::max(worst, e);
    o.require(rel(b.q, a.q) <= 1e-12, "q* differs");
    o.require(rel(b.u, a.u) <= 1e-12 || std::abs(b.u - a.u) <= 1e-12 * (std::abs(l.u) + std::abs(r.u)),
              "u* differs");
    const auto ex = oracle::solve(gl, l, gr, r);
    worst_oracle = std::max(worst_oracle, rel(a.q, ex.p));
  }
  o.detail << " 20 random problems, worst degenerate vs fluid rel diff " << worst
           << " (exact solver q* rel err up to " << worst_oracle << ")";
}

void criterion5(Outcome& o) {
  const auto cfg = preset("gavrilyuk-elastic");
  const auto in = riemann_input(cfg);
  const auto s = solve(in);
  const double qb = bisect_q(in, std::max(in.left.q(), in.right.q()), 1e12);
  o.detail << " |u*| = " << std::abs(s.u) << ", q* = " << s.q << ", bisection rel err " << rel(s.q, qb);
  o.require(std::abs(s.u) <= 1e-9 * 100, "|u*|");
  o.require(rel(s.q, qb) <= 1e-8, "bisection oracle");
  for (int side = 0; side < 2; ++side) {
    const WaveCurve& c = side == 0 ? *s.left_curve : *s.right_curve;
    const auto& end = c.compression()[0].end;
    const double qC = end ? end->q : kInf;
    const std::size_t want = s.q <= qC ? 1 : 2;
    const std::size_t got = (side == 0 ? s.left : s.right).waves.size();
    o.detail << (side == 0 ? ", q_C left " : ", right ") << qC << " waves " << got;
    o.require(got == want, "wave count");
  }
}

void criterion6(Outcome& o) {
  for (const std::string name : {"perfect-elastoplastic", "hydro-elastoplastic"}) {
    const auto s = solve(riemann_input(preset(name)));
    o.detail << " " << name << ": q* = " << s.q;
    for (int side = 0; side < 2; ++side) {
      const WaveCurve& c = side == 0 ? *s.left_curve : *s.right_curve;
      const auto& waves = (side == 0 ? s.left : s.right).waves;
      std::size_t want = 1;
      for (const auto& g : c.compression())
        if (g.end && s.q > g.end->q) ++want;
      o.detail << (side == 0 ? " left " : " right ") << waves.size() << "/" << want;
      o.require(waves.size() == want, name + " wave count");
      o.require(want >= 2, name + " q* below the elastic limit");
      if (name == "hydro-elastoplastic") o.require(want == 3, name + " q* below the plastic limit");
      for (std::size_t k = 0; k + 1 < waves.size(); ++k) {
        const bool ordered = side == 0 ? waves[k].head < waves[k + 1].head : waves[k].head > waves[k + 1].head;
        o.require(ordered, name + " leading wave not faster");
        o.require(waves[k].type == WaveType::Shock, name + " expected shocks");
      }
    }
    o.detail << ";";
  }
}

void criterion7(Outcome& o) {
  struct Case {
    double gamma, rho, p;
  };
  double worst = 0;
  for (const Case c : {Case{1.4, 1, 1}, Case{1.67, 0.3, 20}, Case{3.0, 5, 0.01}}) {
    const double cs = std::sqrt(c.gamma * c.p / c.rho);
    const double crit = 2 * cs / (c.gamma - 1);  // per side
    auto accepted = [&](double u) {
      RiemannInput in;
      in.left = {c.rho, -u, c.p, 0};
      in.right = {c.rho, u, c.p, 0};
      in.left_material = in.right_material = {IdealGas{c.gamma}, DeviatoricModel::fluid()};
      try {
        solve(in);
        return true;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Vacuum) return false;
        throw;
      }
    };
    double lo = 0.5 * crit, hi = 2 * crit;
    o.require(accepted(lo) && !accepted(hi), "bracket");
    while (hi - lo > 1e-7 * crit) {
      const double m = 0.5 * (lo + hi);
      (accepted(m) ? lo : hi) = m;
    }
    const double e = rel(0.5 * (lo + hi), crit);
    worst = std::max(worst, e);
    o.require(e <= 1e-6, "flip point");
  }
  o.detail << " 3 gases, worst flip point rel err " << worst;
}

void criterion8(Outcome& o) {
  double worst = 0;
  for (const std::string name : {"gas-gas", "jwl-polynomial", "gavrilyuk-elastic", "jwl-elastic"}) {
    auto sim = make_simulation(preset(name));
    for (int n = 0; n < 200; ++n) {
      const auto a = sim.totals();
      const auto rep = sim.step(0.4);
      const auto b = sim.totals();
      const double pscale = std::sqrt(2 * a.mass * a.energy);
      const double dm = std::abs(b.mass - rep.boundary_inflow[0] - a.mass) / a.mass;
      const double dp = std::abs(b.momentum - rep.boundary_inflow[1] - a.momentum) / (std::abs(a.momentum) + pscale);
      const double de = std::abs(b.energy - rep.boundary_inflow[2] - a.energy) / std::abs(a.energy);
      worst = std::max({worst, dm, dp, de});
      o.require(dm <= 1e-12 && dp <= 1e-12 && de <= 1e-12, name + " drift");
    }
  }
  o.detail << " worst per-step relative drift " << worst;

  // Same medium on both sides of a tracked interface that crosses cut cells.
  const Material gas{IdealGas{1.4}, DeviatoricModel::fluid()};
  const Grid1D grid{0, 1, 400};
  const Primitive far{2, 0.5, 1, 0}, base{1, 0.5, 1, 0};
  Simulation tracked(grid, {gas}, {{0, 0, 0.05, far}, {0, 0.05, 0.7031, base, true}, {0, 0.7031, 1, base}});
  Simulation single(grid, {gas}, {{0, 0, 0.05, far}, {0, 0.05, 1, base, true}});
  double linf = 0;
  for (int n = 0; n < 100; ++n) {
    const double dt = std::min(tracked.cfl_dt(0.4), single.cfl_dt(0.4));
    tracked.step(1.0, dt);
    single.step(1.0, dt);
  }
  const auto a = tracked.snapshot(), b = single.snapshot();
  for (std::size_t i = 0; i < a.size(); ++i)
    linf = std::max({linf, rel(a[i].rho, b[i].rho), rel(a[i].p, b[i].p),
                     std::abs(a[i].u - b[i].u) / std::abs(b[i].u)});
  o.detail << "; tracked vs single medium Linf rel " << linf << " with interface at "
           << tracked.track().x[0];
  o.require(linf <= 1e-8, "artificial interface");
}

// Volume-weighted L1 of density against a reference run on a grid nref = k * n.
double l1_against(const Simulation& s, const std::vector<CellRow>& ref, int nref) {
  const auto rows = s.snapshot();
  const int n = static_cast<int>(rows.size()), k = nref / n;
  const Grid1D& g = s.grid();
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    double m = 0, v = 0;
    for (int j = i * k; j < (i + 1) * k; ++j) {
      const double a = g.x0 + (g.x1 - g.x0) * j / nref, b = g.x0 + (g.x1 - g.x0) * (j + 1) / nref;
      const double vol = g.volume(a, b);
      m += ref[j].rho * vol;
      v += vol;
    }
    const double vol = g.cell_volume(i);
    num += std::abs(rows[i].rho - m / v) * vol;
    den += std::abs(m / v) * vol;
  }
  return num / den;
}

void criterion9(Outcome& o) {
  const Material water{StiffenedGas{4.4, 6e8}, DeviatoricModel::fluid()};
  Simulation rest({0, 1, 100, Geometry::Spherical}, {water}, {{0, 0, 1, {1000, 0, 1e5, 0}}}, Boundary::Wall,
                  Boundary::Wall);
  double umax = 0;
  for (int n = 0; n < 1000; ++n) rest.step(0.4);
  for (const auto& r : rest.snapshot()) umax = std::max(umax, std::abs(r.u));
  o.detail << " static drift max |u| " << umax << " m/s;";
  o.require(umax < 1e-12, "static state drift");

  const int nref = 10000;
  const std::vector<std::string> names{"spherical-jwl-stiffened", "spherical-jwl-polynomial"};
  std::vector<std::future<std::string>> jobs;
  for (const auto& name : names)
    jobs.push_back(std::async(std::launch::async, [name, nref] {
      std::ostringstream os;
      os.precision(4);
      auto cfg = preset(name);
      cfg.cells = nref;
      auto ref = make_simulation(cfg);
      run_to(ref, cfg.t_end, cfg.cfl);
      const auto rows = ref.snapshot();
      std::vector<double> err;
      for (int n : {100, 200, 400}) {
        cfg.cells = n;
        auto s = make_simulation(cfg);
        run_to(s, cfg.t_end, cfg.cfl);
        err.push_back(l1_against(s, rows, nref));
      }
      const double r1 = err[0] / err[1], r2 = err[1] / err[2];
      os << " " << name << " L1 100/200/400 = " << err[0] << "/" << err[1] << "/" << err[2] << " ratios " << r1
         << ", " << r2 << (r1 >= 1.5 && r2 >= 1.5 ? "" : " [below 1.5]") << ";";
      return os.str();
    }));
  for (auto& j : jobs) {
    const std::string line = j.get();
    o.detail << line;
    o.require(line.find("[below 1.5]") == std::string::npos, "convergence ratio");
  }
}

void criterion10(Outcome& o) {
  int worst_iters = 0;
  double worst_ratio = 0;
  for (const auto& name : preset_names()) {
    auto in = riemann_input(preset(name));
    in.tolerance = 1e-10;
    const auto s = solve(in);
    const double pscale = std::max({std::abs(in.left.q()), std::abs(in.right.q()), 1.0});
    const double bound = 10 * in.tolerance * (std::abs(s.q) + pscale);
    worst_iters = std::max(worst_iters, s.iterations);
    worst_ratio = std::max(worst_ratio, s.residual_stress / bound);
    o.require(s.iterations <= 30, name + " iterations");
    o.require(s.residual_stress <= bound, name + " residual");
  }
  o.detail << " " << preset_names().size() << " presets, max iterations " << worst_iters
           << ", worst residual / bound " << worst_ratio;
}

}  // namespace

int main() {
  report(1, criterion1);
  report(2, criterion2);
  report(3, criterion3);
  report(4, criterion4);
  report(5, criterion5);
  report(6, criterion6);
  report(7, criterion7);
  report(8, criterion8);
  if (!std::getenv("ACCEPTANCE_SKIP_9")) report(9, criterion9);
  report(10, criterion10);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
