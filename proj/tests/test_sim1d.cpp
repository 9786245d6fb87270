#include <doctest.h>

#include <cmath>

#include "mmrs/error.hpp"
#include "mmrs/sim1d.hpp"

using namespace mmrs;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const Material kGas{IdealGas{1.4}, DeviatoricModel::fluid()};
const Material kHeavy{StiffenedGas{4.4, 6e8}, DeviatoricModel::fluid()};

Totals inflow_adjusted(const Totals& t, const std::array<double, 3>& in) {
  return {t.mass - in[0], t.momentum - in[1], t.energy - in[2]};
}

}  // namespace

TEST_SUITE("sim1d") {
  TEST_CASE("conserved and primitive round trip") {
    const Material elastic{StiffenedGas{4.4, 6e6}, DeviatoricModel::elastic(1e10)};
    const Primitive w{1000, 12, 3e6, -4e5};
    const auto b = to_primitive(elastic, to_conserved(elastic, w));
    CHECK(rel(b.rho, w.rho) < 1e-14);
    CHECK(rel(b.u, w.u) < 1e-12);
    CHECK(rel(b.p, w.p) < 1e-9);
    CHECK(rel(b.S, w.S) < 1e-12);
  }

  TEST_CASE("edge flux is consistent") {
    const Primitive w{1.3, 0.7, 2.1, 0};
    const auto a = edge_flux(kGas, w, w), b = physical_flux(kGas, w);
    CHECK(rel(a.mass, b.mass) < 1e-14);
    CHECK(rel(a.mom, b.mom) < 1e-14);
    CHECK(rel(a.energy, b.energy) < 1e-14);
  }

  TEST_CASE("cfl step for a uniform gas") {
    Simulation s({0, 1, 50}, {kGas}, {{0, 0, 1, {1, 0.5, 1, 0}}});
    CHECK(rel(s.cfl_dt(0.4), 0.4 * 0.02 / (0.5 + std::sqrt(1.4))) < 1e-14);
    CHECK_THROWS_AS(s.cfl_dt(1.5), Error);
  }

  TEST_CASE("signal speed adds the elastic term") {
    const Material m{StiffenedGas{4.4, 6e6}, DeviatoricModel::elastic(1e10)};
    const double c2 = 4.4 * (1e5 + 6e6) / 1000;
    CHECK(rel(signal_speed(m, {1000, -3, 1e5, 0}), 3 + std::sqrt(c2 + 4 * 1e10 / 3 / 1000)) < 1e-14);
  }

  TEST_CASE("uniform state is preserved") {
    Simulation s({0, 1, 40}, {kGas, kGas}, {{0, 0, 0.43, {1, 0.2, 1, 0}}, {1, 0.43, 1, {1, 0.2, 1, 0}}});
    for (int i = 0; i < 20; ++i) s.step(0.4);
    for (const auto& r : s.snapshot()) {
      CHECK(std::abs(r.rho - 1) < 1e-12);
      CHECK(std::abs(r.u - 0.2) < 1e-12);
      CHECK(std::abs(r.p - 1) < 1e-12);
    }
    CHECK(std::abs(s.track().x[0] - (0.43 + 0.2 * s.time())) < 1e-12);
  }

  TEST_CASE("two-medium run conserves up to boundary fluxes") {
    Simulation s({0, 1, 100}, {kHeavy, kGas},
                 {{0, 0, 0.5, {1000, 0, 1e9, 0}}, {1, 0.5, 1, {50, 0, 1e5, 0}}}, Boundary::Wall,
                 Boundary::Outflow);
    for (int i = 0; i < 50; ++i) {
      const auto before = s.totals();
      const auto rep = s.step(0.4);
      const auto after = inflow_adjusted(s.totals(), rep.boundary_inflow);
      CHECK(rel(after.mass, before.mass) <= 1e-12);
      CHECK(std::abs(after.momentum - before.momentum) <= 1e-12 * (std::abs(before.momentum) + before.mass * 100));
      CHECK(rel(after.energy, before.energy) <= 1e-12);
    }
  }

  TEST_CASE("spherical static state stays at rest") {
    Grid1D g{0, 1, 50, Geometry::Spherical};
    Simulation s(g, {kHeavy}, {{0, 0, 1, {1000, 0, 1e5, 0}}}, Boundary::Wall, Boundary::Wall);
    for (int i = 0; i < 200; ++i) s.step(0.4);
    for (const auto& r : s.snapshot()) CHECK(std::abs(r.u) < 1e-12);
  }

  TEST_CASE("spherical momentum source") {
    CHECK(spherical_momentum_source(2.0, 1.0, 1.0, 3.0) == doctest::Approx(2.5 * 8));
  }

  TEST_CASE("deviator evolution by hand") {
    const auto m = DeviatoricModel::perfect_elastoplastic(8.53e5, 6.5e3);
    // elastic increment
    CHECK(rel(evolve_deviator(0, 1e-4, 8.53e5, 0, m), 4 * 8.53e5 / 3 * 1e-4) < 1e-14);
    // crosses 2Y/3 and sticks there
    CHECK(rel(evolve_deviator(0, 1e-2, 8.53e5, 0, m), 2 * 6.5e3 / 3) < 1e-14);
    // unloading from the yield surface is elastic
    const double a = 2 * 6.5e3 / 3;
    CHECK(rel(evolve_deviator(a, -1e-3, 8.53e5, 0, m), a - 4 * 8.53e5 / 3 * 1e-3) < 1e-12);
    // hydro: elastic to 2YE/3, then plastic rate, capped at 2YP/3
    const auto h = DeviatoricModel::hydro_elastoplastic(8.53e5, 4.265e5, 6.5e3, 9.75e3);
    const double e1 = a / (4 * 8.53e5 / 3);
    const double s2 = evolve_deviator(0, e1 + 1e-3, 8.53e5, 4.265e5, h);
    CHECK(rel(s2, a + 4 * 4.265e5 / 3 * 1e-3) < 1e-12);
    CHECK(rel(evolve_deviator(0, 1.0, 8.53e5, 4.265e5, h), 2 * 9.75e3 / 3) < 1e-14);
  }

  TEST_CASE("interfaces that cross are a topology error") {
    InterfaceTrack t{{0.4, 0.5}, {0, 1}, {1, 0}};
    CHECK_THROWS_AS(advance_interface(t, {1.0, -1.0}, 0.1), Error);
    const auto moved = advance_interface(t, {1.0, 1.0}, 0.01);
    CHECK(moved.x[0] == doctest::Approx(0.41));
  }

  TEST_CASE("region validation") {
    CHECK_THROWS_AS(Simulation({0, 1, 10}, {kGas}, {{0, 0, 0.6, {1, 0, 1, 0}}, {0, 0.5, 1, {1, 0, 1, 0}}}), Error);
    CHECK_THROWS_AS(Simulation({0, 1, 10}, {kGas}, {{0, 0, 0.5, {1, 0, 1, 0}}}), Error);
    CHECK_THROWS_AS(Simulation({0, 1, 10}, {kGas}, {{0, 0, 1, {-1, 0, 1, 0}}}), Error);
    RegionInit bad{0, 0.55, 1, {1, 0, 1, 0}, true};
    CHECK_THROWS_AS(Simulation({0, 1, 10}, {kGas}, {{0, 0, 0.55, {1, 0, 1, 0}}, bad}), Error);
  }
}
