#include <doctest.h>

#include <cmath>

#include "mmrs/eos.hpp"
#include "mmrs/error.hpp"

using namespace mmrs;

namespace {

const Jwl kTnt{3.712e11, 3.230e9, 0.30, 4.15, 0.95, 1630};
const Polynomial kWater{2.20e9, 9.54e9, 1.45e10, 0.28, 0.28, 2.20e9, 0, 1000};
const Murnaghan kSteel{2.225e6, 3.7, 7.8, 1.0};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Central differences of G and h at relative step 1e-6.
void check_fd(const EosParams& e, double rho) {
  const double d = rho * 1e-6;
  const auto k = coefficients(e, rho), kp = coefficients(e, rho + d), km = coefficients(e, rho - d);
  auto close = [&](double got, double fd, double scale) {
    CHECK(std::abs(got - fd) <= 1e-5 * std::max(std::abs(fd), scale));
  };
  const double hs = std::abs(k.h) + std::abs(k.dh) * rho + 1.0;
  close(k.dG, (kp.G - km.G) / (2 * d), std::abs(k.G) / rho + 1e-30);
  close(k.d2G, (kp.dG - km.dG) / (2 * d), std::abs(k.G) / (rho * rho) + 1e-30);
  close(k.dh, (kp.h - km.h) / (2 * d), hs / rho);
  close(k.d2h, (kp.dh - km.dh) / (2 * d), hs / (rho * rho));
}

}  // namespace

TEST_SUITE("eos") {
  TEST_CASE("coefficients: direct values") {
    auto k = coefficients(IdealGas{1.4}, 1.0);
    CHECK(k.G == doctest::Approx(0.4));
    CHECK(k.h == 0);
    k = coefficients(StiffenedGas{4.4, 6e6}, 123.0);
    CHECK(k.G == doctest::Approx(3.4));
    CHECK(k.h == doctest::Approx(-2.64e7));
    CHECK(k.dG == 0);
    CHECK(k.d2G == 0);
    CHECK_THROWS_AS(coefficients(IdealGas{1.4}, 0.0), Error);
    CHECK_THROWS_AS(coefficients(IdealGas{1.4}, -1.0), Error);
  }

  TEST_CASE("coefficients: derivatives match central differences") {
    for (double r : {1200.0, 1630.0, 2000.0, 3000.0}) check_fd(kTnt, r);
    for (double r : {700.0, 900.0, 1100.0, 1500.0}) check_fd(kWater, r);
    for (double r : {7.0, 7.8, 8.5}) check_fd(kSteel, r);
    check_fd(StiffenedGas{4.4, 6e6}, 1000.0);
  }

  TEST_CASE("murnaghan is barotropic") {
    const auto k = coefficients(kSteel, 7.8);
    CHECK(k.G == 0);
    CHECK(k.h == doctest::Approx(1.0));
    CHECK(pressure(kSteel, 7.9, 1e9) == doctest::Approx(coefficients(kSteel, 7.9).h));
    CHECK_THROWS_AS(internal_energy(kSteel, 7.8, 1.0), Error);
    // c^2 = K/rho0 at rho0, and equals h'
    CHECK(sound_speed_squared(kSteel, 7.8, 1.0) == doctest::Approx(2.225e6 / 7.8).epsilon(1e-12));
  }

  TEST_CASE("pressure and internal energy") {
    CHECK(pressure(IdealGas{1.4}, 1.0, 2.5) == doctest::Approx(1.0));
    CHECK(internal_energy(IdealGas{1.4}, 1.0, 1.0) == doctest::Approx(2.5));
    const StiffenedGas sg{4.4, 6e6};
    CHECK(pressure(sg, 1000.0, 7794.117647) == doctest::Approx(1e5).epsilon(1e-8));
    CHECK(internal_energy(sg, 1000.0, 1e5) == doctest::Approx(7794.117647).epsilon(1e-9));
    const double e = internal_energy(kTnt, 1630, 8.3e9);
    CHECK(rel(pressure(kTnt, 1630, e), 8.3e9) < 1e-12);
    // well scaled: p comparable to |h| on either branch
    for (auto [r, p] : {std::pair{1000.0, 1e5}, {600.0, 2e9}, {1400.0, 5e9}}) {
      const double ew = internal_energy(kWater, r, p);
      CHECK(rel(pressure(kWater, r, ew), p) < 1e-12);
    }
  }

  TEST_CASE("sound speed") {
    CHECK(sound_speed_squared(IdealGas{1.4}, 1.0, 1.0) == doctest::Approx(1.4));
    CHECK(sound_speed_squared(StiffenedGas{4.4, 6e6}, 1000.0, 1e5) == doctest::Approx(26840.0));
    CHECK_THROWS_AS(sound_speed_squared(StiffenedGas{4.4, 6e6}, 1000.0, -7e6), Error);
    try {
      sound_speed_squared(StiffenedGas{4.4, 6e6}, 1000.0, -7e6);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonHyperbolic);
    }
  }

  TEST_CASE("sound speed against a numerically integrated isentrope") {
    // de/drho = p/rho^2 with classic RK4, then a central difference of p.
    for (const EosParams& e : {EosParams(kTnt), EosParams(kWater), EosParams(StiffenedGas{4.4, 6e6})}) {
      // water sampled away from its branch point at rho0
      const double rho = e.name() == std::string("jwl") ? 1630.0 : 1100.0;
      const double p0 = e.name() == std::string("jwl") ? 8.3e9 : 1e8;
      const double e0 = internal_energy(e, rho, p0);
      auto step = [&](double r, double en, double dr) {
        auto f = [&](double rr, double ee) { return pressure(e, rr, ee) / (rr * rr); };
        const int n = 200;
        const double h = dr / n;
        for (int i = 0; i < n; ++i) {
          const double k1 = f(r, en), k2 = f(r + h / 2, en + h / 2 * k1), k3 = f(r + h / 2, en + h / 2 * k2),
                       k4 = f(r + h, en + h * k3);
          en += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
          r += h;
        }
        return en;
      };
      const double d = rho * 1e-4;
      const double pp = pressure(e, rho + d, step(rho, e0, d));
      const double pm = pressure(e, rho - d, step(rho, e0, -d));
      CHECK(rel(sound_speed_squared(e, rho, p0), (pp - pm) / (2 * d)) < 1e-4);
    }
  }

  TEST_CASE("polynomial branch continuity at rho0") {
    const double e = 1e5;
    const double lo = 1000 * (1 - 1e-14), hi = 1000 * (1 + 1e-14);
    CHECK(rel(pressure(kWater, lo, e), pressure(kWater, hi, e)) < 1e-10);
    CHECK(rel(sound_speed_squared(kWater, lo, pressure(kWater, lo, e)),
              sound_speed_squared(kWater, hi, pressure(kWater, hi, e))) < 1e-10);
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(EosParams(IdealGas{1.0}).validate(), Error);
    CHECK_THROWS_AS(EosParams(StiffenedGas{0.5, 1}).validate(), Error);
    CHECK_THROWS_AS(EosParams(Murnaghan{-1, 3.7, 7.8, 1}).validate(), Error);
    CHECK_THROWS_AS(EosParams(Jwl{3.712e11, 3.23e9, 0.3, 0.9, 0.95, 1630}).validate(), Error);
    Polynomial bad = kWater;
    bad.B0 = 3.0;
    CHECK_THROWS_AS(EosParams(bad).validate(), Error);
    CHECK_NOTHROW(EosParams(kTnt).validate());
    CHECK_NOTHROW(EosParams(kWater).validate());
  }

  TEST_CASE("convexity audit") {
    const auto ideal = validate_convexity(IdealGas{1.4}, 0.1, 10, 100);
    CHECK(ideal.all_hold());
    CHECK(validate_convexity(StiffenedGas{4.4, 6e6}, 1, 1e4, 100).all_hold());
    const auto jwl = validate_convexity(kTnt, 100, 5000, 400);
    REQUIRE(jwl.jwl_alpha);
    const double a = 3.230e9 * 0.95 * 0.95 / (3.712e11 * 4.15 * (4.15 - 0.95)) *
                     std::exp(((2 + 0.30) * (4.15 - 0.95) - 0.95) / 0.95);
    CHECK(rel(*jwl.jwl_alpha, a) < 1e-12);
    REQUIRE(jwl.jwl_rho_bound);
    CHECK(rel(*jwl.jwl_rho_bound, 4.15 * 1630 / (2 + 0.30 + a)) < 1e-12);
    for (const auto& r : jwl.c3.ranges)
      if (r.rho_hi <= *jwl.jwl_rho_bound) CHECK(r.holds);
    const auto poly = validate_convexity(kWater, 200, 3000, 100);
    REQUIRE(poly.poly_rho_bound);
    CHECK(*poly.poly_rho_bound == doctest::Approx(0.28 * 1000 / 2.28));
    REQUIRE(poly.poly_param_condition);
    CHECK(*poly.poly_param_condition);
  }
}
