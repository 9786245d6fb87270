#pragma once

// Adaptive Runge-Kutta-Fehlberg 4(5).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

namespace mmrs {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0;  // signed; 0 means (t1 - t0)/64
  double h_min = 1e-30;
  int max_steps = 200000;
};

enum class OdeStatus { Ok, StepUnderflow, InvalidState, MaxSteps };

template <std::size_t N>
struct OdeResult {
  double t = 0;
  std::array<double, N> y{};
  std::array<double, N> err{};  // accumulated embedded estimates
  int steps = 0;
  OdeStatus status = OdeStatus::Ok;
};

// rhs(t, y) returns std::optional<std::array<double,N>>; nullopt marks an
// inadmissible state and forces a smaller step.
template <std::size_t N, class Rhs>
OdeResult<N> rkf45(Rhs&& rhs, double t0, double t1, const std::array<double, N>& y0,
                   const OdeOptions& o) {
  using V = std::array<double, N>;
  OdeResult<N> r;
  r.t = t0;
  r.y = y0;
  if (t1 == t0) return r;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  double h = o.h_init != 0 ? std::abs(o.h_init) : std::abs(t1 - t0) / 64.0;
  const double hmin = std::max(o.h_min, 0.0);

  auto k1o = rhs(t0, y0);
  if (!k1o) {
    r.status = OdeStatus::InvalidState;
    return r;
  }
  V k1 = *k1o;

  auto axpy = [](const V& y, double h, std::initializer_list<std::pair<double, const V*>> terms) {
    V out = y;
    for (const auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
    return out;
  };

  while (dir * (t1 - r.t) > 0) {
    if (r.steps >= o.max_steps) {
      r.status = OdeStatus::MaxSteps;
      return r;
    }
    bool last = false;
    if (h >= std::abs(t1 - r.t)) {
      h = std::abs(t1 - r.t);
      last = true;
    }
    const double hs = dir * h;
    const double t = r.t;
    const V& y = r.y;
    std::optional<V> k2, k3, k4, k5, k6;
    k2 = rhs(t + hs / 4, axpy(y, hs, {{1.0 / 4, &k1}}));
    if (k2) k3 = rhs(t + 3 * hs / 8, axpy(y, hs, {{3.0 / 32, &k1}, {9.0 / 32, &*k2}}));
    if (k3)
      k4 = rhs(t + 12 * hs / 13,
               axpy(y, hs, {{1932.0 / 2197, &k1}, {-7200.0 / 2197, &*k2}, {7296.0 / 2197, &*k3}}));
    if (k4)
      k5 = rhs(t + hs, axpy(y, hs,
                            {{439.0 / 216, &k1}, {-8.0, &*k2}, {3680.0 / 513, &*k3},
                             {-845.0 / 4104, &*k4}}));
    if (k5)
      k6 = rhs(t + hs / 2, axpy(y, hs,
                                {{-8.0 / 27, &k1}, {2.0, &*k2}, {-3544.0 / 2565, &*k3},
                                 {1859.0 / 4104, &*k4}, {-11.0 / 40, &*k5}}));
    std::optional<V> k7;
    V y5{}, e{};
    double ratio = 0;
    if (k6) {
      V y4 = axpy(y, hs, {{25.0 / 216, &k1}, {1408.0 / 2565, &*k3}, {2197.0 / 4104, &*k4},
                          {-1.0 / 5, &*k5}});
      y5 = axpy(y, hs, {{16.0 / 135, &k1}, {6656.0 / 12825, &*k3}, {28561.0 / 56430, &*k4},
                        {-9.0 / 50, &*k5}, {2.0 / 55, &*k6}});
      for (std::size_t i = 0; i < N; ++i) {
        e[i] = std::abs(y5[i] - y4[i]);
        const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        ratio = std::max(ratio, e[i] / sc);
      }
      if (!std::isfinite(ratio)) ratio = 1e300;
      if (ratio <= 1.0) {
        k7 = rhs(t + hs, y5);
        if (!k7) ratio = 1e300;
      }
    } else {
      ratio = 1e300;
    }
    if (ratio <= 1.0) {
      r.t = last ? t1 : t + hs;
      r.y = y5;
      for (std::size_t i = 0; i < N; ++i) r.err[i] += e[i];
      ++r.steps;
      k1 = *k7;
      const double fac = ratio > 0 ? 0.84 * std::pow(ratio, -0.25) : 4.0;
      h *= std::clamp(fac, 0.1, 4.0);
    } else {
      const double fac = ratio < 1e299 ? 0.84 * std::pow(ratio, -0.25) : 0.25;
      h *= std::clamp(fac, 0.1, 0.5);
      if (h < hmin) {
        r.status = ratio < 1e299 ? OdeStatus::StepUnderflow : OdeStatus::InvalidState;
        return r;
      }
    }
  }
  return r;
}

}  // namespace mmrs
