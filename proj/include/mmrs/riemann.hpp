#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mmrs/wavecurves.hpp"

namespace mmrs {

struct RiemannInput {
  SideState left, right;
  Material left_material, right_material;
  double tolerance = 1e-10;
  int max_iters = 50;
};

enum class WaveType { Shock, Rarefaction };
const char* to_string(WaveType t);

struct FanState {
  double rho = 0, u = 0, p = 0, S = 0;
};

struct Wave {
  WaveType type = WaveType::Shock;
  Phase phase = Phase::Elastic;
  double head = 0, tail = 0;  // equal for shocks
  FanState ahead, behind;
  int segment = 0;
};

struct StarSide {
  double rho = 0, p = 0, S = 0;
  Phase phase = Phase::Elastic;
  // Leading (outermost) first.
  std::vector<Wave> waves;
};

struct StarState {
  double q = 0, u = 0;
  StarSide left, right;
  int iterations = 0;
  double residual = 0;            // |f(q*)| in m/s
  double residual_stress = 0;     // |f(q*)| / f'(q*)
  double u_last_iterate = 0;
  double branch_rtol = 0;
  std::vector<double> trace;
  std::shared_ptr<const WaveCurve> left_curve, right_curve;
};

struct VacuumCheck {
  bool admissible = true;
  double margin = 0;
  double q_min = 0;
  std::string diagnostic;
};

VacuumCheck vacuum_check(const RiemannInput& in);
VacuumCheck vacuum_check(const WaveCurve& l, const WaveCurve& r);

double initial_guess(const RiemannInput& in);

StarState solve(const RiemannInput& in);

struct FanSample {
  double xi = 0;
  double rho = 0, u = 0, p = 0, S = 0;
  int material = 0;  // 0 left, 1 right
};

FanSample sample_fan(const StarState& star, double xi);

std::string describe(const StarState& star);

}  // namespace mmrs
