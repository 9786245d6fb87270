#pragma once

#include <limits>
#include <optional>

#include "mmrs/eos.hpp"

namespace mmrs {

enum class Phase { Elastic, Plastic, Fluid };
const char* to_string(Phase p);
char phase_letter(Phase p);

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DeviatoricModel {
  double mu_e = 0, mu_p = 0;
  double y_e = 0, y_p = 0;
  std::optional<double> beta_e, beta_p;

  static DeviatoricModel fluid() { return {}; }
  static DeviatoricModel elastic(double mu) { return {mu, mu, kInf, kInf, {}, {}}; }
  static DeviatoricModel perfect_elastoplastic(double mu, double y) {
    return {mu, 0, y, kInf, {}, {}};
  }
  static DeviatoricModel hydro_elastoplastic(double mu_e, double mu_p, double y_e, double y_p) {
    return {mu_e, mu_p, y_e, y_p, {}, {}};
  }

  bool is_fluid() const;
  void validate() const;
};

// One side of a Riemann problem. S is the normal deviator S_nn.
struct SideState {
  double rho = 1, u = 0, p = 0, S = 0;
  double q() const { return p - S; }
};

struct Material {
  EosParams eos;
  DeviatoricModel model;
};

enum class LimitKind { ElasticCompression, ElasticTension, PlasticCompression, PlasticTension };
const char* to_string(LimitKind k);

struct LimitState {
  double rho = 0, p = 0, S = 0, q = 0;
  LimitKind kind = LimitKind::ElasticCompression;
};

double beta(const DeviatoricModel& m, double rho_k, Phase phase);

// Under the uniaxial closure S = diag(S, -S/2, -S/2).
inline double effective_stress(double S) { return 1.5 * (S < 0 ? -S : S); }

Phase classify_phase(double s_eff, const DeviatoricModel& m);

double deviator_after_wave(double S_k, double beta, double rho_k, double rho);

struct LimitDensities {
  std::optional<double> compression, tension;
  bool degenerate = false;
};

// Density reached from (rho_k, S_k) along a jump with coefficient beta when S
// hits S_target. nullopt when unreachable.
std::optional<double> density_at_deviator(double S_k, double rho_k, double beta, double S_target);

LimitDensities elastic_limit_densities(const SideState& s, const DeviatoricModel& m);
LimitDensities elastic_limit_densities(const SideState& s, const DeviatoricModel& m, double beta_e);
// generating: the elastic-limit state. beta_p frozen from the original side.
LimitDensities plastic_limit_densities(const SideState& generating, const DeviatoricModel& m,
                                       double beta_p);

// Pressure on the Hugoniot through (rho_b, p_b) at density rho.
double hugoniot_pressure(const EosParams& eos, double rho_b, double p_b, double rho);

// Pressure on the isentrope through (rho_b, p_b) at density rho.
double isentrope_pressure(const EosParams& eos, double rho_b, double p_b, double rho,
                          double rtol = 1e-10);

// kind selects compression or tension and elastic or plastic. Plastic kinds
// chain from the elastic limit of the same direction.
LimitState limit_state(const SideState& s, const Material& mat, LimitKind kind);

}  // namespace mmrs
