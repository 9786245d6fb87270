#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace mmrs {

struct IdealGas {
  double gamma = 1.4;
};

struct StiffenedGas {
  double gamma = 4.4;
  double p_inf = 0.0;
};

// Barotropic: Gamma == 0, p = h(rho).
struct Murnaghan {
  double K = 0.0;
  double gamma = 0.0;
  double rho0 = 0.0;
  double p0 = 0.0;
};

struct Polynomial {
  double A1 = 0, A2 = 0, A3 = 0;
  double B0 = 0, B1 = 0;
  double T1 = 0, T2 = 0;
  double rho0 = 0;
};

struct Jwl {
  double A1 = 0, A2 = 0;
  double omega = 0, R1 = 0, R2 = 0;
  double rho0 = 0;
};

using EosVariant = std::variant<IdealGas, StiffenedGas, Murnaghan, Polynomial, Jwl>;

class EosParams {
 public:
  EosParams() = default;
  template <class T>
    requires std::is_constructible_v<EosVariant, T>
  EosParams(T v) : v_(std::move(v)) {}  // NOLINT(implicit)

  const EosVariant& variant() const { return v_; }
  const char* name() const;
  bool barotropic() const { return std::holds_alternative<Murnaghan>(v_); }

  // Throws Validation naming the offending parameter.
  void validate() const;

 private:
  EosVariant v_ = IdealGas{};
};

struct EosCoefficients {
  double G = 0, dG = 0, d2G = 0;
  double h = 0, dh = 0, d2h = 0;
};

EosCoefficients coefficients(const EosParams& eos, double rho);
double pressure(const EosParams& eos, double rho, double e);
double internal_energy(const EosParams& eos, double rho, double p);

// c^2 without the positivity check. May be <= 0.
double sound_speed_squared_raw(const EosParams& eos, double rho, double p);
double sound_speed_squared_raw(const EosCoefficients& k, double rho, double p);
// Throws NonHyperbolic when c^2 <= 0.
double sound_speed_squared(const EosParams& eos, double rho, double p);

// Limit of Gamma as rho -> infinity.
double gamma_infinity(const EosParams& eos);

struct ConditionRange {
  double rho_lo = 0, rho_hi = 0;
  bool holds = true;
};

struct ConditionReport {
  std::string name;
  std::vector<ConditionRange> ranges;
  bool all_hold() const;
};

struct ConvexityReport {
  ConditionReport c1, c2, c3;
  std::optional<double> jwl_alpha;
  std::optional<double> jwl_rho_bound;       // C3 sufficient: rho <= bound
  std::optional<double> poly_rho_bound;      // C2: rho >= bound
  std::optional<bool> poly_param_condition;  // B1 <= B0 <= B1 + 2
  bool all_hold() const { return c1.all_hold() && c2.all_hold() && c3.all_hold(); }
  std::string to_text() const;
};

ConvexityReport validate_convexity(const EosParams& eos, double rho_lo, double rho_hi,
                                   int n_samples);

}  // namespace mmrs
