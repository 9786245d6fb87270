#include "mmrs/eos.hpp"

#include <cmath>
#include <sstream>

#include "mmrs/error.hpp"

namespace mmrs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* eos, const char* field, const char* what) {
  if (!ok) fail(ErrorKind::Validation, std::string("eos ") + eos + ": " + field + " " + what);
}

bool finite(double x) { return std::isfinite(x); }

// A (1 - w rho/(R rho0)) exp(-R rho0/rho) and derivatives.
void jwl_term(double A, double R, double w, double rho0, double rho, double& h, double& dh,
              double& d2h) {
  const double ex = std::exp(-R * rho0 / rho);
  h = A * (1.0 - w * rho / (R * rho0)) * ex;
  const double g = R * rho0 / (rho * rho) - w / rho - w / (R * rho0);
  const double dg = -2.0 * R * rho0 / (rho * rho * rho) + w / (rho * rho);
  dh = A * ex * g;
  d2h = A * ex * (g * R * rho0 / (rho * rho) + dg);
}

}  // namespace

const char* EosParams::name() const {
  return std::visit(overloaded{[](const IdealGas&) { return "ideal"; },
                               [](const StiffenedGas&) { return "stiffened"; },
                               [](const Murnaghan&) { return "murnaghan"; },
                               [](const Polynomial&) { return "polynomial"; },
                               [](const Jwl&) { return "jwl"; }},
                    v_);
}

void EosParams::validate() const {
  std::visit(
      overloaded{
          [](const IdealGas& g) { require(finite(g.gamma) && g.gamma > 1, "ideal", "gamma", "must be > 1"); },
          [](const StiffenedGas& g) {
            require(finite(g.gamma) && g.gamma > 1, "stiffened", "gamma", "must be > 1");
            require(finite(g.p_inf) && g.p_inf >= 0, "stiffened", "p_inf", "must be >= 0");
          },
          [](const Murnaghan& m) {
            require(finite(m.K) && m.K > 0, "murnaghan", "K", "must be > 0");
            require(finite(m.gamma) && m.gamma > 0, "murnaghan", "gamma", "must be > 0");
            require(finite(m.rho0) && m.rho0 > 0, "murnaghan", "rho0", "must be > 0");
            require(finite(m.p0), "murnaghan", "p0", "must be finite");
          },
          [](const Polynomial& p) {
            require(finite(p.A1) && p.A1 > 0, "polynomial", "A1", "must be > 0");
            require(finite(p.A2) && p.A2 > 0, "polynomial", "A2", "must be > 0");
            require(finite(p.A3) && p.A3 > 0, "polynomial", "A3", "must be > 0");
            require(finite(p.T1) && p.T1 > 0, "polynomial", "T1", "must be > 0");
            require(finite(p.T2) && p.T2 >= 0, "polynomial", "T2", "must be >= 0");
            require(finite(p.rho0) && p.rho0 > 0, "polynomial", "rho0", "must be > 0");
            require(finite(p.B0) && finite(p.B1) && p.B1 <= p.B0 && p.B0 <= p.B1 + 2, "polynomial",
                    "B0", "must satisfy B1 <= B0 <= B1 + 2");
            require(p.T1 >= 2 * p.T2, "polynomial", "T1", "must be >= 2 T2");
          },
          [](const Jwl& j) {
            require(finite(j.A1) && j.A1 > 0, "jwl", "A1", "must be > 0");
            require(finite(j.A2) && j.A2 > 0, "jwl", "A2", "must be > 0");
            require(finite(j.omega) && j.omega > 0, "jwl", "omega", "must be > 0");
            require(finite(j.R1) && j.R1 > 0, "jwl", "R1", "must be > 0");
            require(finite(j.R2) && j.R2 > 0, "jwl", "R2", "must be > 0");
            require(finite(j.rho0) && j.rho0 > 0, "jwl", "rho0", "must be > 0");
            require(j.R1 > j.R2, "jwl", "R1", "must be > R2");
          }},
      v_);
}

EosCoefficients coefficients(const EosParams& eos, double rho) {
  if (!(rho > 0) || !std::isfinite(rho)) {
    std::ostringstream os;
    os << "density must be positive, got " << rho;
    fail(ErrorKind::Domain, os.str());
  }
  EosCoefficients k;
  std::visit(overloaded{
                 [&](const IdealGas& g) { k.G = g.gamma - 1.0; },
                 [&](const StiffenedGas& g) {
                   k.G = g.gamma - 1.0;
                   k.h = -g.gamma * g.p_inf;
                 },
                 [&](const Murnaghan& m) {
                   const double r = rho / m.rho0;
                   k.h = m.K / m.gamma * (std::pow(r, m.gamma) - 1.0) + m.p0;
                   k.dh = m.K / m.rho0 * std::pow(r, m.gamma - 1.0);
                   k.d2h = m.K * (m.gamma - 1.0) / (m.rho0 * m.rho0) * std::pow(r, m.gamma - 2.0);
                 },
                 [&](const Polynomial& p) {
                   const double dB = (p.B0 - p.B1) * p.rho0;
                   k.G = p.B1 + dB / rho;
                   k.dG = -dB / (rho * rho);
                   k.d2G = 2.0 * dB / (rho * rho * rho);
                   const double mu = rho / p.rho0 - 1.0;
                   if (mu >= 0) {
                     k.h = mu * (p.A1 + mu * (p.A2 + mu * p.A3));
                     k.dh = (p.A1 + 2.0 * p.A2 * mu + 3.0 * p.A3 * mu * mu) / p.rho0;
                     k.d2h = (2.0 * p.A2 + 6.0 * p.A3 * mu) / (p.rho0 * p.rho0);
                   } else {
                     k.h = mu * (p.T1 + mu * p.T2);
                     k.dh = (p.T1 + 2.0 * p.T2 * mu) / p.rho0;
                     k.d2h = 2.0 * p.T2 / (p.rho0 * p.rho0);
                   }
                 },
                 [&](const Jwl& j) {
                   k.G = j.omega;
                   double h1, dh1, d2h1, h2, dh2, d2h2;
                   jwl_term(j.A1, j.R1, j.omega, j.rho0, rho, h1, dh1, d2h1);
                   jwl_term(j.A2, j.R2, j.omega, j.rho0, rho, h2, dh2, d2h2);
                   k.h = h1 + h2;
                   k.dh = dh1 + dh2;
                   k.d2h = d2h1 + d2h2;
                 }},
             eos.variant());
  return k;
}

double pressure(const EosParams& eos, double rho, double e) {
  const auto k = coefficients(eos, rho);
  return k.G * rho * e + k.h;
}

double internal_energy(const EosParams& eos, double rho, double p) {
  if (eos.barotropic())
    fail(ErrorKind::UnsupportedOperation, "internal energy is undefined for the barotropic Murnaghan EOS");
  const auto k = coefficients(eos, rho);
  if (k.G * rho == 0.0)
    fail(ErrorKind::UnsupportedOperation, "Gamma(rho) rho vanishes; internal energy undefined");
  return (p - k.h) / (k.G * rho);
}

double sound_speed_squared_raw(const EosCoefficients& k, double rho, double p) {
  if (k.G == 0.0) return k.dh;
  const double e = (p - k.h) / (k.G * rho);
  return (k.dG * rho + k.G) * e + k.dh + k.G * p / rho;
}

double sound_speed_squared_raw(const EosParams& eos, double rho, double p) {
  return sound_speed_squared_raw(coefficients(eos, rho), rho, p);
}

double sound_speed_squared(const EosParams& eos, double rho, double p) {
  const double c2 = sound_speed_squared_raw(eos, rho, p);
  if (!(c2 > 0)) {
    std::ostringstream os;
    os.precision(17);
    os << "non-hyperbolic state: c^2 = " << c2 << " at rho = " << rho << ", p = " << p;
    fail(ErrorKind::NonHyperbolic, os.str());
  }
  return c2;
}

double gamma_infinity(const EosParams& eos) {
  return std::visit(overloaded{[](const IdealGas& g) { return g.gamma - 1.0; },
                               [](const StiffenedGas& g) { return g.gamma - 1.0; },
                               [](const Murnaghan&) { return 0.0; },
                               [](const Polynomial& p) { return p.B1; },
                               [](const Jwl& j) { return j.omega; }},
                    eos.variant());
}

bool ConditionReport::all_hold() const {
  for (const auto& r : ranges)
    if (!r.holds) return false;
  return true;
}

namespace {

void push_sample(ConditionReport& rep, double rho, bool ok) {
  if (!rep.ranges.empty() && rep.ranges.back().holds == ok) {
    rep.ranges.back().rho_hi = rho;
  } else {
    rep.ranges.push_back({rho, rho, ok});
  }
}

bool nonneg(double x, double scale) { return x >= -1e-12 * scale; }

}  // namespace

ConvexityReport validate_convexity(const EosParams& eos, double rho_lo, double rho_hi,
                                   int n_samples) {
  eos.validate();
  if (!(rho_lo > 0) || !(rho_hi > rho_lo) || n_samples < 2)
    fail(ErrorKind::Validation, "convexity audit needs 0 < rho_lo < rho_hi and n_samples >= 2");
  ConvexityReport rep;
  rep.c1.name = "C1";
  rep.c2.name = "C2";
  rep.c3.name = "C3";
  const double Ginf = gamma_infinity(eos);
  const bool baro = eos.barotropic();
  for (int i = 0; i < n_samples; ++i) {
    const double rho = rho_lo + (rho_hi - rho_lo) * i / (n_samples - 1);
    const auto k = coefficients(eos, rho);
    const double sG = std::abs(k.G) + std::abs(k.dG * rho) + 1e-300;
    // (rho G)' = G + rho G', (rho G)'' = 2 G' + rho G''
    const bool c1 = nonneg(-k.dG * rho, sG) && nonneg(k.G + rho * k.dG, sG) &&
                    nonneg(2 * k.dG + rho * k.d2G, sG / rho);
    const bool c2 = baro || (Ginf > 0 && k.G <= Ginf + 2 + 1e-12 * std::abs(Ginf + 2));
    const double sh = std::abs(k.dh) + std::abs(k.d2h * rho) + 1e-300;
    const bool c3 = nonneg(k.dh, sh) && nonneg(k.d2h * rho, sh);
    push_sample(rep.c1, rho, c1);
    push_sample(rep.c2, rho, c2);
    push_sample(rep.c3, rho, c3);
  }
  if (const auto* j = std::get_if<Jwl>(&eos.variant())) {
    const double a = j->A2 * j->R2 * j->R2 / (j->A1 * j->R1 * (j->R1 - j->R2)) *
                     std::exp(((2 + j->omega) * (j->R1 - j->R2) - j->R2) / j->R2);
    rep.jwl_alpha = a;
    rep.jwl_rho_bound = j->R1 * j->rho0 / (2 + j->omega + a);
  }
  if (const auto* p = std::get_if<Polynomial>(&eos.variant())) {
    rep.poly_rho_bound = p->B0 * p->rho0 / (p->B1 + 2);
    rep.poly_param_condition = p->B1 <= p->B0 && p->B0 <= p->B1 + 2;
  }
  return rep;
}

std::string ConvexityReport::to_text() const {
  std::ostringstream os;
  os.precision(10);
  for (const auto* c : {&c1, &c2, &c3}) {
    os << c->name << ": " << (c->all_hold() ? "holds" : "FAILS") << "\n";
    for (const auto& r : c->ranges)
      os << "  [" << r.rho_lo << ", " << r.rho_hi << "] " << (r.holds ? "holds" : "fails") << "\n";
  }
  if (jwl_alpha) os << "jwl alpha = " << *jwl_alpha << "\n";
  if (jwl_rho_bound) os << "jwl C3 sufficient bound: rho <= " << *jwl_rho_bound << "\n";
  if (poly_param_condition)
    os << "polynomial B1 <= B0 <= B1+2: " << (*poly_param_condition ? "holds" : "fails") << "\n";
  if (poly_rho_bound) os << "polynomial C2 bound: rho >= " << *poly_rho_bound << "\n";
  return os.str();
}

}  // namespace mmrs
