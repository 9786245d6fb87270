#include "mmrs/plasticity.hpp"

#include <cmath>
#include <sstream>

#include "mmrs/error.hpp"
#include "mmrs/ode.hpp"

namespace mmrs {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Elastic: return "elastic";
    case Phase::Plastic: return "plastic";
    case Phase::Fluid: return "fluid";
  }
  return "?";
}

char phase_letter(Phase p) {
  switch (p) {
    case Phase::Elastic: return 'E';
    case Phase::Plastic: return 'P';
    case Phase::Fluid: return 'F';
  }
  return '?';
}

const char* to_string(LimitKind k) {
  switch (k) {
    case LimitKind::ElasticCompression: return "C";
    case LimitKind::ElasticTension: return "T";
    case LimitKind::PlasticCompression: return "PC";
    case LimitKind::PlasticTension: return "PT";
  }
  return "?";
}

bool DeviatoricModel::is_fluid() const {
  return y_p == 0 || (beta_e.value_or(mu_e) == 0 && beta_p.value_or(mu_p) == 0);
}

void DeviatoricModel::validate() const {
  auto bad = [](const char* f, const char* w) {
    fail(ErrorKind::Validation, std::string("deviatoric model: ") + f + " " + w);
  };
  if (!(mu_e >= 0) || !std::isfinite(mu_e)) bad("mu_e", "must be finite and >= 0");
  if (!(mu_p >= 0) || !std::isfinite(mu_p)) bad("mu_p", "must be finite and >= 0");
  if (mu_p > mu_e) bad("mu_p", "must be <= mu_e");
  if (!(y_e >= 0)) bad("y_e", "must be >= 0");
  if (!(y_p >= y_e)) bad("y_p", "must be >= y_e");
  if (beta_e && !(*beta_e >= 0 && std::isfinite(*beta_e))) bad("beta_e", "must be finite and >= 0");
  if (beta_p && !(*beta_p >= 0 && std::isfinite(*beta_p))) bad("beta_p", "must be finite and >= 0");
}

double beta(const DeviatoricModel& m, double rho_k, Phase phase) {
  switch (phase) {
    case Phase::Elastic: return m.beta_e ? *m.beta_e : rho_k * m.mu_e;
    case Phase::Plastic: return m.beta_p ? *m.beta_p : rho_k * m.mu_p;
    case Phase::Fluid: return 0.0;
  }
  return 0.0;
}

Phase classify_phase(double s_eff, const DeviatoricModel& m) {
  if (std::isfinite(m.y_p) && s_eff > m.y_p * (1 + 1e-9)) {
    std::ostringstream os;
    os << "effective stress " << s_eff << " exceeds plastic yield limit " << m.y_p;
    fail(ErrorKind::ConstitutiveViolation, os.str());
  }
  if (std::isfinite(m.y_p) && s_eff >= m.y_p * (1 - 1e-9)) return Phase::Fluid;
  if (s_eff <= m.y_e) return Phase::Elastic;
  return Phase::Plastic;
}

double deviator_after_wave(double S_k, double beta, double rho_k, double rho) {
  return S_k + (4.0 * beta / 3.0) * (1.0 / rho - 1.0 / rho_k);
}

std::optional<double> density_at_deviator(double S_k, double rho_k, double beta, double S_target) {
  if (S_target == S_k) return rho_k;
  if (!(beta > 0) || !std::isfinite(S_target)) return std::nullopt;
  const double v = 1.0 / rho_k + 0.75 * (S_target - S_k) / beta;
  if (!(v > 0)) return std::nullopt;
  return 1.0 / v;
}

namespace {

LimitDensities limits_from(double S_k, double rho_k, double b, double Y, const char* what) {
  LimitDensities out;
  if (!std::isfinite(Y)) return out;
  const double a = 2.0 * Y / 3.0;
  if (std::abs(S_k) > a * (1 + 1e-9) + 1e-300) {
    std::ostringstream os;
    os << what << " limit undefined: |S_k| = " << std::abs(S_k) << " already beyond 2Y/3 = " << a;
    fail(ErrorKind::LimitUndefined, os.str());
  }
  if (Y == 0 || a == std::abs(S_k)) {
    // Limit reached immediately on the side where S already sits.
    if (Y == 0) {
      out.compression = rho_k;
      out.tension = rho_k;
      return out;
    }
  }
  if (!(b > 0)) {
    std::ostringstream os;
    os << what << " limit undefined: beta must be positive";
    fail(ErrorKind::LimitUndefined, os.str());
  }
  // Discriminant S_k^2 + 4Y^2/9 - (2/3) S:S collapses to 4Y^2/9.
  const double root = std::sqrt(4.0 * Y * Y / 9.0);
  const double base = 1.0 / rho_k - 0.75 / b * S_k;
  const double vc = base - 0.75 / b * root;
  const double vt = base + 0.75 / b * root;
  if (!(vc > 0) || !(vt > 0)) {
    std::ostringstream os;
    os << what << " limit undefined: non-positive specific volume";
    fail(ErrorKind::LimitUndefined, os.str());
  }
  out.compression = 1.0 / vc;
  out.tension = 1.0 / vt;
  return out;
}

}  // namespace

LimitDensities elastic_limit_densities(const SideState& s, const DeviatoricModel& m, double beta_e) {
  return limits_from(s.S, s.rho, beta_e, m.y_e, "elastic");
}

LimitDensities elastic_limit_densities(const SideState& s, const DeviatoricModel& m) {
  return elastic_limit_densities(s, m, beta(m, s.rho, Phase::Elastic));
}

LimitDensities plastic_limit_densities(const SideState& g, const DeviatoricModel& m, double beta_p) {
  LimitDensities out;
  if (!std::isfinite(m.y_p)) return out;
  if (!(beta_p > 0)) {
    out.compression = g.rho;
    out.tension = g.rho;
    out.degenerate = true;
    return out;
  }
  return limits_from(g.S, g.rho, beta_p, m.y_p, "plastic");
}

double hugoniot_pressure(const EosParams& eos, double rho_b, double p_b, double rho) {
  if (eos.barotropic()) return coefficients(eos, rho).h;
  const auto kb = coefficients(eos, rho_b);
  const auto k = coefficients(eos, rho);
  const double num = 2 * kb.G * rho_b * k.h + 2 * k.G * rho * (p_b - kb.h) +
                     kb.G * k.G * p_b * (rho - rho_b);
  const double den = kb.G * ((2 + k.G) * rho_b - k.G * rho);
  if (!(den > 0)) {
    std::ostringstream os;
    os << "density " << rho << " beyond the Hugoniot compression limit from " << rho_b;
    fail(ErrorKind::LocusDegeneracy, os.str());
  }
  return num / den;
}

double isentrope_pressure(const EosParams& eos, double rho_b, double p_b, double rho, double rtol) {
  if (eos.barotropic()) return coefficients(eos, rho).h;
  if (rho == rho_b) return p_b;
  auto rhs = [&](double r, const std::array<double, 1>& y) -> std::optional<std::array<double, 1>> {
    const double c2 = sound_speed_squared_raw(eos, r, y[0]);
    if (!(c2 > 0)) return std::nullopt;
    return std::array<double, 1>{c2};
  };
  OdeOptions o;
  o.rtol = rtol;
  o.atol = 1e-12 * std::max(1.0, std::abs(p_b));
  o.h_min = 1e-14 * rho_b;
  auto r = rkf45<1>(rhs, rho_b, rho, {p_b}, o);
  if (r.status != OdeStatus::Ok) {
    std::ostringstream os;
    os.precision(17);
    os << "isentrope integration failed at rho = " << r.t << ", p = " << r.y[0]
       << " (target rho = " << rho << ")";
    fail(ErrorKind::Integration, os.str());
  }
  return r.y[0];
}

LimitState limit_state(const SideState& s, const Material& mat, LimitKind kind) {
  const auto& m = mat.model;
  const double be = beta(m, s.rho, Phase::Elastic);
  const double bp = beta(m, s.rho, Phase::Plastic);
  const bool comp = kind == LimitKind::ElasticCompression || kind == LimitKind::PlasticCompression;
  const bool plastic = kind == LimitKind::PlasticCompression || kind == LimitKind::PlasticTension;

  auto make = [&](double rho_b, double p_b, double S_b, double b, double rho) {
    LimitState st;
    st.rho = rho;
    st.p = comp ? hugoniot_pressure(mat.eos, rho_b, p_b, rho) : isentrope_pressure(mat.eos, rho_b, p_b, rho);
    st.S = deviator_after_wave(S_b, b, rho_b, rho);
    st.q = st.p - st.S;
    return st;
  };

  const auto el = elastic_limit_densities(s, m, be);
  const auto& er = comp ? el.compression : el.tension;
  if (!er) fail(ErrorKind::LimitUndefined, "elastic limit unreachable (YE infinite)");
  LimitState e = make(s.rho, s.p, s.S, be, *er);
  e.kind = comp ? LimitKind::ElasticCompression : LimitKind::ElasticTension;
  if (!plastic) return e;

  const auto pl = plastic_limit_densities(SideState{e.rho, 0, e.p, e.S}, m, bp);
  const auto& pr = comp ? pl.compression : pl.tension;
  if (!pr) fail(ErrorKind::LimitUndefined, "plastic limit unreachable (YP infinite)");
  LimitState p = make(e.rho, e.p, e.S, bp, *pr);
  p.kind = comp ? LimitKind::PlasticCompression : LimitKind::PlasticTension;
  return p;
}

}  // namespace mmrs
