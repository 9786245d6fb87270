#include "mmrs/wavecurves.hpp"

#include <cmath>
#include <sstream>

#include "mmrs/error.hpp"
#include "mmrs/ode.hpp"

namespace mmrs {

namespace {

struct Plan {
  Phase phase;
  double beta;
  std::optional<double> target;
};

// Next piece of the evolution law from S0 moving in direction dir (-1 for
// compression, S decreasing). Moving towards zero is elastic unloading.
Plan plan_segment(double S0, int dir, const DeviatoricModel& m, double be, double bp) {
  const double a = 2.0 * m.y_e / 3.0;
  const double b = 2.0 * m.y_p / 3.0;
  if (b == 0) return {Phase::Fluid, 0.0, std::nullopt};
  auto elastic = [&]() -> Plan {
    if (!(be > 0)) return {Phase::Elastic, 0.0, std::nullopt};
    if (!std::isfinite(a)) return {Phase::Elastic, be, std::nullopt};
    return {Phase::Elastic, be, dir * a};
  };
  const bool outward = S0 == 0 || (S0 > 0) == (dir > 0);
  const double s = std::abs(S0);
  if (!outward || s < a * (1 - 1e-12)) return elastic();
  if (std::isfinite(b) && s >= b * (1 - 1e-12)) return {Phase::Fluid, 0.0, std::nullopt};
  if (!(bp > 0)) {
    // Zero hardening: a finite YP is reached at once.
    if (std::isfinite(b)) return {Phase::Fluid, 0.0, std::nullopt};
    return {Phase::Plastic, 0.0, std::nullopt};
  }
  if (std::isfinite(b)) return {Phase::Plastic, bp, dir * b};
  return {Phase::Plastic, bp, std::nullopt};
}

constexpr int kMaxSegments = 8;

}  // namespace

WaveCurve::WaveCurve(const SideState& s, const Material& m, CurveOptions o)
    : s_(s), m_(m), o_(o) {
  if (!(s.rho > 0) || !std::isfinite(s.rho) || !std::isfinite(s.p) || !std::isfinite(s.S))
    fail(ErrorKind::Domain, "side state must have finite values and positive density");
  beta_e_ = beta(m.model, s.rho, Phase::Elastic);
  beta_p_ = beta(m.model, s.rho, Phase::Plastic);
  classify_phase(effective_stress(s.S), m.model);
  sound_speed_squared(m.eos, s.rho, s.p);
  build_compression();
  build_tension();
}

double WaveCurve::q_min() const {
  std::call_once(cut_->once, [this] { compute_q_min(); });
  return cut_->q;
}

double WaveCurve::f_min() const {
  q_min();
  return cut_->f;
}

double WaveCurve::sound_speed2(double rho, double p) const {
  return sound_speed_squared_raw(m_.eos, rho, p);
}

double WaveCurve::c_eff(double rho, double p, double beta) const {
  return std::sqrt(sound_speed2(rho, p) + 4.0 * beta / (3.0 * rho * rho));
}

double WaveCurve::deviator(const Segment& g, double rho) const {
  if (g.beta == 0) return g.base.S;
  return deviator_after_wave(g.base.S, g.beta, g.base.rho, rho);
}

double WaveCurve::rho_max_for(const Waypoint& b) const {
  if (m_.eos.barotropic()) return 100.0 * b.rho;
  const double G = coefficients(m_.eos, b.rho).G;
  if (!(G > 0)) return 1e6 * b.rho;
  return b.rho * (G + 2.0) / G - 1e-9 * b.rho;
}

void WaveCurve::build_compression() {
  Waypoint base{s_.rho, s_.p, s_.S, s_.q(), 0.0};
  for (int i = 0; i < kMaxSegments; ++i) {
    const Plan pl = plan_segment(base.S, -1, m_.model, beta_e_, beta_p_);
    Segment g;
    g.base = base;
    g.beta = pl.beta;
    g.phase = pl.phase;
    g.rho_max = rho_max_for(base);
    if (pl.target && pl.beta > 0) {
      const auto rho_end = density_at_deviator(base.S, base.rho, pl.beta, *pl.target);
      if (rho_end && *rho_end > base.rho && (*rho_end < g.rho_max || m_.eos.barotropic())) {
        Waypoint e;
        e.rho = *rho_end;
        e.p = hugoniot_pressure(m_.eos, base.rho, base.p, e.rho);
        e.S = *pl.target;
        e.q = e.p - e.S;
        if (e.q > base.q) {
          e.f = base.f + std::sqrt((e.q - base.q) * (1.0 / base.rho - 1.0 / e.rho));
          g.end = e;
          comp_.push_back(g);
          base = e;
          continue;
        }
      }
    }
    comp_.push_back(g);
    return;
  }
  fail(ErrorKind::ClassificationUnsupported, "compression branch did not terminate");
}

void WaveCurve::build_tension() {
  Waypoint base{s_.rho, s_.p, s_.S, s_.q(), 0.0};
  for (int i = 0; i < kMaxSegments; ++i) {
    const Plan pl = plan_segment(base.S, +1, m_.model, beta_e_, beta_p_);
    Segment g;
    g.base = base;
    g.beta = pl.beta;
    g.phase = pl.phase;
    if (pl.target && pl.beta > 0) {
      const auto rho_end = density_at_deviator(base.S, base.rho, pl.beta, *pl.target);
      if (rho_end && *rho_end < base.rho) {
        auto rhs = [&](double t, const std::array<double, 2>& y)
            -> std::optional<std::array<double, 2>> {
          const double rho = std::exp(t);
          const double c2 = sound_speed2(rho, y[0]);
          if (!(c2 > 0)) return std::nullopt;
          return std::array<double, 2>{rho * c2, std::sqrt(c2 + 4.0 * g.beta / (3.0 * rho * rho))};
        };
        OdeOptions oo;
        oo.rtol = o_.waypoint_rtol;
        oo.atol = o_.atol;
        oo.h_min = 1e-14;
        auto r = rkf45<2>(rhs, std::log(base.rho), std::log(*rho_end), {base.p, base.f}, oo);
        if (r.status == OdeStatus::Ok) {
          Waypoint e;
          e.rho = *rho_end;
          e.p = m_.eos.barotropic() ? coefficients(m_.eos, e.rho).h : r.y[0];
          e.S = *pl.target;
          e.q = e.p - e.S;
          e.f = r.y[1];
          g.err = (i > 0 ? tens_.back().err : 0.0) + 10.0 * r.err[1];
          g.end = e;
          tens_.push_back(g);
          base = e;
          continue;
        }
      }
    }
    if (!tens_.empty()) g.err = tens_.back().err;
    tens_.push_back(g);
    return;
  }
  fail(ErrorKind::ClassificationUnsupported, "tension branch did not terminate");
}

void WaveCurve::compute_q_min() const {
  const Segment& g = tens_.back();
  if (g.beta > 0) {
    cut_->q = -kInf;
    cut_->f = -kInf;
    cut_->done = true;
    return;
  }
  // S frozen; follow the isentrope towards zero density in t = ln rho.
  auto rhs = [&](double t, const std::array<double, 2>& y) -> std::optional<std::array<double, 2>> {
    const double rho = std::exp(t);
    const double c2 = sound_speed2(rho, y[0]);
    if (!(c2 > 0) || !std::isfinite(c2)) return std::nullopt;
    return std::array<double, 2>{rho * c2, std::sqrt(c2)};
  };
  OdeOptions oo;
  oo.rtol = o_.waypoint_rtol;
  oo.atol = o_.atol;
  oo.h_min = 1e-12;
  double t = std::log(g.base.rho);
  std::array<double, 2> y{g.base.p, g.base.f};
  const double t_floor = std::log(1e-250);
  const double pscale = std::max({std::abs(s_.p), std::abs(s_.q()), 1.0});
  while (t > t_floor) {
    const double t1 = std::max(t - 2.0, t_floor);
    auto r = rkf45<2>(rhs, t, t1, y, oo);
    const double dp = std::abs(r.y[0] - y[0]);
    const double df = std::abs(r.y[1] - y[1]);
    t = r.t;
    y = r.y;
    if (r.status != OdeStatus::Ok) break;
    if (df <= 1e-15 * std::abs(y[1]) + 1e-300 && dp <= 1e-15 * pscale) break;
  }
  if (m_.eos.barotropic()) y[0] = coefficients(m_.eos, std::exp(t)).h;
  cut_->q = std::min(y[0] - g.base.S, g.base.q);
  cut_->f = y[1];
  cut_->done = true;
}

std::string WaveCurve::kind_label(std::size_t seg) const {
  std::string s;
  for (std::size_t i = 0; i <= seg && i < comp_.size(); ++i) s += phase_letter(comp_[i].phase);
  return s;
}

std::optional<std::size_t> WaveCurve::segment_for_kind(const std::string& label) const {
  for (std::size_t i = 0; i < comp_.size(); ++i)
    if (kind_label(i) == label) return i;
  return std::nullopt;
}

double WaveCurve::phi_active(std::size_t seg, double q, double rho) const {
  const Segment& g = comp_.at(seg);
  const auto k = coefficients(m_.eos, rho);
  const double P = q + deviator(g, rho);
  const double rb = g.base.rho;
  if (m_.eos.barotropic()) return rb * (P - k.h);
  const auto kb = coefficients(m_.eos, rb);
  return kb.G * rb * (P - k.h) - k.G * rho * (g.base.p - kb.h) -
         0.5 * kb.G * (P + g.base.p) * k.G * (rho - rb);
}

double WaveCurve::phi(std::size_t seg, double q, double rho) const {
  double frozen = 0;
  for (std::size_t j = 0; j < seg && j < comp_.size(); ++j)
    if (comp_[j].end) frozen += phi_active(j, comp_[j].end->q, comp_[j].end->rho);
  return frozen + phi_active(seg, q, rho);
}

double WaveCurve::phi_drho(std::size_t seg, double q, double rho) const {
  const Segment& g = comp_.at(seg);
  const auto k = coefficients(m_.eos, rho);
  const double dS = -4.0 * g.beta / (3.0 * rho * rho);
  const double rb = g.base.rho;
  if (m_.eos.barotropic()) return rb * (dS - k.dh);
  const double P = q + deviator(g, rho);
  const auto kb = coefficients(m_.eos, rb);
  const double dGr = k.dG * rho + k.G;
  const double d = rho - rb;
  return kb.G * rb * (dS - k.dh) - dGr * (g.base.p - kb.h) -
         0.5 * kb.G * (dS * k.G * d + (P + g.base.p) * (k.dG * d + k.G));
}

double WaveCurve::phi_drho2(std::size_t seg, double q, double rho) const {
  const Segment& g = comp_.at(seg);
  const auto k = coefficients(m_.eos, rho);
  const double dS = -4.0 * g.beta / (3.0 * rho * rho);
  const double d2S = 8.0 * g.beta / (3.0 * rho * rho * rho);
  const double rb = g.base.rho;
  if (m_.eos.barotropic()) return rb * (d2S - k.d2h);
  const double P = q + deviator(g, rho);
  const auto kb = coefficients(m_.eos, rb);
  const double d2Gr = k.d2G * rho + 2.0 * k.dG;
  const double d = rho - rb;
  return kb.G * rb * (d2S - k.d2h) - d2Gr * (g.base.p - kb.h) -
         0.5 * kb.G *
             (d2S * k.G * d + 2.0 * dS * (k.dG * d + k.G) + (P + g.base.p) * (k.d2G * d + 2.0 * k.dG));
}

double WaveCurve::phi_dq(std::size_t seg, double rho) const {
  const Segment& g = comp_.at(seg);
  const double rb = g.base.rho;
  if (m_.eos.barotropic()) return rb;
  const double Gb = coefficients(m_.eos, rb).G;
  const double G = coefficients(m_.eos, rho).G;
  return 0.5 * Gb * (2.0 * rb - G * (rho - rb));
}

double WaveCurve::chi(std::size_t seg, double q, double rho) const {
  const double dq = phi_dq(seg, rho);
  if (!(dq > 0)) {
    std::ostringstream os;
    os << "Hugoniot locus degenerate at rho = " << rho << " (beyond the compression limit)";
    fail(ErrorKind::LocusDegeneracy, os.str());
  }
  return -phi_drho(seg, q, rho) / dq;
}

bool WaveCurve::concavity_condition(std::size_t seg, double rho) const {
  const Segment& g = comp_.at(seg);
  const auto k = coefficients(m_.eos, rho);
  if (k.d2G != 0) return false;
  return k.d2h >= (8.0 + 2.0 * k.G) * g.beta / (3.0 * rho * rho * rho);
}

WaveCurve::DensityRoot WaveCurve::hugoniot_density(std::size_t seg, double q, double rho_guess) const {
  const Segment& g = comp_.at(seg);
  DensityRoot out;
  out.rho = g.base.rho;
  if (q <= g.base.q) return out;
  auto f = [&](double r) { return phi_active(seg, q, r); };
  double lo = g.base.rho;
  double hi = g.rho_max;
  if (m_.eos.barotropic()) {
    while (f(hi) >= 0 && hi < 1e12 * g.base.rho) hi *= 10.0;
  } else {
    double delta = 1e-9 * g.base.rho;
    const double lim = hi + delta;
    while (f(hi) >= 0 && delta > 1e-15 * g.base.rho) {
      delta *= 0.01;
      hi = lim - delta;
    }
  }
  if (f(hi) >= 0) {
    std::ostringstream os;
    os.precision(17);
    os << "no sign change of the Hugoniot function on (" << lo << ", " << hi << "] at q = " << q
       << " (convexity conditions C1-C3 violated?)";
    fail(ErrorKind::Bracket, os.str());
  }
  double rho = rho_guess;
  if (!(rho > lo && rho < hi)) {
    const double K = sound_speed2(g.base.rho, g.base.p) + 4.0 * g.beta / (3.0 * lo * lo);
    rho = lo + (q - g.base.q) / std::max(K, 1e-300);
    if (!(rho > lo && rho < hi)) rho = 0.5 * (lo + hi);
  }
  std::ostringstream trace;
  trace.precision(17);
  for (int it = 0; it < 50; ++it) {
    const double v = f(rho);
    out.iterations = it + 1;
    out.rho = rho;
    out.residual = v;
    trace << rho << " ";
    if (v == 0) return out;
    if (v > 0) lo = rho; else hi = rho;
    const double d = phi_drho(seg, q, rho);
    double next = rho - v / d;
    if (d < 0 && std::abs(next - rho) <= 1e-12 * rho) {
      // Quadratic convergence: one more step lands on the rounding floor.
      const double vn = f(next);
      if (std::abs(vn) < std::abs(v)) {
        out.rho = next;
        out.residual = vn;
      }
      return out;
    }
    if (!(d < 0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4e-16 * hi) return out;
    rho = next;
  }
  fail(ErrorKind::NonConvergence, "Hugoniot density Newton iteration hit the cap; trace: " + trace.str());
}

std::size_t WaveCurve::compression_segment(double q) const {
  std::size_t i = 0;
  while (i + 1 < comp_.size() && comp_[i].end && q > comp_[i].end->q + 1e-12 * std::abs(comp_[i].end->q))
    ++i;
  return i;
}

std::size_t WaveCurve::tension_segment(double q) const {
  std::size_t i = 0;
  while (i + 1 < tens_.size() && tens_[i].end && q < tens_[i].end->q - 1e-12 * std::abs(tens_[i].end->q))
    ++i;
  return i;
}

BranchEval WaveCurve::shock_branch(double q) const {
  const std::size_t i = compression_segment(q);
  const Segment& g = comp_[i];
  BranchEval ev;
  ev.shock = true;
  ev.segment = static_cast<int>(i);
  ev.phase = g.phase;
  const double c2b = sound_speed2(g.base.rho, g.base.p);
  const double K = c2b + 4.0 * g.beta / (3.0 * g.base.rho * g.base.rho);
  const double dq = q - g.base.q;
  const double acoustic = 1.0 / std::sqrt(g.base.rho * g.base.rho * c2b + 4.0 * g.beta / 3.0);
  if (dq <= 0) {
    ev.F = g.base.f;
    ev.dF = acoustic;
    ev.rho = g.base.rho;
    ev.S = g.base.S;
    ev.p = g.base.p;
    return ev;
  }
  const auto root = hugoniot_density(i, q);
  const double rho = root.rho;
  const double dv = 1.0 / g.base.rho - 1.0 / rho;
  const double Fs = std::sqrt(std::max(dq * dv, 0.0));
  ev.F = g.base.f + Fs;
  ev.rho = rho;
  ev.S = deviator(g, rho);
  ev.p = q + ev.S;
  if (dq <= 1e-8 * g.base.rho * g.base.rho * K || Fs == 0) {
    ev.dF = acoustic;
  } else {
    const double x = chi(i, q, rho);
    ev.dF = (dv + dq / (rho * rho * x)) / (2.0 * Fs);
  }
  ev.err = 1e-14 * std::abs(ev.F);
  return ev;
}

BranchEval WaveCurve::rarefaction_branch(double q, double rtol) const {
  if (rtol <= 0) rtol = o_.rtol;
  auto below_cutoff = [&] {
    if (q >= q_min()) return;
    std::ostringstream os;
    os.precision(17);
    os << "stress " << q << " below the cut-off stress q_min = " << q_min();
    fail(ErrorKind::VacuumSide, os.str());
  };
  if (cut_->done) below_cutoff();
  const std::size_t i = tension_segment(q);
  const Segment& g = tens_[i];
  BranchEval ev;
  ev.segment = static_cast<int>(i);
  ev.phase = g.phase;
  if (q >= g.base.q) {
    ev.F = g.base.f;
    ev.rho = g.base.rho;
    ev.S = g.base.S;
    ev.p = g.base.p;
    ev.dF = 1.0 / std::sqrt(g.base.rho * g.base.rho * sound_speed2(g.base.rho, g.base.p) +
                            4.0 * g.beta / 3.0);
    ev.err = g.err;
    return ev;
  }
  if (i + 1 == tens_.size() && cut_->done && std::isfinite(cut_->q) && q == cut_->q) {
    ev.F = cut_->f;
    ev.rho = 0;
    ev.S = g.base.S;
    ev.p = q + g.base.S;
    ev.dF = kInf;
    ev.err = g.err;
    return ev;
  }
  auto rhs = [&](double qq, const std::array<double, 2>& y) -> std::optional<std::array<double, 2>> {
    const double rho = y[1];
    if (!(rho > 0)) return std::nullopt;
    const double p = qq + deviator(g, rho);
    const double c2 = sound_speed2(rho, p);
    if (!(c2 > 0)) return std::nullopt;
    const double K = c2 + 4.0 * g.beta / (3.0 * rho * rho);
    return std::array<double, 2>{1.0 / std::sqrt(rho * rho * c2 + 4.0 * g.beta / 3.0), 1.0 / K};
  };
  OdeOptions oo;
  oo.rtol = rtol;
  oo.atol = o_.atol;
  oo.h_init = (g.base.q - q) / 64.0;
  oo.h_min = 1e-14 * std::abs(s_.q()) + 1e-30;
  auto r = rkf45<2>(rhs, g.base.q, q, {g.base.f, g.base.rho}, oo);
  if (r.status != OdeStatus::Ok) {
    below_cutoff();
    std::ostringstream os;
    os.precision(17);
    os << "rarefaction integration failed (" << (r.status == OdeStatus::StepUnderflow ? "step underflow" : "inadmissible state")
       << ") at q = " << r.t << ", f = " << r.y[0] << ", rho = " << r.y[1] << " (target q = " << q << ")";
    fail(ErrorKind::Integration, os.str());
  }
  ev.F = r.y[0];
  ev.rho = r.y[1];
  ev.S = deviator(g, ev.rho);
  ev.p = q + ev.S;
  const double c2 = sound_speed2(ev.rho, ev.p);
  ev.dF = 1.0 / std::sqrt(ev.rho * ev.rho * c2 + 4.0 * g.beta / 3.0);
  ev.err = g.err + 10.0 * r.err[0];
  return ev;
}

BranchEval WaveCurve::evaluate(double q, double rtol) const {
  if (q > q_k()) return shock_branch(q);
  return rarefaction_branch(q, rtol);
}

}  // namespace mmrs
