#include "mmrs/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmrs/error.hpp"

namespace mmrs {

const char* to_string(WaveType t) { return t == WaveType::Shock ? "shock" : "rarefaction"; }

namespace {

double impedance(const WaveCurve& c) {
  const auto& s = c.state();
  return s.rho * c.c_eff(s.rho, s.p, c.compression().front().beta);
}

// Near its own cut-off the remaining contribution of a side is below
// rounding, and the q-parameterised integral is singular there.
double eval_at(const WaveCurve& c, double q) {
  const double scale = std::max({std::abs(c.q_k()), std::abs(c.state().p), 1.0});
  if (q - c.q_min() <= 1e-12 * scale) return c.f_min();
  return c.evaluate(q).F;
}

// Velocity on side curve at accumulated jump f. sigma = +1 right, -1 left.
double velocity(const WaveCurve& c, double f, int sigma) { return c.state().u + sigma * f; }

FanState fan_state(const WaveCurve& c, const Waypoint& w, int sigma) {
  return {w.rho, velocity(c, w.f, sigma), w.p, w.S};
}

std::vector<Wave> build_waves(const WaveCurve& c, const BranchEval& ev, double q, int sigma) {
  std::vector<Wave> out;
  if (q == c.q_k()) return out;
  const bool shock = q > c.q_k();
  const auto& segs = shock ? c.compression() : c.tension();
  Waypoint star{ev.rho, ev.p, ev.S, q, ev.F};
  for (int j = 0; j <= ev.segment; ++j) {
    const Segment& g = segs[j];
    const Waypoint a = g.base;
    const Waypoint b = j < ev.segment ? *g.end : star;
    Wave w;
    w.segment = j;
    w.phase = g.phase;
    w.ahead = fan_state(c, a, sigma);
    w.behind = fan_state(c, b, sigma);
    if (shock) {
      w.type = WaveType::Shock;
      const double dq = b.q - a.q;
      const double dv = 1.0 / a.rho - 1.0 / b.rho;
      double m = 0;
      if (dq > 0 && dv > 0 && dq > 1e-12 * std::max(std::abs(a.q), 1.0))
        m = std::sqrt(dq / dv);
      else
        m = a.rho * c.c_eff(a.rho, a.p, g.beta);
      w.head = w.tail = w.ahead.u + sigma * m / a.rho;
    } else {
      w.type = WaveType::Rarefaction;
      w.head = w.ahead.u + sigma * c.c_eff(a.rho, a.p, g.beta);
      w.tail = b.rho > 0 ? w.behind.u + sigma * c.c_eff(b.rho, b.p, g.beta) : w.behind.u;
    }
    out.push_back(w);
  }
  return out;
}

}  // namespace

VacuumCheck vacuum_check(const WaveCurve& l, const WaveCurve& r) {
  VacuumCheck vc;
  const double qm = std::max(l.q_min(), r.q_min());
  vc.q_min = qm;
  if (!std::isfinite(qm)) {
    vc.admissible = true;
    vc.margin = kInf;
    vc.diagnostic = "both cut-off stresses unbounded";
    return vc;
  }
  try {
    const double fl = eval_at(l, qm);
    const double fr = eval_at(r, qm);
    const double f = fl + fr + r.state().u - l.state().u;
    vc.margin = -f;
    vc.admissible = f < 0;
    if (!vc.admissible) {
      std::ostringstream os;
      os.precision(17);
      os << "vacuum: f(q_min) = " << f << " >= 0 at q_min = " << qm;
      vc.diagnostic = os.str();
    }
  } catch (const Error& e) {
    vc.admissible = false;
    vc.margin = 0;
    vc.diagnostic = std::string("rarefaction integration near q_min failed: ") + e.what();
  }
  return vc;
}

VacuumCheck vacuum_check(const RiemannInput& in) {
  WaveCurve l(in.left, in.left_material), r(in.right, in.right_material);
  return vacuum_check(l, r);
}

namespace {

double guess(const WaveCurve& l, const WaveCurve& r, double qmin) {
  const double zl = impedance(l), zr = impedance(r);
  const double ql = l.q_k(), qr = r.q_k();
  double q0 = (zl * qr + zr * ql + zl * zr * (l.state().u - r.state().u)) / (zl + zr);
  if (std::isfinite(qmin) && q0 <= qmin) q0 = qmin + 0.1 * (std::max(ql, qr) - qmin);
  return q0;
}

}  // namespace

double initial_guess(const RiemannInput& in) {
  WaveCurve l(in.left, in.left_material), r(in.right, in.right_material);
  return guess(l, r, std::max(l.q_min(), r.q_min()));
}

StarState solve(const RiemannInput& in) {
  if (!(in.tolerance > 0)) fail(ErrorKind::Validation, "solver tolerance must be positive");
  auto cl = std::make_shared<const WaveCurve>(in.left, in.left_material);
  auto cr = std::make_shared<const WaveCurve>(in.right, in.right_material);
  const double du = in.right.u - in.left.u;
  // f is increasing: f <= 0 at the lower initial stress puts q* above it and
  // rules out vacuum without locating the cut-off.
  const double q_low = std::min(cl->q_k(), cr->q_k());
  double lo = q_low;
  bool fast = false;
  try {
    fast = cl->evaluate(q_low).F + cr->evaluate(q_low).F + du <= 0;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::VacuumSide) throw;
  }
  if (!fast) {
    const auto vc = vacuum_check(*cl, *cr);
    if (!vc.admissible) fail(ErrorKind::Vacuum, "inadmissible Riemann problem: " + vc.diagnostic);
    lo = vc.q_min;
  }

  const double pscale = std::max({std::abs(cl->q_k()), std::abs(cr->q_k()), 1.0});
  const double eps = in.tolerance;
  double hi = kInf;
  double q = guess(*cl, *cr, lo);
  double rtol = 1e-10;

  StarState st;
  BranchEval L, R;
  double fval = 0, dval = 0;
  auto eval = [&](double qq) {
    L = cl->evaluate(qq, rtol);
    R = cr->evaluate(qq, rtol);
    fval = L.F + R.F + du;
    dval = L.dF + R.dF;
  };

  bool converged = false;
  int n = 0;
  for (n = 1; n <= in.max_iters; ++n) {
    eval(q);
    for (;;) {
      const double budget = std::max({0.01 * std::abs(fval), 1e-13 * (std::abs(L.F) + std::abs(R.F)),
                                      1e-3 * eps * (std::abs(q) + pscale) * dval});
      if (L.err + R.err <= budget || rtol <= 1e-14) break;
      rtol = std::max(rtol * 0.01, 1e-14);
      eval(q);
    }
    st.trace.push_back(q);
    if (fval == 0) {
      converged = true;
      break;
    }
    if (fval < 0) lo = std::max(lo, q);
    else hi = std::min(hi, q);
    double qn = q - fval / dval;
    if (std::isfinite(qn) && std::abs(qn - q) <= eps * (std::abs(qn) + pscale)) {
      q = std::clamp(qn, lo, hi);
      converged = true;
      break;
    }
    if (!(qn > lo && qn < hi)) {
      if (std::isfinite(lo) && std::isfinite(hi)) qn = 0.5 * (lo + hi);
      else {
        std::ostringstream os;
        os << "Newton step left an unbounded bracket at q = " << q << " (f = " << fval << ", df = " << dval << ", lo = " << lo << ", hi = " << hi << ")";
        fail(ErrorKind::NonConvergence, os.str());
      }
    }
    const bool done = std::abs(qn - q) <= eps * (std::abs(qn) + pscale);
    q = qn;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os.precision(17);
    os << "inexact Newton did not converge in " << in.max_iters << " iterations; trace:";
    for (double t : st.trace) os << " " << t;
    fail(ErrorKind::NonConvergence, os.str());
  }
  st.u_last_iterate = 0.5 * (in.left.u + in.right.u + R.F - L.F);
  st.iterations = std::min(n, in.max_iters);

  // Re-evaluate at q*.
  eval(q);
  st.q = q;
  st.u = 0.5 * (in.left.u + in.right.u + R.F - L.F);
  st.branch_rtol = rtol;
  st.left = {L.rho, L.p, L.S, L.phase, build_waves(*cl, L, q, -1)};
  st.right = {R.rho, R.p, R.S, R.phase, build_waves(*cr, R, q, +1)};
  if (st.left.waves.empty()) st.left.phase = classify_phase(effective_stress(in.left.S), in.left_material.model);
  if (st.right.waves.empty()) st.right.phase = classify_phase(effective_stress(in.right.S), in.right_material.model);

  const double tight = std::max(rtol * 0.1, 1e-15);
  const auto L2 = cl->evaluate(q, tight);
  const auto R2 = cr->evaluate(q, tight);
  const double f2 = L2.F + R2.F + du;
  st.residual = std::abs(f2);
  st.residual_stress = st.residual / (L2.dF + R2.dF);
  st.left_curve = cl;
  st.right_curve = cr;
  return st;
}

namespace {

FanSample from(const FanState& s, double xi, int mat) { return {xi, s.rho, s.u, s.p, s.S, mat}; }

FanSample inside(const WaveCurve& c, const Wave& w, int sigma, double xi, int mat) {
  const Segment& g = c.tension()[w.segment];
  const double qa = w.ahead.p - w.ahead.S;
  const double qb = w.behind.p - w.behind.S;
  auto lambda = [&](double q, BranchEval& ev) {
    ev = c.rarefaction_branch(q);
    const double u = c.state().u + sigma * ev.F;
    return u + sigma * (ev.rho > 0 ? c.c_eff(ev.rho, ev.p, g.beta) : 0.0);
  };
  BranchEval ea, eb, em;
  const double ga = lambda(qa, ea) - xi;
  const double gb = lambda(qb, eb) - xi;
  if (ga * gb > 0) fail(ErrorKind::Sampling, "characteristic speed not monotone inside rarefaction");
  double lo = qb, hi = qa, glo = gb;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (std::abs(hi) + std::abs(lo)) + 1e-300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = lambda(mid, em) - xi;
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  const double q = 0.5 * (lo + hi);
  lambda(q, em);
  return {xi, em.rho, c.state().u + sigma * em.F, em.p, em.S, mat};
}

}  // namespace

FanSample sample_fan(const StarState& star, double xi) {
  if (!star.left_curve || !star.right_curve) fail(ErrorKind::Sampling, "star state lacks wave curves");
  const auto& cl = *star.left_curve;
  const auto& cr = *star.right_curve;
  const auto& sl = cl.state();
  FanState cur{sl.rho, sl.u, sl.p, sl.S};
  for (const auto& w : star.left.waves) {
    if (xi < w.head) return from(cur, xi, 0);
    if (w.type == WaveType::Rarefaction && xi < w.tail) return inside(cl, w, -1, xi, 0);
    cur = w.behind;
  }
  if (xi < star.u) return from(cur, xi, 0);
  const auto& sr = cr.state();
  const auto& rw = star.right.waves;
  cur = rw.empty() ? FanState{sr.rho, sr.u, sr.p, sr.S} : rw.back().behind;
  for (auto it = rw.rbegin(); it != rw.rend(); ++it) {
    const auto& w = *it;
    if (xi < w.tail) return from(cur, xi, 1);
    if (w.type == WaveType::Rarefaction && xi < w.head) return inside(cr, w, +1, xi, 1);
    cur = w.ahead;
  }
  return from(cur, xi, 1);
}

std::string describe(const StarState& s) {
  std::ostringstream os;
  os.precision(12);
  os << "q_star = " << s.q << "\n";
  os << "u_star = " << s.u << "\n";
  os << "u_star_last_iterate = " << s.u_last_iterate << "\n";
  os << "iterations = " << s.iterations << "\n";
  os << "residual = " << s.residual << " m/s (stress equivalent " << s.residual_stress << " Pa)\n";
  auto side = [&](const char* name, const StarSide& ss) {
    os << name << "_star: rho = " << ss.rho << ", p = " << ss.p << ", S = " << ss.S
       << ", phase = " << to_string(ss.phase) << "\n";
  };
  side("left", s.left);
  side("right", s.right);
  os << "waves:\n";
  auto waves = [&](const char* name, const StarSide& ss) {
    for (const auto& w : ss.waves) {
      os << "  " << name << " " << to_string(w.type) << " " << to_string(w.phase);
      if (w.type == WaveType::Shock)
        os << " speed = " << w.head;
      else
        os << " head = " << w.head << " tail = " << w.tail;
      os << " | ahead rho = " << w.ahead.rho << " u = " << w.ahead.u << " p = " << w.ahead.p
         << " S = " << w.ahead.S << " | behind rho = " << w.behind.rho << " u = " << w.behind.u
         << " p = " << w.behind.p << " S = " << w.behind.S << "\n";
    }
  };
  waves("left", s.left);
  waves("right", s.right);
  if (s.left.waves.empty() && s.right.waves.empty()) os << "  (none)\n";
  return os.str();
}

}  // namespace mmrs
