#include "mmrs/mmrs.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include "mmrs/config.hpp"
#include "mmrs/error.hpp"
#include "mmrs/output.hpp"

struct mmrs_problem {
  mmrs::ProblemConfig cfg;
};

struct mmrs_eos {
  mmrs::EosParams eos;
};

namespace {

thread_local std::string g_last_error;

int status_of(mmrs::ErrorKind k) {
  using mmrs::ErrorKind;
  switch (k) {
    case ErrorKind::Parse: return MMRS_E_PARSE;
    case ErrorKind::Validation:
    case ErrorKind::Domain: return MMRS_E_VALIDATION;
    case ErrorKind::Io: return MMRS_E_IO;
    default: return MMRS_E_RUNTIME;
  }
}

template <class F>
int guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return MMRS_OK;
  } catch (const mmrs::Error& e) {
    g_last_error = std::string(mmrs::to_string(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MMRS_E_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return MMRS_E_RUNTIME;
  }
}

int argument_error(const char* msg) {
  g_last_error = msg;
  return MMRS_E_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Mut>
int mutate(mmrs_problem* p, Mut&& m) {
  if (!p) return argument_error("null problem");
  return guarded([&] {
    mmrs::ProblemConfig c = p->cfg;
    m(c);
    mmrs::validate(c);
    p->cfg = std::move(c);
  });
}

}  // namespace

extern "C" {

const char* mmrs_version(void) { return "1.0.0"; }
const char* mmrs_last_error(void) { return g_last_error.c_str(); }
void mmrs_string_free(char* s) { std::free(s); }

int mmrs_preset_count(void) { return static_cast<int>(mmrs::preset_names().size()); }

const char* mmrs_preset_name(int i) {
  static const std::vector<std::string> names = mmrs::preset_names();
  if (i < 0 || i >= static_cast<int>(names.size())) return nullptr;
  return names[i].c_str();
}

int mmrs_preset_text(const char* name, char** out) {
  if (!name || !out) return argument_error("null argument");
  return guarded([&] { *out = dup(mmrs::preset_text(name)); });
}

int mmrs_problem_from_preset(const char* name, mmrs_problem** out) {
  if (!name || !out) return argument_error("null argument");
  return guarded([&] { *out = new mmrs_problem{mmrs::preset(name)}; });
}

int mmrs_problem_from_file(const char* path, mmrs_problem** out) {
  if (!path || !out) return argument_error("null argument");
  return guarded([&] { *out = new mmrs_problem{mmrs::parse_config(path)}; });
}

int mmrs_problem_from_text(const char* text, mmrs_problem** out) {
  if (!text || !out) return argument_error("null argument");
  return guarded([&] { *out = new mmrs_problem{mmrs::parse_config_text(text)}; });
}

void mmrs_problem_free(mmrs_problem* p) { delete p; }

int mmrs_problem_set_cells(mmrs_problem* p, int cells) {
  return mutate(p, [&](auto& c) { c.cells = cells; });
}
int mmrs_problem_set_cfl(mmrs_problem* p, double cfl) {
  return mutate(p, [&](auto& c) { c.cfl = cfl; });
}
int mmrs_problem_set_t_end(mmrs_problem* p, double t) {
  return mutate(p, [&](auto& c) {
    c.t_end = t;
    std::erase_if(c.snapshots, [&](double s) { return s > t; });
  });
}
int mmrs_problem_set_tolerance(mmrs_problem* p, double tol) {
  return mutate(p, [&](auto& c) { c.tolerance = tol; });
}
int mmrs_problem_set_geometry(mmrs_problem* p, const char* g) {
  if (!g) return argument_error("null geometry");
  const std::string s = g;
  if (s != "planar" && s != "spherical") {
    g_last_error = "Validation: problem.geometry: expected planar or spherical, got '" + s + "'";
    return MMRS_E_VALIDATION;
  }
  return mutate(p, [&](auto& c) { c.geometry = s == "planar" ? mmrs::Geometry::Planar : mmrs::Geometry::Spherical; });
}
int mmrs_problem_set_snapshots(mmrs_problem* p, const double* t, int n) {
  if (n < 0 || (n > 0 && !t)) return argument_error("bad snapshot array");
  return mutate(p, [&](auto& c) { c.snapshots.assign(t, t + n); });
}

int mmrs_problem_text(const mmrs_problem* p, char** out) {
  if (!p || !out) return argument_error("null argument");
  return guarded([&] { *out = dup(mmrs::to_text(p->cfg)); });
}

int mmrs_problem_riemann(const mmrs_problem* p, int k, mmrs_riemann_result* out, char** report) {
  if (!p || k < 0) return argument_error("null problem or negative interface index");
  return guarded([&] {
    const auto star = mmrs::solve(mmrs::riemann_input(p->cfg, static_cast<std::size_t>(k)));
    if (out) {
      *out = {star.q,
              star.u,
              star.left.rho,
              star.right.rho,
              star.left.S,
              star.right.S,
              star.iterations,
              star.residual,
              star.residual_stress,
              static_cast<int>(star.left.waves.size()),
              static_cast<int>(star.right.waves.size())};
    }
    if (report) *report = dup(mmrs::describe(star));
  });
}

int mmrs_problem_fan_csv(const mmrs_problem* p, int k, double t, int n, char** csv) {
  if (!p || !csv || k < 0) return argument_error("null argument");
  return guarded([&] {
    const auto in = mmrs::riemann_input(p->cfg, static_cast<std::size_t>(k));
    const auto star = mmrs::solve(in);
    std::vector<const mmrs::RegionConfig*> rs;
    for (const auto& r : p->cfg.regions) rs.push_back(&r);
    std::sort(rs.begin(), rs.end(), [](auto a, auto b) { return a->xl < b->xl; });
    const double x_if = rs[k]->xr;
    *csv = dup(mmrs::fan_csv(star, t, n, x_if, {rs[k]->material, rs[k + 1]->material}));
  });
}

int mmrs_problem_run(const mmrs_problem* p, const char* out_dir, mmrs_run_result* out) {
  if (!p || !out_dir) return argument_error("null argument");
  mmrs::RunResult r;
  const int st = guarded([&] { r = mmrs::run_to_directory(p->cfg, out_dir); });
  if (out) *out = {r.ok ? 1 : 0, r.steps, r.time, static_cast<int>(r.snapshot_files.size())};
  if (st != MMRS_OK) return st;
  if (!r.ok) {
    g_last_error = r.error;
    return MMRS_E_RUNTIME;
  }
  return MMRS_OK;
}

int mmrs_eos_create(const char* kind, const double* v, int n, mmrs_eos** out) {
  if (!kind || !out || (n > 0 && !v)) return argument_error("null argument");
  return guarded([&] {
    const std::string k = kind;
    auto need = [&](int m) {
      if (n != m)
        mmrs::fail(mmrs::ErrorKind::Validation,
                   "eos " + k + " takes " + std::to_string(m) + " parameters, got " + std::to_string(n));
    };
    mmrs::EosParams e;
    if (k == "ideal") { need(1); e = mmrs::IdealGas{v[0]}; }
    else if (k == "stiffened") { need(2); e = mmrs::StiffenedGas{v[0], v[1]}; }
    else if (k == "murnaghan") { need(4); e = mmrs::Murnaghan{v[0], v[1], v[2], v[3]}; }
    else if (k == "polynomial") { need(8); e = mmrs::Polynomial{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]}; }
    else if (k == "jwl") { need(6); e = mmrs::Jwl{v[0], v[1], v[2], v[3], v[4], v[5]}; }
    else mmrs::fail(mmrs::ErrorKind::Validation, "unknown eos '" + k + "'");
    e.validate();
    *out = new mmrs_eos{e};
  });
}

void mmrs_eos_free(mmrs_eos* e) { delete e; }

int mmrs_eos_pressure(const mmrs_eos* e, double rho, double energy, double* p) {
  if (!e || !p) return argument_error("null argument");
  return guarded([&] { *p = mmrs::pressure(e->eos, rho, energy); });
}

int mmrs_eos_sound_speed2(const mmrs_eos* e, double rho, double p, double* c2) {
  if (!e || !c2) return argument_error("null argument");
  return guarded([&] { *c2 = mmrs::sound_speed_squared(e->eos, rho, p); });
}

int mmrs_eos_audit(const mmrs_eos* e, double lo, double hi, int samples, int* all_hold, char** report) {
  if (!e) return argument_error("null eos");
  return guarded([&] {
    if (!(lo > 0 && hi > lo) || samples < 2)
      mmrs::fail(mmrs::ErrorKind::Validation, "audit needs 0 < rho_lo < rho_hi and samples >= 2");
    const auto r = mmrs::validate_convexity(e->eos, lo, hi, samples);
    if (all_hold) *all_hold = r.all_hold() ? 1 : 0;
    if (report) *report = dup(r.to_text());
  });
}

}  // extern "C"
