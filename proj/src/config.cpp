#include "mmrs/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mmrs/error.hpp"

namespace mmrs {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Entry {
  std::string value;
  int line = 0;
};

// One section as read, with line numbers kept for error messages.
struct Section {
  std::string kind, name;
  int line = 0;
  std::map<std::string, Entry> keys;
};

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& msg) {
  fail(ErrorKind::Parse, origin + ": line " + std::to_string(line) + ": " + msg);
}

double number(const std::string& origin, const Entry& e, const std::string& key) {
  const std::string v = trim(e.value);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || std::isnan(d))
    parse_fail(origin, e.line, "'" + key + "' expects a number, got '" + v + "'");
  return d;
}

std::vector<double> numbers(const std::string& origin, const Entry& e, const std::string& key,
                            std::size_t count) {
  std::string v = e.value;
  std::replace(v.begin(), v.end(), ',', ' ');
  std::vector<double> out;
  for (const auto& w : split_ws(v)) out.push_back(number(origin, Entry{w, e.line}, key));
  if (count && out.size() != count)
    parse_fail(origin, e.line, "'" + key + "' expects " + std::to_string(count) + " numbers");
  return out;
}

const std::map<std::string, std::vector<std::string>>& eos_keys() {
  static const std::map<std::string, std::vector<std::string>> k = {
      {"ideal", {"gamma"}},
      {"stiffened", {"gamma", "p_inf"}},
      {"murnaghan", {"K", "gamma", "rho0", "p0"}},
      {"polynomial", {"A1", "A2", "A3", "B0", "B1", "T1", "T2", "rho0"}},
      {"jwl", {"A1", "A2", "omega", "R1", "R2", "rho0"}},
  };
  return k;
}

const std::set<std::string> kModelKeys = {"mu_e", "mu_p", "y_e", "y_p", "beta_e", "beta_p"};

NamedMaterial build_material(const std::string& origin, const Section& s) {
  NamedMaterial nm;
  nm.name = s.name;
  const std::string path = "material." + s.name;
  auto it = s.keys.find("eos");
  if (it == s.keys.end()) fail(ErrorKind::Validation, path + ".eos is required");
  const std::string eos = trim(it->second.value);
  auto ek = eos_keys().find(eos);
  if (ek == eos_keys().end())
    parse_fail(origin, it->second.line, "unknown eos '" + eos + "' (ideal, stiffened, murnaghan, polynomial, jwl)");
  for (const auto& [key, e] : s.keys) {
    if (key == "eos" || kModelKeys.count(key)) continue;
    if (std::find(ek->second.begin(), ek->second.end(), key) == ek->second.end())
      parse_fail(origin, e.line, "unknown key '" + key + "' for eos " + eos);
  }
  std::map<std::string, double> v;
  for (const auto& key : ek->second) {
    auto f = s.keys.find(key);
    if (f == s.keys.end()) fail(ErrorKind::Validation, path + "." + key + " is required");
    v[key] = number(origin, f->second, key);
  }
  if (eos == "ideal") nm.material.eos = IdealGas{v["gamma"]};
  else if (eos == "stiffened") nm.material.eos = StiffenedGas{v["gamma"], v["p_inf"]};
  else if (eos == "murnaghan") nm.material.eos = Murnaghan{v["K"], v["gamma"], v["rho0"], v["p0"]};
  else if (eos == "polynomial")
    nm.material.eos = Polynomial{v["A1"], v["A2"], v["A3"], v["B0"], v["B1"], v["T1"], v["T2"], v["rho0"]};
  else nm.material.eos = Jwl{v["A1"], v["A2"], v["omega"], v["R1"], v["R2"], v["rho0"]};

  auto& m = nm.material.model;
  auto get = [&](const char* key, double& dst) {
    auto f = s.keys.find(key);
    if (f != s.keys.end()) dst = number(origin, f->second, key);
  };
  get("mu_e", m.mu_e);
  get("mu_p", m.mu_p);
  get("y_e", m.y_e);
  get("y_p", m.y_p);
  for (const char* key : {"beta_e", "beta_p"}) {
    auto f = s.keys.find(key);
    if (f == s.keys.end()) continue;
    (std::string(key) == "beta_e" ? m.beta_e : m.beta_p) = number(origin, f->second, key);
  }
  return nm;
}

const char* eos_tag(const EosParams& e) {
  switch (e.variant().index()) {
    case 0: return "ideal";
    case 1: return "stiffened";
    case 2: return "murnaghan";
    case 3: return "polynomial";
    default: return "jwl";
  }
}

}  // namespace

int ProblemConfig::material_index(const std::string& n) const {
  for (std::size_t i = 0; i < materials.size(); ++i)
    if (materials[i].name == n) return static_cast<int>(i);
  return -1;
}

std::vector<double> ProblemConfig::snapshot_times() const {
  std::vector<double> t = snapshots;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  if (t.empty() || t.back() < t_end) t.push_back(t_end);
  return t;
}

ProblemConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::vector<Section> sections;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string l = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') parse_fail(origin, line, "unterminated section header");
      const auto words = split_ws(l.substr(1, l.size() - 2));
      if (words.empty()) parse_fail(origin, line, "empty section header");
      Section s;
      s.kind = words[0];
      s.line = line;
      if (s.kind == "material") {
        if (words.size() != 2) parse_fail(origin, line, "expected [material NAME]");
        s.name = words[1];
      } else if (s.kind == "problem" || s.kind == "region") {
        if (words.size() != 1) parse_fail(origin, line, "[" + s.kind + "] takes no name");
      } else {
        parse_fail(origin, line, "unknown section '" + s.kind + "'");
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) parse_fail(origin, line, "expected 'key = value'");
    if (sections.empty()) parse_fail(origin, line, "key outside any section");
    const std::string key = trim(l.substr(0, eq));
    const std::string val = trim(l.substr(eq + 1));
    if (key.empty()) parse_fail(origin, line, "empty key");
    auto& keys = sections.back().keys;
    if (keys.count(key)) parse_fail(origin, line, "duplicate key '" + key + "'");
    keys[key] = Entry{val, line};
  }

  ProblemConfig cfg;
  bool have_problem = false;
  std::vector<std::pair<const Section*, int>> region_sections;
  for (const auto& s : sections) {
    if (s.kind == "problem") {
      if (have_problem) parse_fail(origin, s.line, "second [problem] section");
      have_problem = true;
      for (const auto& [key, e] : s.keys) {
        if (key == "name") cfg.name = e.value;
        else if (key == "geometry") {
          if (e.value == "planar") cfg.geometry = Geometry::Planar;
          else if (e.value == "spherical") cfg.geometry = Geometry::Spherical;
          else parse_fail(origin, e.line, "geometry must be planar or spherical");
        } else if (key == "domain") {
          auto v = numbers(origin, e, key, 2);
          cfg.x0 = v[0];
          cfg.x1 = v[1];
        } else if (key == "cells") {
          const double c = number(origin, e, key);
          if (c != std::floor(c) || std::abs(c) > 1e9) parse_fail(origin, e.line, "cells must be an integer");
          cfg.cells = static_cast<int>(c);
        } else if (key == "cfl") cfg.cfl = number(origin, e, key);
        else if (key == "t_end") cfg.t_end = number(origin, e, key);
        else if (key == "snapshots") cfg.snapshots = numbers(origin, e, key, 0);
        else if (key == "tolerance") cfg.tolerance = number(origin, e, key);
        else if (key == "output") cfg.output_dir = e.value;
        else if (key == "boundary") {
          const auto w = split_ws(e.value);
          if (w.size() != 2) parse_fail(origin, e.line, "boundary expects two of outflow|wall");
          Boundary b[2];
          for (int k = 0; k < 2; ++k) {
            if (w[k] == "outflow") b[k] = Boundary::Outflow;
            else if (w[k] == "wall") b[k] = Boundary::Wall;
            else parse_fail(origin, e.line, "boundary expects outflow or wall, got '" + w[k] + "'");
          }
          cfg.left = b[0];
          cfg.right = b[1];
        } else parse_fail(origin, e.line, "unknown key '" + key + "' in [problem]");
      }
    } else if (s.kind == "material") {
      if (cfg.material_index(s.name) >= 0) parse_fail(origin, s.line, "duplicate material '" + s.name + "'");
      cfg.materials.push_back(build_material(origin, s));
    } else {
      const int idx = static_cast<int>(cfg.regions.size());
      RegionConfig r;
      bool has_p = false;
      for (const auto& [key, e] : s.keys) {
        if (key == "material") r.material = e.value;
        else if (key == "range") {
          auto v = numbers(origin, e, key, 2);
          r.xl = v[0];
          r.xr = v[1];
        } else if (key == "rho") r.state.rho = number(origin, e, key);
        else if (key == "u") r.state.u = number(origin, e, key);
        else if (key == "p") { r.state.p = number(origin, e, key); has_p = true; }
        else if (key == "S") r.state.S = number(origin, e, key);
        else parse_fail(origin, e.line, "unknown key '" + key + "' in [region]");
      }
      const std::string path = "region[" + std::to_string(idx) + "]";
      for (const char* req : {"material", "range", "rho"})
        if (!s.keys.count(req)) fail(ErrorKind::Validation, path + "." + req + " is required");
      if (!has_p) {
        const int mi = cfg.material_index(r.material);
        if (mi < 0 || !cfg.materials[mi].material.eos.barotropic())
          fail(ErrorKind::Validation, path + ".p is required");
      }
      cfg.regions.push_back(r);
    }
  }
  if (!have_problem) fail(ErrorKind::Validation, "problem section is required");
  // Murnaghan regions sit on the barotrope.
  for (auto& r : cfg.regions) {
    const int mi = cfg.material_index(r.material);
    if (mi >= 0 && cfg.materials[mi].material.eos.barotropic() && r.state.rho > 0)
      r.state.p = coefficients(cfg.materials[mi].material.eos, r.state.rho).h;
  }
  validate(cfg);
  return cfg;
}

ProblemConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path);
}

void validate(const ProblemConfig& c) {
  auto bad = [](const std::string& path, const std::string& msg) { fail(ErrorKind::Validation, path + ": " + msg); };
  if (c.cells <= 0) bad("problem.cells", "must be > 0");
  if (!(c.cfl > 0 && c.cfl <= 1)) bad("problem.cfl", "must lie in (0, 1]");
  if (!(c.t_end > 0) || !std::isfinite(c.t_end)) bad("problem.t_end", "must be > 0");
  if (!(c.x1 > c.x0)) bad("problem.domain", "needs x0 < x1");
  if (c.geometry == Geometry::Spherical && c.x0 < 0) bad("problem.domain", "spherical needs x0 >= 0");
  if (!(c.tolerance > 0 && c.tolerance < 1)) bad("problem.tolerance", "must lie in (0, 1)");
  for (double t : c.snapshots)
    if (!(t > 0 && t <= c.t_end)) bad("problem.snapshots", "times must lie in (0, t_end]");
  if (c.materials.empty()) bad("material", "at least one material is required");
  for (const auto& m : c.materials) {
    try {
      m.material.eos.validate();
      m.material.model.validate();
    } catch (const Error& e) {
      bad("material." + m.name, e.what());
    }
  }
  if (c.regions.empty()) bad("region", "at least one region is required");
  std::vector<std::size_t> order(c.regions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return c.regions[a].xl < c.regions[b].xl; });
  const double eps = 1e-12 * (c.x1 - c.x0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& r = c.regions[order[k]];
    const std::string path = "region[" + std::to_string(order[k]) + "]";
    if (!(r.xr > r.xl)) bad(path + ".range", "needs xl < xr");
    if (k == 0 && std::abs(r.xl - c.x0) > eps) bad(path + ".range", "first region must start at the domain start");
    if (k + 1 == order.size() && std::abs(r.xr - c.x1) > eps) bad(path + ".range", "last region must end at the domain end");
    if (k > 0) {
      const auto& prev = c.regions[order[k - 1]];
      if (r.xl < prev.xr - eps) bad(path + ".range", "overlaps region[" + std::to_string(order[k - 1]) + "]");
      if (r.xl > prev.xr + eps) bad(path + ".range", "leaves a gap after region[" + std::to_string(order[k - 1]) + "]");
    }
    const int mi = c.material_index(r.material);
    if (mi < 0) bad(path + ".material", "unknown material '" + r.material + "'");
    if (!(r.state.rho > 0)) bad(path + ".rho", "must be > 0");
    const auto& mat = c.materials[mi].material;
    try {
      classify_phase(effective_stress(r.state.S), mat.model);
    } catch (const Error& e) {
      bad(path + ".S", e.what());
    }
    try {
      sound_speed_squared(mat.eos, r.state.rho, r.state.p);
    } catch (const Error& e) {
      bad(path, e.what());
    }
  }
}

std::string to_text(const ProblemConfig& c) {
  std::ostringstream o;
  o << "[problem]\n";
  if (!c.name.empty()) o << "name = " << c.name << "\n";
  o << "geometry = " << (c.geometry == Geometry::Planar ? "planar" : "spherical") << "\n";
  o << "domain = " << fmt(c.x0) << " " << fmt(c.x1) << "\n";
  o << "cells = " << c.cells << "\n";
  o << "cfl = " << fmt(c.cfl) << "\n";
  o << "t_end = " << fmt(c.t_end) << "\n";
  if (!c.snapshots.empty()) {
    o << "snapshots =";
    for (std::size_t i = 0; i < c.snapshots.size(); ++i) o << (i ? ", " : " ") << fmt(c.snapshots[i]);
    o << "\n";
  }
  o << "tolerance = " << fmt(c.tolerance) << "\n";
  auto bname = [](Boundary b) { return b == Boundary::Outflow ? "outflow" : "wall"; };
  o << "boundary = " << bname(c.left) << " " << bname(c.right) << "\n";
  o << "output = " << c.output_dir << "\n";
  for (const auto& nm : c.materials) {
    o << "\n[material " << nm.name << "]\n";
    o << "eos = " << eos_tag(nm.material.eos) << "\n";
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, IdealGas>) o << "gamma = " << fmt(e.gamma) << "\n";
          else if constexpr (std::is_same_v<T, StiffenedGas>)
            o << "gamma = " << fmt(e.gamma) << "\np_inf = " << fmt(e.p_inf) << "\n";
          else if constexpr (std::is_same_v<T, Murnaghan>)
            o << "K = " << fmt(e.K) << "\ngamma = " << fmt(e.gamma) << "\nrho0 = " << fmt(e.rho0)
              << "\np0 = " << fmt(e.p0) << "\n";
          else if constexpr (std::is_same_v<T, Polynomial>)
            o << "A1 = " << fmt(e.A1) << "\nA2 = " << fmt(e.A2) << "\nA3 = " << fmt(e.A3) << "\nB0 = " << fmt(e.B0)
              << "\nB1 = " << fmt(e.B1) << "\nT1 = " << fmt(e.T1) << "\nT2 = " << fmt(e.T2)
              << "\nrho0 = " << fmt(e.rho0) << "\n";
          else
            o << "A1 = " << fmt(e.A1) << "\nA2 = " << fmt(e.A2) << "\nomega = " << fmt(e.omega)
              << "\nR1 = " << fmt(e.R1) << "\nR2 = " << fmt(e.R2) << "\nrho0 = " << fmt(e.rho0) << "\n";
        },
        nm.material.eos.variant());
    const auto& m = nm.material.model;
    if (!m.is_fluid() || m.beta_e || m.beta_p) {
      o << "mu_e = " << fmt(m.mu_e) << "\nmu_p = " << fmt(m.mu_p) << "\ny_e = " << fmt(m.y_e)
        << "\ny_p = " << fmt(m.y_p) << "\n";
      if (m.beta_e) o << "beta_e = " << fmt(*m.beta_e) << "\n";
      if (m.beta_p) o << "beta_p = " << fmt(*m.beta_p) << "\n";
    }
  }
  for (const auto& r : c.regions) {
    o << "\n[region]\nmaterial = " << r.material << "\nrange = " << fmt(r.xl) << " " << fmt(r.xr) << "\n";
    o << "rho = " << fmt(r.state.rho) << "\nu = " << fmt(r.state.u) << "\np = " << fmt(r.state.p)
      << "\nS = " << fmt(r.state.S) << "\n";
  }
  return o.str();
}

Simulation make_simulation(const ProblemConfig& c) {
  validate(c);
  std::vector<Material> mats;
  for (const auto& m : c.materials) mats.push_back(m.material);
  std::vector<RegionInit> regs;
  for (const auto& r : c.regions) regs.push_back({c.material_index(r.material), r.xl, r.xr, r.state});
  return Simulation(Grid1D{c.x0, c.x1, c.cells, c.geometry}, std::move(mats), std::move(regs), c.left, c.right,
                    c.tolerance);
}

RiemannInput riemann_input(const ProblemConfig& c, std::size_t k) {
  std::vector<const RegionConfig*> rs;
  for (const auto& r : c.regions) rs.push_back(&r);
  std::sort(rs.begin(), rs.end(), [](auto a, auto b) { return a->xl < b->xl; });
  if (k + 1 >= rs.size()) fail(ErrorKind::Validation, "problem has no interface " + std::to_string(k));
  RiemannInput in;
  const auto& l = *rs[k];
  const auto& r = *rs[k + 1];
  in.left = {l.state.rho, l.state.u, l.state.p, l.state.S};
  in.right = {r.state.rho, r.state.u, r.state.p, r.state.S};
  in.left_material = c.materials[c.material_index(l.material)].material;
  in.right_material = c.materials[c.material_index(r.material)].material;
  in.tolerance = c.tolerance;
  return in;
}

unsigned long long fnv1a64(const std::string& s) {
  unsigned long long h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace mmrs
