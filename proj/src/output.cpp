#include "mmrs/output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mmrs/error.hpp"

namespace mmrs {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write '" + p.string() + "'");
  f << text;
  if (!f) fail(ErrorKind::Io, "write failed for '" + p.string() + "'");
}

std::string row(double x, double rho, double u, double p, double S, const std::string& mat, Phase ph) {
  return g17(x) + "," + g17(rho) + "," + g17(u) + "," + g17(p) + "," + g17(S) + "," + g17(p - S) + "," + mat + "," +
         to_string(ph) + "\n";
}

}  // namespace

std::string snapshot_csv(const std::vector<CellRow>& rows, const std::vector<std::string>& names) {
  std::string out = "x,rho,u,p,S,q,material,phase\n";
  for (const auto& r : rows) {
    const std::string m = r.material >= 0 && r.material < static_cast<int>(names.size()) ? names[r.material]
                                                                                       : std::to_string(r.material);
    out += row(r.x, r.rho, r.u, r.p, r.S, m, r.phase);
  }
  return out;
}

std::string fan_csv(const StarState& star, double t, int n, double x_if, const std::vector<std::string>& names) {
  if (!(t > 0) || n < 2) fail(ErrorKind::Validation, "fan needs t > 0 and n >= 2");
  double lo = 0, hi = 0;
  for (const auto* side : {&star.left, &star.right})
    for (const auto& w : side->waves) {
      lo = std::min({lo, w.head, w.tail});
      hi = std::max({hi, w.head, w.tail});
    }
  const double span = std::max(hi - lo, 1e-300);
  lo -= 0.1 * span;
  hi += 0.1 * span;
  std::string out = "x,rho,u,p,S,q,material,phase\n";
  for (int k = 0; k < n; ++k) {
    const double xi = lo + (hi - lo) * k / (n - 1);
    const auto s = sample_fan(star, xi);
    const auto& curve = s.material == 0 ? star.left_curve : star.right_curve;
    Phase ph = Phase::Fluid;
    try {
      ph = classify_phase(effective_stress(s.S), curve->material().model);
    } catch (const Error&) {
      ph = Phase::Fluid;
    }
    out += row(x_if + xi * t, s.rho, s.u, s.p, s.S, s.material < static_cast<int>(names.size()) ? names[s.material] : "?",
               ph);
  }
  return out;
}

std::string plot_script(const std::vector<std::string>& files, const std::string& title) {
  std::ostringstream o;
  o << "#!/usr/bin/env python3\n"
       "# Regenerates density, pressure and velocity panels from the snapshot CSVs.\n"
       "import csv, os, sys\n"
       "import matplotlib\n"
       "matplotlib.use('Agg')\n"
       "import matplotlib.pyplot as plt\n\n"
       "HERE = os.path.dirname(os.path.abspath(__file__))\n"
       "FILES = [";
  for (std::size_t i = 0; i < files.size(); ++i) o << (i ? ", " : "") << "'" << files[i] << "'";
  o << "]\n"
       "TITLE = '"
    << title
    << "'\n\n"
       "def load(name):\n"
       "    with open(os.path.join(HERE, name)) as f:\n"
       "        rows = list(csv.DictReader(f))\n"
       "    return {k: [float(r[k]) for r in rows] for k in ('x', 'rho', 'p', 'u')}\n\n"
       "fig, ax = plt.subplots(1, 3, figsize=(13, 3.8))\n"
       "for name in FILES:\n"
       "    d = load(name)\n"
       "    for a, key, lab in zip(ax, ('rho', 'p', 'u'), ('Density', 'Pressure', 'Velocity')):\n"
       "        a.plot(d['x'], d[key], 'o', ms=2, label=name)\n"
       "        a.set_title(lab)\n"
       "        a.set_xlabel('x')\n"
       "ax[0].legend(fontsize=7)\n"
       "fig.suptitle(TITLE)\n"
       "fig.tight_layout()\n"
       "out = os.path.join(HERE, 'plot.png')\n"
       "fig.savefig(out, dpi=150)\n"
       "print(out)\n";
  return o.str();
}

RunResult run_to_directory(const ProblemConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  RunResult res;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());

  const std::string text = to_text(cfg);
  std::vector<std::string> names;
  for (const auto& m : cfg.materials) names.push_back(m.name);
  std::ostringstream steps_log;
  const auto times = cfg.snapshot_times();
  std::string status = "ok";
  try {
    Simulation sim = make_simulation(cfg);
    std::size_t next = 0;
    while (next < times.size()) {
      const double target = times[next];
      if (sim.time() >= target * (1 - 1e-14)) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%03zu.csv", next);
        write_file(dir / name, snapshot_csv(sim.snapshot(), names));
        res.snapshot_files.push_back(name);
        ++next;
        continue;
      }
      const auto rep = sim.step(cfg.cfl, target - sim.time());
      ++res.steps;
      steps_log << "step " << res.steps << " dt=" << g17(rep.dt) << " iterations=" << rep.max_iterations << "\n";
    }
    res.time = sim.time();
    res.ok = true;
  } catch (const Error& e) {
    res.error = std::string(to_string(e.kind())) + ": " + e.what();
    status = "failed";
  }

  std::ostringstream m;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", fnv1a64(text));
  m << "config_hash=fnv1a64:" << hash << "\n";
  m << "name=" << cfg.name << "\n";
  m << "cells=" << cfg.cells << "\n";
  m << "t_end=" << g17(cfg.t_end) << "\n";
  m << "status=" << status << "\n";
  if (!res.ok) m << "error=" << res.error << "\n";
  m << "steps=" << res.steps << "\n";
  for (std::size_t k = 0; k < res.snapshot_files.size(); ++k)
    m << "snapshot=" << g17(times[k]) << " " << res.snapshot_files[k] << "\n";
  m << "# dt history\n" << steps_log.str();
  m << "# config\n";
  std::istringstream ct(text);
  for (std::string l; std::getline(ct, l);) m << "config: " << l << "\n";
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char ts[64];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  m << "timestamp=" << ts << "\n";
  res.manifest_path = (dir / "manifest.txt").string();
  write_file(dir / "manifest.txt", m.str());
  write_file(dir / "plot.py", plot_script(res.snapshot_files, cfg.name.empty() ? "run" : cfg.name));
  return res;
}

}  // namespace mmrs
