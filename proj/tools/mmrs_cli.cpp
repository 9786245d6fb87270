// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mmrs/mmrs.h"

namespace {

constexpr int kOk = 0, kRuntime = 1, kUsage = 2;

int exit_code(int status) {
  switch (status) {
    case MMRS_OK: return kOk;
    case MMRS_E_ARGUMENT:
    case MMRS_E_PARSE:
    case MMRS_E_VALIDATION: return kUsage;
    default: return kRuntime;
  }
}

void list_presets(std::ostream& os) {
  os << "presets:\n";
  for (int i = 0; i < mmrs_preset_count(); ++i) os << "  " << mmrs_preset_name(i) << "\n";
}

bool known_preset(const std::string& n) {
  for (int i = 0; i < mmrs_preset_count(); ++i)
    if (n == mmrs_preset_name(i)) return true;
  return false;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  mmrs_string_free(s);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string w; std::getline(ss, w, sep);)
    if (!w.empty()) out.push_back(w);
  return out;
}

struct ProblemFlags {
  std::string preset, config;
  std::optional<int> cells;
  std::optional<double> cfl, tend, tol;
  std::string geometry, snapshots;
};

// Loads one problem and applies overrides. Returns a status, prints the reason.
int load(const ProblemFlags& f, const std::string& preset, mmrs_problem** p) {
  int st;
  if (!preset.empty()) {
    if (!known_preset(preset)) {
      std::cerr << "unknown preset '" << preset << "'\n";
      list_presets(std::cerr);
      return MMRS_E_VALIDATION;
    }
    st = mmrs_problem_from_preset(preset.c_str(), p);
  } else {
    st = mmrs_problem_from_file(f.config.c_str(), p);
  }
  auto check = [&](int s) {
    if (s != MMRS_OK && st == MMRS_OK) st = s;
  };
  if (st == MMRS_OK && f.cells) check(mmrs_problem_set_cells(*p, *f.cells));
  if (st == MMRS_OK && f.cfl) check(mmrs_problem_set_cfl(*p, *f.cfl));
  if (st == MMRS_OK && f.tend) check(mmrs_problem_set_t_end(*p, *f.tend));
  if (st == MMRS_OK && f.tol) check(mmrs_problem_set_tolerance(*p, *f.tol));
  if (st == MMRS_OK && !f.geometry.empty()) check(mmrs_problem_set_geometry(*p, f.geometry.c_str()));
  if (st == MMRS_OK && !f.snapshots.empty()) {
    std::vector<double> t;
    for (const auto& w : split(f.snapshots, ',')) {
      try {
        t.push_back(std::stod(w));
      } catch (...) {
        std::cerr << "bad snapshot time '" << w << "'\n";
        return MMRS_E_VALIDATION;
      }
    }
    check(mmrs_problem_set_snapshots(*p, t.data(), static_cast<int>(t.size())));
  }
  if (st != MMRS_OK) {
    std::cerr << "error: " << mmrs_last_error() << "\n";
    if (*p) mmrs_problem_free(*p);
    *p = nullptr;
  }
  return st;
}

void add_problem_flags(CLI::App* cmd, ProblemFlags& f) {
  auto* pre = cmd->add_option("--preset", f.preset, "preset name (comma list for sim sweeps)");
  auto* cfg = cmd->add_option("--config", f.config, "config file")->check(CLI::ExistingFile);
  pre->excludes(cfg);
  cmd->add_option("--cells", f.cells, "cell count");
  cmd->add_option("--cfl", f.cfl, "CFL number");
  cmd->add_option("--tend", f.tend, "end time");
  cmd->add_option("--tol", f.tol, "solver tolerance eps0");
  cmd->add_option("--geometry", f.geometry, "planar|spherical");
  cmd->add_option("--snapshots", f.snapshots, "t1,t2,...");
}

int run_riemann(const ProblemFlags& f, const std::string& fan, const std::string& out) {
  mmrs_problem* p = nullptr;
  int st = load(f, f.preset, &p);
  if (st != MMRS_OK) return exit_code(st);
  mmrs_riemann_result r{};
  char* report = nullptr;
  st = mmrs_problem_riemann(p, 0, &r, &report);
  if (st != MMRS_OK) {
    std::cerr << "error: " << mmrs_last_error() << "\n";
    mmrs_problem_free(p);
    return exit_code(st);
  }
  std::cout << take(report);
  if (!fan.empty()) {
    double t = 0;
    int n = 0;
    for (const auto& kv : split(fan, ' ')) {
      const auto eq = kv.find('=');
      const std::string k = kv.substr(0, eq), v = eq == std::string::npos ? "" : kv.substr(eq + 1);
      try {
        if (k == "t") t = std::stod(v);
        else if (k == "n") n = std::stoi(v);
        else throw std::invalid_argument(k);
      } catch (...) {
        std::cerr << "bad --fan entry '" << kv << "' (expected t=<time> n=<count>)\n";
        mmrs_problem_free(p);
        return kUsage;
      }
    }
    char* csv = nullptr;
    st = mmrs_problem_fan_csv(p, 0, t, n, &csv);
    if (st != MMRS_OK) {
      std::cerr << "error: " << mmrs_last_error() << "\n";
      mmrs_problem_free(p);
      return exit_code(st);
    }
    std::filesystem::create_directories(out);
    const auto path = std::filesystem::path(out) / "fan.csv";
    std::ofstream(path) << take(csv);
    std::cout << "fan: " << n << " samples -> " << path.string() << "\n";
  }
  mmrs_problem_free(p);
  return kOk;
}

int run_sim(const ProblemFlags& f, const std::string& out, int jobs) {
  std::vector<std::string> presets = f.preset.empty() ? std::vector<std::string>{""} : split(f.preset, ',');
  std::vector<int> codes(presets.size(), kOk);
  std::mutex io;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < presets.size();) {
      const std::string dir =
          presets.size() > 1 ? (std::filesystem::path(out) / presets[i]).string() : out;
      mmrs_problem* p = nullptr;
      int st;
      {
        std::lock_guard lk(io);
        st = load(f, presets[i], &p);
      }
      if (st != MMRS_OK) {
        codes[i] = exit_code(st);
        continue;
      }
      mmrs_run_result r{};
      st = mmrs_problem_run(p, dir.c_str(), &r);
      std::string err = st != MMRS_OK ? mmrs_last_error() : "";
      mmrs_problem_free(p);
      std::lock_guard lk(io);
      const std::string label = presets[i].empty() ? f.config : presets[i];
      if (st != MMRS_OK) {
        std::cerr << label << ": failed after " << r.steps << " steps: " << err << "\n";
        codes[i] = exit_code(st);
      } else {
        std::cout << label << ": " << r.steps << " steps to t = " << r.time << ", " << r.snapshots
                  << " snapshot(s) in " << dir << "\n";
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(presets.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int code = kOk;
  for (int c : codes) code = std::max(code, c);
  return code;
}

int run_audit(const std::string& kind, const std::string& params, const std::string& range, int samples) {
  std::vector<double> v;
  for (const auto& w : split(params, ',')) {
    try {
      v.push_back(std::stod(w));
    } catch (...) {
      std::cerr << "bad parameter '" << w << "'\n";
      return kUsage;
    }
  }
  const auto r = split(range, ',');
  double lo = 0, hi = 0;
  try {
    if (r.size() != 2) throw std::invalid_argument(range);
    lo = std::stod(r[0]);
    hi = std::stod(r[1]);
  } catch (...) {
    std::cerr << "--range expects lo,hi\n";
    return kUsage;
  }
  mmrs_eos* e = nullptr;
  int st = mmrs_eos_create(kind.c_str(), v.data(), static_cast<int>(v.size()), &e);
  if (st != MMRS_OK) {
    std::cerr << "error: " << mmrs_last_error() << "\n";
    return exit_code(st);
  }
  int ok = 0;
  char* report = nullptr;
  st = mmrs_eos_audit(e, lo, hi, samples, &ok, &report);
  mmrs_eos_free(e);
  if (st != MMRS_OK) {
    std::cerr << "error: " << mmrs_last_error() << "\n";
    return exit_code(st);
  }
  std::cout << take(report);
  return ok ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-medium Riemann solver and 1D sharp-interface simulator"};
  app.require_subcommand(1);

  ProblemFlags rf, sf;
  std::string fan, rout = "out", sout = "out";
  int jobs = 1;
  auto* riemann = app.add_subcommand("riemann", "solve the t=0 interface Riemann problem");
  add_problem_flags(riemann, rf);
  riemann->add_option("--fan", fan, "\"t=<time> n=<count>\": write fan samples to <out>/fan.csv");
  riemann->add_option("--out", rout, "output directory");

  auto* sim = app.add_subcommand("sim", "run a simulation");
  add_problem_flags(sim, sf);
  sim->add_option("--out", sout, "output directory");
  sim->add_option("--jobs", jobs, "concurrent runs for a comma list of presets")->check(CLI::PositiveNumber);

  std::string kind, params, range = "0.1,10";
  int samples = 200;
  auto* audit = app.add_subcommand("audit", "check the convexity conditions of an EOS");
  audit->add_option("--eos", kind, "ideal|stiffened|murnaghan|polynomial|jwl")->required();
  audit->add_option("--params", params, "comma list in the C API order")->required();
  audit->add_option("--range", range, "rho_lo,rho_hi");
  audit->add_option("--samples", samples, "sample count");

  std::string export_dir;
  auto* presets = app.add_subcommand("presets", "list presets or export them as config files");
  presets->add_option("--export", export_dir, "write NAME.cfg files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int c = app.exit(e);
    return c == 0 ? 0 : kUsage;
  }

  auto need_source = [](const ProblemFlags& f) {
    if (f.preset.empty() && f.config.empty()) {
      std::cerr << "one of --preset or --config is required\n";
      list_presets(std::cerr);
      return false;
    }
    return true;
  };

  if (riemann->parsed()) {
    if (!need_source(rf)) return kUsage;
    if (rf.preset.find(',') != std::string::npos) {
      std::cerr << "riemann takes a single preset\n";
      return kUsage;
    }
    return run_riemann(rf, fan, rout);
  }
  if (sim->parsed()) {
    if (!need_source(sf)) return kUsage;
    return run_sim(sf, sout, jobs);
  }
  if (audit->parsed()) return run_audit(kind, params, range, samples);
  if (export_dir.empty()) {
    list_presets(std::cout);
    return kOk;
  }
  std::filesystem::create_directories(export_dir);
  for (int i = 0; i < mmrs_preset_count(); ++i) {
    char* text = nullptr;
    if (mmrs_preset_text(mmrs_preset_name(i), &text) != MMRS_OK) {
      std::cerr << "error: " << mmrs_last_error() << "\n";
      return kRuntime;
    }
    std::ofstream(std::filesystem::path(export_dir) / (std::string(mmrs_preset_name(i)) + ".cfg")) << take(text);
  }
  std::cout << "exported " << mmrs_preset_count() << " presets to " << export_dir << "\n";
  return kOk;
}
