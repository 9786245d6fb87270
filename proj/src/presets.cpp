#include <map>

#include "mmrs/config.hpp"
#include "mmrs/error.hpp"

namespace mmrs {

namespace {

const char* kGasGas = R"(# gas-gas: ideal gas both sides, interface embedded at the initial jump
[problem]
name = gas-gas
geometry = planar
domain = 0 1
cells = 400
cfl = 0.4
t_end = 0.012
tolerance = 1e-10
boundary = outflow outflow

[material gas]
eos = ideal
gamma = 1.4

[region]
material = gas
range = 0 0.5
rho = 1
u = 0
p = 1000

[region]
material = gas
range = 0.5 1
rho = 1
u = 0
p = 0.01
)";

const char* kJwlTnt = R"(
[material tnt]
eos = jwl
A1 = 3.712e11
A2 = 3.230e9
omega = 0.30
R1 = 4.15
R2 = 0.95
rho0 = 1630

[material water]
eos = polynomial
A1 = 2.20e9
A2 = 9.54e9
A3 = 1.45e10
B0 = 0.28
B1 = 0.28
T1 = 2.20e9
T2 = 0
rho0 = 1000

[region]
material = tnt
range = 0 0.5
rho = 1630
u = 0
p = 8.3e9

[region]
material = water
range = 0.5 1
rho = 1000
u = 0
p = 1.0e5
)";

const char* kJwlElastic = R"(
[material products]
eos = jwl
A1 = 8.545e11
A2 = 2.050e10
omega = 0.25
R1 = 4.6
R2 = 1.35
rho0 = 1840

# stiffened solid with Hooke deviator, beta_E given directly
[material solid]
eos = stiffened
gamma = 4.4
p_inf = 6e6
mu_e = 1e10
mu_p = 1e10
y_e = inf
y_p = inf
beta_e = 1e14

[region]
material = products
range = 0 0.5
rho = 1630
u = 0
p = 9.2e9

[region]
material = solid
range = 0.5 1
rho = 7800
u = 0
p = 1e5
)";

std::string planar_head(const char* name, const char* tend) {
  return std::string("[problem]\nname = ") + name +
         "\ngeometry = planar\ndomain = 0 1\ncells = 400\ncfl = 0.4\nt_end = " + tend +
         "\ntolerance = 1e-10\nboundary = outflow outflow\n";
}

std::string spherical_head(const char* name, const char* tend) {
  return std::string("[problem]\nname = ") + name +
         "\ngeometry = spherical\ndomain = 0 1\ncells = 400\ncfl = 0.4\nt_end = " + tend +
         "\ntolerance = 1e-10\nboundary = outflow outflow\n";
}

const char* kGavrilyuk = R"(
[material solid]
eos = stiffened
gamma = 4.4
p_inf = 6e6
mu_e = 1e10
mu_p = 1e10
y_e = inf
y_p = inf

[region]
material = solid
range = 0 0.5
rho = 1e3
u = 100
p = 1e5

[region]
material = solid
range = 0.5 1
rho = 1e3
u = -100
p = 1e5
)";

// Murnaghan steel with the section's K; p0 = 1 puts rho0 on the barotrope at p = 1.
std::string steel(const char* model) {
  return std::string(R"(
[material steel]
eos = murnaghan
K = 2.225e6
gamma = 3.7
rho0 = 7.8
p0 = 1.0
)") + model + R"(
[region]
material = steel
range = 0 0.5
rho = 7.8
u = 10
p = 1.0

[region]
material = steel
range = 0.5 1
rho = 7.8
u = -5
p = 1.0
)";
}

const std::map<std::string, std::string>& catalog() {
  static const std::map<std::string, std::string> c = {
      {"gas-gas", kGasGas},
      {"jwl-polynomial",
       "# jwl-polynomial: TNT products against water\n" + planar_head("jwl-polynomial", "8.0e-5") + kJwlTnt},
      {"gavrilyuk-elastic",
       "# gavrilyuk-elastic: symmetric impact of a Hooke solid\n" + planar_head("gavrilyuk-elastic", "6.1e-5") +
           kGavrilyuk},
      {"jwl-elastic",
       "# jwl-elastic: detonation products against an elastic solid\n" + planar_head("jwl-elastic", "1e-4") +
           kJwlElastic},
      {"perfect-elastoplastic",
       "# perfect-elastoplastic: mu_P = 0 with Y_P = inf (the printed Y_P = 0 is inconsistent with Y_E > 0)\n" +
           planar_head("perfect-elastoplastic", "6.751e-4") +
           steel("mu_e = 8.53e5\nmu_p = 0\ny_e = 6.50e3\ny_p = inf\n")},
      {"hydro-elastoplastic",
       "# hydro-elastoplastic: mu_P = mu_E/2, Y_P = 9.75e3\n" + planar_head("hydro-elastoplastic", "6.751e-4") +
           steel("mu_e = 8.53e5\nmu_p = 4.265e5\ny_e = 6.50e3\ny_p = 9.75e3\n")},
      {"spherical-jwl-stiffened",
       "# spherical-jwl-stiffened: the jwl-elastic materials and states in spherical symmetry,\n"
       "# charge for r < 0.5. End time taken from the planar run.\n" +
           spherical_head("spherical-jwl-stiffened", "1e-4") + kJwlElastic},
      {"spherical-jwl-polynomial",
       "# spherical-jwl-polynomial: the jwl-polynomial data in spherical symmetry, charge for r < 0.5.\n"
       "# End time taken from the planar run.\n" +
           spherical_head("spherical-jwl-polynomial", "8.0e-5") + kJwlTnt},
  };
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"gas-gas",           "jwl-polynomial",        "gavrilyuk-elastic",       "jwl-elastic",
          "perfect-elastoplastic", "hydro-elastoplastic", "spherical-jwl-stiffened", "spherical-jwl-polynomial"};
}

bool has_preset(const std::string& name) { return catalog().count(name) > 0; }

const std::string& preset_text(const std::string& name) {
  auto it = catalog().find(name);
  if (it == catalog().end()) fail(ErrorKind::Validation, "unknown preset '" + name + "'");
  return it->second;
}

ProblemConfig preset(const std::string& name) { return parse_config_text(preset_text(name), "preset:" + name); }

}  // namespace mmrs
