#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <thread>

#include "mmrs/mmrs.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  mmrs_string_free(s);
  return out;
}

}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("preset catalogue") {
    REQUIRE(mmrs_preset_count() == 8);
    CHECK(mmrs_preset_name(-1) == nullptr);
    CHECK(mmrs_preset_name(8) == nullptr);
    char* t = nullptr;
    CHECK(mmrs_preset_text(mmrs_preset_name(0), &t) == MMRS_OK);
    CHECK(take(t).find("[problem]") != std::string::npos);
    CHECK(mmrs_preset_text("nope", &t) == MMRS_E_VALIDATION);
    CHECK(std::strlen(mmrs_last_error()) > 0);
  }

  TEST_CASE("riemann through handles") {
    mmrs_problem* p = nullptr;
    REQUIRE(mmrs_problem_from_preset("gas-gas", &p) == MMRS_OK);
    mmrs_riemann_result r{};
    char* report = nullptr;
    REQUIRE(mmrs_problem_riemann(p, 0, &r, &report) == MMRS_OK);
    CHECK(r.q == doctest::Approx(460.894).epsilon(1e-6));
    CHECK(r.u == doctest::Approx(19.5975).epsilon(1e-5));
    CHECK(r.waves_left == 1);
    CHECK(r.waves_right == 1);
    CHECK(take(report).find("q_star") != std::string::npos);
    CHECK(mmrs_problem_riemann(p, 1, &r, nullptr) != MMRS_OK);
    char* csv = nullptr;
    REQUIRE(mmrs_problem_fan_csv(p, 0, 0.012, 11, &csv) == MMRS_OK);
    const auto s = take(csv);
    CHECK(std::count(s.begin(), s.end(), '\n') == 12);
    mmrs_problem_free(p);
  }

  TEST_CASE("setters validate and leave the problem unchanged on failure") {
    mmrs_problem* p = nullptr;
    REQUIRE(mmrs_problem_from_preset("gas-gas", &p) == MMRS_OK);
    char* before = nullptr;
    mmrs_problem_text(p, &before);
    CHECK(mmrs_problem_set_cells(p, 0) == MMRS_E_VALIDATION);
    CHECK(mmrs_problem_set_cfl(p, 2.0) == MMRS_E_VALIDATION);
    CHECK(mmrs_problem_set_geometry(p, "cubic") == MMRS_E_VALIDATION);
    char* after = nullptr;
    mmrs_problem_text(p, &after);
    CHECK(take(before) == take(after));
    CHECK(mmrs_problem_set_cells(p, 50) == MMRS_OK);
    const double t[] = {0.005};
    CHECK(mmrs_problem_set_snapshots(p, t, 1) == MMRS_OK);
    mmrs_problem_text(p, &after);
    CHECK(take(after).find("cells = 50") != std::string::npos);
    mmrs_problem_free(p);
  }

  TEST_CASE("parse errors and null arguments") {
    mmrs_problem* p = nullptr;
    CHECK(mmrs_problem_from_text("[problem]\nbogus = 1\n", &p) == MMRS_E_PARSE);
    CHECK(std::string(mmrs_last_error()).find("line 2") != std::string::npos);
    CHECK(mmrs_problem_from_text(nullptr, &p) == MMRS_E_ARGUMENT);
    CHECK(mmrs_problem_from_file("/nonexistent/x.cfg", &p) == MMRS_E_IO);
    CHECK(mmrs_problem_riemann(nullptr, 0, nullptr, nullptr) == MMRS_E_ARGUMENT);
  }

  TEST_CASE("last error is per thread") {
    mmrs_problem* p = nullptr;
    mmrs_problem_from_text("[problem]\nbogus = 1\n", &p);
    std::string other = "unset";
    std::thread([&] { other = mmrs_last_error(); }).join();
    CHECK(other.empty());
    CHECK(std::strlen(mmrs_last_error()) > 0);
  }

  TEST_CASE("eos handles") {
    mmrs_eos* e = nullptr;
    const double sg[] = {4.4, 6e6};
    REQUIRE(mmrs_eos_create("stiffened", sg, 2, &e) == MMRS_OK);
    double c2 = 0;
    CHECK(mmrs_eos_sound_speed2(e, 1000, 1e5, &c2) == MMRS_OK);
    CHECK(c2 == doctest::Approx(26840.0));
    CHECK(mmrs_eos_sound_speed2(e, 1000, -7e6, &c2) == MMRS_E_RUNTIME);
    double p = 0;
    CHECK(mmrs_eos_pressure(e, 1000, 7794.117647, &p) == MMRS_OK);
    CHECK(p == doctest::Approx(1e5).epsilon(1e-8));
    int ok = 0;
    char* rep = nullptr;
    CHECK(mmrs_eos_audit(e, 1, 1e4, 50, &ok, &rep) == MMRS_OK);
    CHECK(ok == 1);
    CHECK_FALSE(take(rep).empty());
    mmrs_eos_free(e);
    CHECK(mmrs_eos_create("stiffened", sg, 1, &e) == MMRS_E_VALIDATION);
    CHECK(mmrs_eos_create("vdw", sg, 2, &e) == MMRS_E_VALIDATION);
  }

  TEST_CASE("run writes snapshots and a manifest") {
    mmrs_problem* p = nullptr;
    REQUIRE(mmrs_problem_from_preset("gas-gas", &p) == MMRS_OK);
    mmrs_problem_set_cells(p, 40);
    const auto dir = std::filesystem::temp_directory_path() / "mmrs_capi_run";
    std::filesystem::remove_all(dir);
    mmrs_run_result r{};
    REQUIRE(mmrs_problem_run(p, dir.c_str(), &r) == MMRS_OK);
    CHECK(r.ok == 1);
    CHECK(r.snapshots == 1);
    CHECK(r.time == doctest::Approx(0.012));
    CHECK(std::filesystem::exists(dir / "manifest.txt"));
    CHECK(std::filesystem::exists(dir / "snapshot_000.csv"));
    CHECK(std::filesystem::exists(dir / "plot.py"));
    mmrs_problem_free(p);
  }
}
