/* C interface to the multi-medium Riemann solver and 1D simulator.
   Every function returning int gives an MMRS_* status; on failure the
   message is available from mmrs_last_error() on the same thread.
   Strings returned through char** are owned by the caller: mmrs_string_free. */
#ifndef MMRS_H
#define MMRS_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(MMRS_BUILDING_LIBRARY)
#define MMRS_API __attribute__((visibility("default")))
#else
#define MMRS_API
#endif

enum mmrs_status {
  MMRS_OK = 0,
  MMRS_E_ARGUMENT = 1,   /* null handle, bad index */
  MMRS_E_PARSE = 2,      /* config syntax */
  MMRS_E_VALIDATION = 3, /* bad parameters or states */
  MMRS_E_RUNTIME = 4,    /* solver or simulation failure */
  MMRS_E_IO = 5
};

typedef struct mmrs_problem mmrs_problem;
typedef struct mmrs_eos mmrs_eos;

typedef struct {
  double q, u;
  double rho_left, rho_right;
  double S_left, S_right;
  int iterations;
  double residual;        /* |f(q*)|, m/s */
  double residual_stress; /* |f(q*)|/f'(q*), Pa */
  int waves_left, waves_right;
} mmrs_riemann_result;

typedef struct {
  int ok;
  int steps;
  double time;
  int snapshots;
} mmrs_run_result;

MMRS_API const char* mmrs_version(void);
MMRS_API const char* mmrs_last_error(void);
MMRS_API void mmrs_string_free(char* s);

MMRS_API int mmrs_preset_count(void);
MMRS_API const char* mmrs_preset_name(int i); /* NULL when out of range */
MMRS_API int mmrs_preset_text(const char* name, char** out); /* file form, with comments */

MMRS_API int mmrs_problem_from_preset(const char* name, mmrs_problem** out);
MMRS_API int mmrs_problem_from_file(const char* path, mmrs_problem** out);
MMRS_API int mmrs_problem_from_text(const char* text, mmrs_problem** out);
MMRS_API void mmrs_problem_free(mmrs_problem* p);

/* Setters revalidate; a failing setter leaves the problem unchanged. */
MMRS_API int mmrs_problem_set_cells(mmrs_problem* p, int cells);
MMRS_API int mmrs_problem_set_cfl(mmrs_problem* p, double cfl);
MMRS_API int mmrs_problem_set_t_end(mmrs_problem* p, double t_end);
MMRS_API int mmrs_problem_set_tolerance(mmrs_problem* p, double tol);
MMRS_API int mmrs_problem_set_geometry(mmrs_problem* p, const char* geometry); /* planar|spherical */
MMRS_API int mmrs_problem_set_snapshots(mmrs_problem* p, const double* t, int n);
MMRS_API int mmrs_problem_text(const mmrs_problem* p, char** out);

/* Riemann problem at the boundary between region k and k+1 (sorted by position). */
MMRS_API int mmrs_problem_riemann(const mmrs_problem* p, int k, mmrs_riemann_result* out, char** report);
MMRS_API int mmrs_problem_fan_csv(const mmrs_problem* p, int k, double t, int n, char** csv);

MMRS_API int mmrs_problem_run(const mmrs_problem* p, const char* out_dir, mmrs_run_result* out);

/* kind and parameter order:
     ideal      gamma
     stiffened  gamma p_inf
     murnaghan  K gamma rho0 p0
     polynomial A1 A2 A3 B0 B1 T1 T2 rho0
     jwl        A1 A2 omega R1 R2 rho0 */
MMRS_API int mmrs_eos_create(const char* kind, const double* params, int n, mmrs_eos** out);
MMRS_API void mmrs_eos_free(mmrs_eos* e);
MMRS_API int mmrs_eos_pressure(const mmrs_eos* e, double rho, double energy, double* p);
MMRS_API int mmrs_eos_sound_speed2(const mmrs_eos* e, double rho, double p, double* c2);
MMRS_API int mmrs_eos_audit(const mmrs_eos* e, double rho_lo, double rho_hi, int samples, int* all_hold,
                            char** report);

#ifdef __cplusplus
}
#endif

#endif
