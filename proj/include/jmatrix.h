#ifndef JMATRIX_H
#define JMATRIX_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef JM_BUILDING_LIBRARY
#    define JM_API __declspec(dllexport)
#  else
#    define JM_API __declspec(dllimport)
#  endif
#else
#  define JM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* J-matrix scattering for V(r) = A/(2r^2) + U(r) in a Laguerre or oscillator basis.
   Every function returns a status; on failure jm_last_error() describes it
   (the message is per thread and valid until the next failing call on that thread). */

typedef enum jm_status {
    JM_OK = 0,
    JM_ERR_REAL_REPRESENTATION = 1, /* (l+1/2)^2 + A <= 0 */
    JM_ERR_SINGULAR_KINEMATICS = 2,
    JM_ERR_NON_CONVERGENCE = 3,
    JM_ERR_DEGENERATE_ORDER = 4,
    JM_ERR_EIGEN_FAILURE = 5,
    JM_ERR_QUADRATURE_ORDER_TOO_LOW = 6,
    JM_ERR_OUT_OF_TABLE = 7,
    JM_ERR_POLE_HIT = 8,
    JM_ERR_DIVISION_DEGENERATE = 9,
    JM_ERR_NO_CONVERGENCE = 10,
    JM_ERR_REGION_EMPTY = 11,
    JM_ERR_OVERLAP_NOT_POSITIVE_DEFINITE = 12,
    JM_ERR_INVALID_ARGUMENT = 13,
    JM_ERR_NULL_POINTER = 100,
    JM_ERR_BUFFER_TOO_SMALL = 101,
    JM_ERR_INTERNAL = 102
} jm_status;

typedef enum jm_basis { JM_BASIS_LAGUERRE = 0, JM_BASIS_OSCILLATOR = 1 } jm_basis;

/* Cosine-like coefficients: tau s_n + eta P_{n-1} (EQ19) or s_n - eta P_{n-1} (TABLE2).
   The oscillator basis always uses the first form. */
typedef enum jm_convention { JM_CONVENTION_EQ19 = 0, JM_CONVENTION_TABLE2 = 1 } jm_convention;

typedef struct jm_complex {
    double re;
    double im;
} jm_complex;

typedef struct jm_setup {
    int ell;
    double A;
    jm_basis basis;
    double lambda;
    int N;
    jm_convention convention;
    int quadrature_order; /* 0: start at the default order and refine until converged */
} jm_setup;

typedef struct jm_problem jm_problem;

typedef struct jm_problem_info {
    double nu;
    int quadrature_order;
    double corner_drift;
    double max_drift;
    int out_of_table; /* nonzero when quadrature nodes fell beyond a tabulated potential */
} jm_problem_info;

typedef struct jm_smatrix_result {
    jm_complex S;           /* e^{2 i delta} */
    jm_complex S_reciprocal;
    double phase_shift;     /* arg(S)/2 in (-pi/2, pi/2] */
    jm_complex T;           /* T_{N-1} */
    jm_complex R_plus;      /* R_N^+ */
    jm_complex R_minus;     /* R_N^- */
    jm_complex green;       /* g_{N-1,N-1} */
    jm_complex edge;        /* J_{N-1,N} */
} jm_smatrix_result;

typedef struct jm_root {
    jm_complex E;
    double residual;
    int iterations;
    double lambda_used;
    int N_used;
    double stability_spread;
} jm_root;

typedef struct jm_search {
    double re_min, re_max, im_min, im_max;
    int grid_re, grid_im;         /* 0 selects 24 */
    const jm_complex* seeds;      /* optional extra seeds */
    size_t n_seeds;
    double tolerance;             /* 0 selects 1e-10 */
    double spread_fraction;       /* relative lambda shift for the stability re-polish; <0 disables */
} jm_search;

typedef struct jm_stability_row {
    double lambda;
    int N;
    jm_complex E;
    double residual;
    int converged;
    int in_plateau;
} jm_stability_row;

typedef struct jm_plateau {
    int found;
    double lambda_lo, lambda_hi;
    double drift;
} jm_plateau;

JM_API const char* jm_last_error(void);
JM_API const char* jm_status_name(jm_status status);

/* Channel and kinematics */
JM_API jm_status jm_channel_nu(int ell, double A, double* nu);
JM_API jm_status jm_energy_point(jm_complex E, jm_basis basis, double lambda, jm_complex* k, jm_complex* mu,
                                 jm_complex* x);

/* Reference problem. s and c receive N+1 values each (indices 0..N). */
JM_API jm_status jm_coefficients(int ell, double A, jm_basis basis, double lambda, int N, jm_complex E,
                                 jm_convention convention, jm_complex* s, jm_complex* c);
JM_API jm_status jm_reconstruct(int ell, double A, jm_basis basis, double lambda, const jm_complex* coeffs,
                                size_t n_coeffs, const double* r, size_t n_r, jm_complex* out);
JM_API jm_status jm_basis_function(int ell, double A, jm_basis basis, double lambda, int n, double r,
                                   double* value);
JM_API jm_status jm_bessel_jy(double nu, double z, double* J, double* Y);

/* Full problem with a short-range potential U(r) = v0 r^p e^{-a r} or a table. */
JM_API jm_status jm_problem_create_powexp(const jm_setup* setup, double v0, double p, double a,
                                          jm_problem** out);
JM_API jm_status jm_problem_create_tabulated(const jm_setup* setup, const double* r, const double* u, size_t n,
                                             jm_problem** out);
JM_API jm_status jm_problem_create_from_file(const jm_setup* setup, const char* path, jm_problem** out);
JM_API void jm_problem_destroy(jm_problem* problem);

JM_API jm_status jm_problem_info_get(const jm_problem* problem, jm_problem_info* info);
JM_API jm_status jm_potential_value(const jm_problem* problem, double r, double* u, int* out_of_table);
/* eps receives N values, eps_trunc N-1. */
JM_API jm_status jm_spectra(const jm_problem* problem, double* eps, double* eps_trunc);
JM_API jm_status jm_green(const jm_problem* problem, jm_complex z, jm_complex* g);

JM_API jm_status jm_smatrix(const jm_problem* problem, jm_complex E, jm_smatrix_result* out);
/* Function whose zeros are the poles of S. */
JM_API jm_status jm_pole_function(const jm_problem* problem, jm_complex E, jm_complex* D);
/* Continuity-tracked copy of phase shifts on an ascending grid. */
JM_API jm_status jm_unwrap_phase(const double* delta, size_t n, double* out);

/* Roots: *count receives the number found; at most capacity are written.
   JM_ERR_BUFFER_TOO_SMALL if capacity < *count. failed_seeds may be NULL. */
JM_API jm_status jm_find_poles(const jm_problem* problem, const jm_search* search, jm_root* roots,
                               size_t capacity, size_t* count, size_t* failed_seeds);
JM_API jm_status jm_bound_states(const jm_problem* problem, double e_min, double e_max, jm_root* roots,
                                 size_t capacity, size_t* count);
JM_API jm_status jm_polish_root(const jm_problem* problem, jm_complex seed, jm_root* root);

/* Re-converge a root on the grid lambdas x Ns using problem's channel, potential and
   convention. rows receives n_lambdas * n_N entries, N-major. */
JM_API jm_status jm_stability_scan(const jm_problem* problem, const double* lambdas, size_t n_lambdas,
                                   const int* Ns, size_t n_N, jm_complex target, double tolerance,
                                   jm_stability_row* rows, jm_plateau* plateau);

#ifdef __cplusplus
}
#endif

#endif
