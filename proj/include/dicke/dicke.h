/* C interface to the Dicke-model diagonalization library.
 *
 * Every function returns a dicke_status. On failure a thread-local message is
 * available from dicke_last_error() until the next call on the same thread.
 * Handles are opaque; release them with the matching *_free function.
 * State numbers k are 1-based (k = 1 is the ground state).
 */
#ifndef DICKE_DICKE_H
#define DICKE_DICKE_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DICKE_BUILDING_LIBRARY)
#    define DICKE_API __declspec(dllexport)
#  else
#    define DICKE_API __declspec(dllimport)
#  endif
#else
#  define DICKE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dicke_status {
  DICKE_OK = 0,
  DICKE_ERROR_INTERNAL = 1,
  DICKE_ERROR_DOMAIN = 2,      /* invalid parameter, quantum number or tolerance */
  DICKE_ERROR_CAP = 3,         /* matrix dimension above the configured cap */
  DICKE_ERROR_SOLVER = 4,      /* eigensolver did not converge */
  DICKE_ERROR_DIMENSION = 5,   /* buffer or vector length mismatch */
  DICKE_ERROR_NULL_ARGUMENT = 6,
  DICKE_ERROR_IO = 7,
  DICKE_ERROR_ALLOCATION = 8
} dicke_status;

typedef enum dicke_basis { DICKE_BASIS_FOCK = 0, DICKE_BASIS_COHERENT = 1 } dicke_basis;

typedef enum dicke_criterion { DICKE_CRITERION_ENERGY = 0, DICKE_CRITERION_PROBABILITY = 1 } dicke_criterion;

/* Which run a reported truncation refers to for delta_p: TOP probes layer
 * x_max of the x_max run, NEXT probes layer x_max + 1 of the x_max + 1 run. */
typedef enum dicke_layer_reading { DICKE_LAYER_TOP = 0, DICKE_LAYER_NEXT = 1 } dicke_layer_reading;

/* omega > 0, omega0 >= 0, gamma >= 0, j a positive multiple of 1/2. */
typedef struct dicke_params {
  double omega;
  double omega0;
  double gamma;
  double j;
} dicke_params;

typedef struct dicke_params_info {
  int two_j;
  int n_atoms;
  double gamma_c;
  double displacement_unit; /* G = 2 gamma / (omega sqrt(2j)) */
} dicke_params_info;

typedef struct dicke_search_options {
  int start;          /* < 0: smallest valid truncation */
  int stride;         /* >= 1 */
  int max_truncation; /* search cap */
  size_t dim_cap;     /* 0: library default */
} dicke_search_options;

typedef struct dicke_search_result {
  int converged;      /* 1 if found, 0 if the search cap was reached */
  int x_max;          /* -1 when not converged */
  size_t trace_length;/* points evaluated; may exceed the caller's buffer */
} dicke_search_result;

typedef struct dicke_fit {
  double intercept;
  double slope;
  double rms_residual;
  size_t points;
} dicke_fit;

typedef struct dicke_solution dicke_solution;

DICKE_API const char* dicke_last_error(void);
DICKE_API const char* dicke_status_string(dicke_status status);
DICKE_API size_t dicke_default_dim_cap(void);

DICKE_API dicke_status dicke_params_check(const dicke_params* params, dicke_params_info* info);

/* (x_max + 1)(2j + 1) */
DICKE_API dicke_status dicke_basis_dim(const dicke_params* params, int x_max, size_t* dim);

/* Builds and fully diagonalizes the Hamiltonian. dim_cap == 0 uses the default. */
DICKE_API dicke_status dicke_solve(const dicke_params* params, dicke_basis basis, int x_max,
                                   size_t dim_cap, dicke_solution** out);
DICKE_API void dicke_solution_free(dicke_solution* solution);

DICKE_API size_t dicke_solution_dim(const dicke_solution* solution);
DICKE_API int dicke_solution_x_max(const dicke_solution* solution);
DICKE_API dicke_status dicke_solution_energies(const dicke_solution* solution, double* out, size_t length);
/* C^k in the flat layout flat = x (2j+1) + (m + j). */
DICKE_API dicke_status dicke_solution_state(const dicke_solution* solution, size_t k, double* out, size_t length);
DICKE_API dicke_status dicke_solution_residual(const dicke_solution* solution, double* out);
DICKE_API dicke_status dicke_solution_orthonormality(const dicke_solution* solution, double* out);

/* P_{k,x} for x = 0..x_max; length must be x_max + 1. */
DICKE_API dicke_status dicke_probability_profile(const dicke_solution* solution, size_t k, double* out,
                                                 size_t length);
/* Weight of state k on the topmost retained layer. */
DICKE_API dicke_status dicke_delta_p(const dicke_solution* solution, size_t k, double* out);
/* Number of states with delta_p < epsilon. */
DICKE_API dicke_status dicke_count_converged(const dicke_solution* solution, double epsilon, size_t* out);
/* Length of the run k = 1, 2, ... with delta_p < epsilon. */
DICKE_API dicke_status dicke_count_converged_prefix(const dicke_solution* solution, double epsilon,
                                                    size_t* out);
/* Expands state k (coherent basis only) over |n; j, m_z>, n = 0..n_cut.
 * length must be (n_cut + 1)(2j + 1). */
DICKE_API dicke_status dicke_coherent_to_fock(const dicke_solution* solution, size_t k, int n_cut,
                                              double* out, size_t length);

/* Ascending eigenvalues without vectors; length must equal the basis dimension. */
DICKE_API dicke_status dicke_eigenvalues(const dicke_params* params, dicke_basis basis, int x_max,
                                         size_t dim_cap, double* out, size_t length);
/* |E_k(x_max) - E_k(x_max - 1)| */
DICKE_API dicke_status dicke_delta_e(const dicke_params* params, dicke_basis basis, int x_max, size_t k,
                                     size_t dim_cap, double* out);

/* Smallest truncation meeting the criterion for state k. A search that hits
 * max_truncation returns DICKE_OK with result->converged == 0. Up to
 * trace_capacity (x_max, value) pairs are copied into the trace buffers,
 * which may be NULL when trace_capacity is 0. */
DICKE_API dicke_status dicke_find_min_truncation(const dicke_params* params, dicke_basis basis, size_t k,
                                                 double epsilon, dicke_criterion criterion,
                                                 const dicke_search_options* options,
                                                 dicke_search_result* result, int* trace_x,
                                                 double* trace_value, size_t trace_capacity);

DICKE_API dicke_status dicke_probed_truncation(int x_max, dicke_layer_reading reading, int* out);

DICKE_API dicke_status dicke_linear_fit(const double* xs, const double* ys, size_t n, dicke_fit* out);

DICKE_API dicke_status dicke_displaced_overlap(int n_bra, int n_ket, double alpha, double* out);

/* Writes the Hamiltonian as a "DKHM" debug dump (see README). */
DICKE_API dicke_status dicke_write_matrix(const dicke_params* params, dicke_basis basis, int x_max,
                                          size_t dim_cap, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* DICKE_DICKE_H */
