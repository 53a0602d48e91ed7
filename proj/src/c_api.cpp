#include "dicke/dicke.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <span>
#include <string>

#include "dicke/convergence.hpp"
#include "dicke/eigensolver.hpp"
#include "dicke/hamiltonian.hpp"
#include "dicke/overlap.hpp"

struct dicke_solution {
  dicke::EigenSolution solution;
  std::size_t dim_cap;
};

namespace {

thread_local std::string last_error;

dicke_status fail(dicke_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body and maps the core's exceptions onto status codes.
template <typename Body>
dicke_status guarded(Body&& body) noexcept {
  try {
    last_error.clear();
    return body();
  } catch (const dicke::CapExceeded& e) {
    return fail(DICKE_ERROR_CAP, e.what());
  } catch (const dicke::SolverError& e) {
    return fail(DICKE_ERROR_SOLVER, e.what());
  } catch (const dicke::DomainError& e) {
    return fail(DICKE_ERROR_DOMAIN, e.what());
  } catch (const dicke::DimensionMismatch& e) {
    return fail(DICKE_ERROR_DIMENSION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DICKE_ERROR_ALLOCATION, "out of memory");
  } catch (const std::exception& e) {
    return fail(DICKE_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(DICKE_ERROR_INTERNAL, "unknown error");
  }
}

#define DICKE_REQUIRE(ptr)                                                  \
  do {                                                                      \
    if ((ptr) == nullptr) return fail(DICKE_ERROR_NULL_ARGUMENT, #ptr " is null"); \
  } while (0)

dicke::ModelParams to_model(const dicke_params& p) {
  return dicke::make_params(p.omega, p.omega0, p.gamma, p.j);
}

dicke::BasisKind to_kind(dicke_basis basis) {
  switch (basis) {
    case DICKE_BASIS_FOCK: return dicke::BasisKind::Fock;
    case DICKE_BASIS_COHERENT: return dicke::BasisKind::Coherent;
  }
  throw dicke::DomainError("unknown basis value");
}

std::size_t effective_cap(std::size_t cap) {
  return cap == 0 ? dicke::kDefaultDimensionCap : cap;
}

void check_length(std::size_t got, std::size_t expected) {
  if (got != expected) {
    throw dicke::DimensionMismatch("buffer holds " + std::to_string(got) + " values, expected " +
                                   std::to_string(expected));
  }
}

}  // namespace

extern "C" {

const char* dicke_last_error(void) { return last_error.c_str(); }

const char* dicke_status_string(dicke_status status) {
  switch (status) {
    case DICKE_OK: return "ok";
    case DICKE_ERROR_INTERNAL: return "internal error";
    case DICKE_ERROR_DOMAIN: return "domain error";
    case DICKE_ERROR_CAP: return "dimension cap exceeded";
    case DICKE_ERROR_SOLVER: return "eigensolver did not converge";
    case DICKE_ERROR_DIMENSION: return "dimension mismatch";
    case DICKE_ERROR_NULL_ARGUMENT: return "null argument";
    case DICKE_ERROR_IO: return "i/o error";
    case DICKE_ERROR_ALLOCATION: return "allocation failure";
  }
  return "unknown status";
}

size_t dicke_default_dim_cap(void) { return dicke::kDefaultDimensionCap; }

dicke_status dicke_params_check(const dicke_params* params, dicke_params_info* info) {
  DICKE_REQUIRE(params);
  return guarded([&] {
    const auto model = to_model(*params);
    if (info != nullptr) {
      info->two_j = model.two_j();
      info->n_atoms = model.n_atoms();
      info->gamma_c = model.gamma_c();
      info->displacement_unit = dicke::displacement_unit(model);
    }
    return DICKE_OK;
  });
}

dicke_status dicke_basis_dim(const dicke_params* params, int x_max, size_t* dim) {
  DICKE_REQUIRE(params);
  DICKE_REQUIRE(dim);
  return guarded([&] {
    const auto model = to_model(*params);
    if (x_max < 0) throw dicke::DomainError("truncation must be >= 0");
    *dim = dicke::BasisSpec{dicke::BasisKind::Fock, x_max}.dim(model);
    return DICKE_OK;
  });
}

dicke_status dicke_solve(const dicke_params* params, dicke_basis basis, int x_max, size_t dim_cap,
                         dicke_solution** out) {
  DICKE_REQUIRE(params);
  DICKE_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const std::size_t cap = effective_cap(dim_cap);
    auto solution = dicke::solve(to_model(*params), {to_kind(basis), x_max}, cap);
    *out = new dicke_solution{std::move(solution), cap};
    return DICKE_OK;
  });
}

void dicke_solution_free(dicke_solution* solution) { delete solution; }

size_t dicke_solution_dim(const dicke_solution* solution) {
  return solution == nullptr ? 0 : solution->solution.dim();
}

int dicke_solution_x_max(const dicke_solution* solution) {
  return solution == nullptr ? -1 : solution->solution.basis().x_max;
}

dicke_status dicke_solution_energies(const dicke_solution* solution, double* out, size_t length) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    const auto energies = solution->solution.energies();
    check_length(length, energies.size());
    std::copy(energies.begin(), energies.end(), out);
    return DICKE_OK;
  });
}

dicke_status dicke_solution_state(const dicke_solution* solution, size_t k, double* out, size_t length) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    const auto state = solution->solution.state(k);
    check_length(length, state.size());
    std::copy(state.begin(), state.end(), out);
    return DICKE_OK;
  });
}

dicke_status dicke_solution_residual(const dicke_solution* solution, double* out) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    const auto& s = solution->solution;
    *out = dicke::residual(dicke::build_hamiltonian(s.params(), s.basis(), solution->dim_cap), s);
    return DICKE_OK;
  });
}

dicke_status dicke_solution_orthonormality(const dicke_solution* solution, double* out) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    *out = dicke::orthonormality_error(solution->solution.decomposition());
    return DICKE_OK;
  });
}

dicke_status dicke_probability_profile(const dicke_solution* solution, size_t k, double* out,
                                       size_t length) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    const auto profile = dicke::probability_profile(solution->solution, k);
    check_length(length, profile.p.size());
    std::copy(profile.p.begin(), profile.p.end(), out);
    return DICKE_OK;
  });
}

dicke_status dicke_delta_p(const dicke_solution* solution, size_t k, double* out) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    *out = dicke::delta_p(solution->solution, k);
    return DICKE_OK;
  });
}

dicke_status dicke_count_converged(const dicke_solution* solution, double epsilon, size_t* out) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    *out = dicke::count_converged(solution->solution, epsilon);
    return DICKE_OK;
  });
}

dicke_status dicke_count_converged_prefix(const dicke_solution* solution, double epsilon, size_t* out) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    *out = dicke::count_converged_prefix(solution->solution, epsilon);
    return DICKE_OK;
  });
}

dicke_status dicke_coherent_to_fock(const dicke_solution* solution, size_t k, int n_cut, double* out,
                                    size_t length) {
  DICKE_REQUIRE(solution);
  DICKE_REQUIRE(out);
  return guarded([&] {
    const auto& s = solution->solution;
    if (s.basis().kind != dicke::BasisKind::Coherent) {
      throw dicke::DomainError("coherent_to_fock needs a coherent-basis solution");
    }
    const auto fock = dicke::coherent_to_fock(s.state(k), s.params(), s.basis().x_max, n_cut);
    check_length(length, fock.size());
    std::copy(fock.begin(), fock.end(), out);
    return DICKE_OK;
  });
}

dicke_status dicke_eigenvalues(const dicke_params* params, dicke_basis basis, int x_max, size_t dim_cap,
                               double* out, size_t length) {
  DICKE_REQUIRE(params);
  DICKE_REQUIRE(out);
  return guarded([&] {
    const auto h = dicke::build_hamiltonian(to_model(*params), {to_kind(basis), x_max},
                                            effective_cap(dim_cap));
    check_length(length, h.dim());
    const auto energies = dicke::eigvalsh(h);
    std::copy(energies.begin(), energies.end(), out);
    return DICKE_OK;
  });
}

dicke_status dicke_delta_e(const dicke_params* params, dicke_basis basis, int x_max, size_t k,
                           size_t dim_cap, double* out) {
  DICKE_REQUIRE(params);
  DICKE_REQUIRE(out);
  return guarded([&] {
    *out = dicke::delta_e(to_model(*params), to_kind(basis), x_max, k, effective_cap(dim_cap));
    return DICKE_OK;
  });
}

dicke_status dicke_find_min_truncation(const dicke_params* params, dicke_basis basis, size_t k,
                                       double epsilon, dicke_criterion criterion,
                                       const dicke_search_options* options,
                                       dicke_search_result* result, int* trace_x,
                                       double* trace_value, size_t trace_capacity) {
  DICKE_REQUIRE(params);
  DICKE_REQUIRE(result);
  if (trace_capacity > 0) {
    DICKE_REQUIRE(trace_x);
    DICKE_REQUIRE(trace_value);
  }
  return guarded([&] {
    dicke::SearchOptions search;
    if (options != nullptr) {
      search.start = options->start;
      search.stride = options->stride;
      search.max_truncation = options->max_truncation;
      search.cap = effective_cap(options->dim_cap);
    }
    dicke::Criterion which;
    switch (criterion) {
      case DICKE_CRITERION_ENERGY: which = dicke::Criterion::Energy; break;
      case DICKE_CRITERION_PROBABILITY: which = dicke::Criterion::Probability; break;
      default: throw dicke::DomainError("unknown criterion value");
    }
    const auto found =
        dicke::find_min_truncation(to_model(*params), to_kind(basis), k, epsilon, which, search);
    result->converged = found.converged ? 1 : 0;
    result->x_max = found.x_max;
    result->trace_length = found.trace.size();
    const std::size_t copied = std::min(trace_capacity, found.trace.size());
    for (std::size_t i = 0; i < copied; ++i) {
      trace_x[i] = found.trace[i].x_max;
      trace_value[i] = found.trace[i].value;
    }
    return DICKE_OK;
  });
}

dicke_status dicke_probed_truncation(int x_max, dicke_layer_reading reading, int* out) {
  DICKE_REQUIRE(out);
  return guarded([&] {
    if (x_max < 0) throw dicke::DomainError("truncation must be >= 0");
    switch (reading) {
      case DICKE_LAYER_TOP: *out = dicke::probed_truncation(x_max, dicke::LayerReading::TopLayer); break;
      case DICKE_LAYER_NEXT: *out = dicke::probed_truncation(x_max, dicke::LayerReading::NextLayer); break;
      default: throw dicke::DomainError("unknown layer reading");
    }
    return DICKE_OK;
  });
}

dicke_status dicke_linear_fit(const double* xs, const double* ys, size_t n, dicke_fit* out) {
  DICKE_REQUIRE(out);
  if (n > 0) {
    DICKE_REQUIRE(xs);
    DICKE_REQUIRE(ys);
  }
  return guarded([&] {
    const auto fit = dicke::linear_fit(std::span<const double>(xs, n), std::span<const double>(ys, n));
    *out = {fit.intercept, fit.slope, fit.rms_residual, fit.points};
    return DICKE_OK;
  });
}

dicke_status dicke_displaced_overlap(int n_bra, int n_ket, double alpha, double* out) {
  DICKE_REQUIRE(out);
  return guarded([&] {
    *out = dicke::displaced_overlap(n_bra, n_ket, alpha);
    return DICKE_OK;
  });
}

dicke_status dicke_write_matrix(const dicke_params* params, dicke_basis basis, int x_max, size_t dim_cap,
                                const char* path) {
  DICKE_REQUIRE(params);
  DICKE_REQUIRE(path);
  return guarded([&] {
    const auto h = dicke::build_hamiltonian(to_model(*params), {to_kind(basis), x_max},
                                            effective_cap(dim_cap));
    try {
      dicke::write_matrix_dump(h, path);
    } catch (const std::runtime_error& e) {
      return fail(DICKE_ERROR_IO, e.what());
    }
    return DICKE_OK;
  });
}

}  // extern "C"
