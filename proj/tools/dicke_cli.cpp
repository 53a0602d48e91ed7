// dicke: command-line driver over the C interface of libdicke.
//
// Subcommands: spectrum, profile, converge, table1, fit. Every output file
// starts with a "# config: {...}" line holding the effective configuration;
// identical configurations produce byte-identical files.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dicke/dicke.h"

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;
constexpr int kExitSolver = 4;

// Library failures carry their status so main() can pick the exit code.
class StatusError : public std::runtime_error {
 public:
  StatusError(dicke_status status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  dicke_status status() const noexcept { return status_; }

 private:
  dicke_status status_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(dicke_status status, const std::string& context) {
  if (status != DICKE_OK) {
    throw StatusError(status, context + ": " + dicke_status_string(status) + " (" +
                                  dicke_last_error() + ")");
  }
}

int exit_code_for(dicke_status status) {
  switch (status) {
    case DICKE_ERROR_DOMAIN: return kExitConfig;
    case DICKE_ERROR_CAP: return kExitCap;
    case DICKE_ERROR_SOLVER: return kExitSolver;
    default: return kExitFailure;
  }
}

struct SolutionDeleter {
  void operator()(dicke_solution* s) const noexcept { dicke_solution_free(s); }
};
using Solution = std::unique_ptr<dicke_solution, SolutionDeleter>;

Solution solve(const dicke_params& params, dicke_basis basis, int x_max, std::size_t cap) {
  dicke_solution* raw = nullptr;
  check(dicke_solve(&params, basis, x_max, cap, &raw),
        "diagonalizing x_max=" + std::to_string(x_max));
  return Solution(raw);
}

std::vector<double> energies_of(const dicke_solution* s) {
  std::vector<double> e(dicke_solution_dim(s));
  check(dicke_solution_energies(s, e.data(), e.size()), "reading energies");
  return e;
}

std::vector<double> eigenvalues(const dicke_params& params, dicke_basis basis, int x_max,
                                std::size_t cap) {
  std::size_t dim = 0;
  check(dicke_basis_dim(&params, x_max, &dim), "basis dimension");
  std::vector<double> e(dim);
  check(dicke_eigenvalues(&params, basis, x_max, cap, e.data(), e.size()), "eigenvalues");
  return e;
}

double delta_p(const dicke_solution* s, std::size_t k) {
  double v = 0.0;
  check(dicke_delta_p(s, k, &v), "delta_p");
  return v;
}

// ---------------------------------------------------------------------------
// Configuration

struct Config {
  std::string command;
  double omega = 1.0;
  double omega0 = 1.0;
  std::optional<double> gamma;
  std::vector<double> j;
  std::string basis = "both";
  std::vector<int> xmax;
  std::string xmax_range;
  std::vector<double> eps;
  std::vector<long long> k;
  std::optional<long long> kmax;
  std::string out = ".";
  std::string format = "csv";
  std::size_t cap = 30000;
  int jobs = 1;
  std::string layer;
  std::string count;
  bool dump_matrix = false;
  bool fit = false;
};

struct Range {
  int lo = 0;
  int hi = 0;
};

Range parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--xmax-range expects lo:hi, got '" + text + "'");
  Range r;
  const auto parse_int = [&](std::string_view part, int& value) {
    const auto* end = part.data() + part.size();
    const auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ConfigError("bad integer in --xmax-range '" + text + "'");
  };
  parse_int(std::string_view(text).substr(0, colon), r.lo);
  parse_int(std::string_view(text).substr(colon + 1), r.hi);
  if (r.lo < 0 || r.hi < r.lo) throw ConfigError("--xmax-range is empty or negative: '" + text + "'");
  return r;
}

std::vector<dicke_basis> bases_of(const Config& c) {
  if (c.basis == "fock") return {DICKE_BASIS_FOCK};
  if (c.basis == "coherent") return {DICKE_BASIS_COHERENT};
  return {DICKE_BASIS_FOCK, DICKE_BASIS_COHERENT};
}

const char* basis_name(dicke_basis b) { return b == DICKE_BASIS_FOCK ? "fock" : "coherent"; }

dicke_layer_reading layer_of(const Config& c) {
  return c.layer == "next" ? DICKE_LAYER_NEXT : DICKE_LAYER_TOP;
}

dicke_params params_for(const Config& c, double j) {
  if (!c.gamma) throw ConfigError(c.command + ": --gamma is required");
  dicke_params p{c.omega, c.omega0, *c.gamma, j};
  check(dicke_params_check(&p, nullptr), "parameters");
  return p;
}

void require_single(const Config& c) {
  if (!c.gamma) throw ConfigError(c.command + ": --gamma is required");
  if (c.j.size() != 1) throw ConfigError(c.command + ": exactly one --j is required");
}

void require_dim(const dicke_params& p, int x_max, std::size_t cap) {
  std::size_t dim = 0;
  check(dicke_basis_dim(&p, x_max, &dim), "basis dimension");
  if (dim > cap) {
    throw StatusError(DICKE_ERROR_CAP, "dimension " + std::to_string(dim) + " at x_max=" +
                                           std::to_string(x_max) + " exceeds --cap " +
                                           std::to_string(cap));
  }
}

json config_json(const Config& c) {
  json j = json::object();
  j["command"] = c.command;
  j["omega"] = c.omega;
  j["omega0"] = c.omega0;
  j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  j["j"] = c.j;
  j["basis"] = c.basis;
  j["xmax"] = c.xmax;
  j["xmax_range"] = c.xmax_range;
  j["eps"] = c.eps;
  j["k"] = c.k;
  j["kmax"] = c.kmax ? json(*c.kmax) : json(nullptr);
  j["format"] = c.format;
  j["cap"] = c.cap;
  j["layer"] = c.layer;
  j["count"] = c.count;
  j["fit"] = c.fit;
  return j;
}

// ---------------------------------------------------------------------------
// Tables and serialization

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::string stem;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

std::string render_csv(const Table& t, const json& config) {
  std::string s = "# config: " + config.dump() + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ",";
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) s += format_double(v);
            else if constexpr (std::is_same_v<T, long long>) s += std::to_string(v);
            else s += v;
          },
          row[i]);
    }
    s += "\n";
  }
  return s;
}

std::string render_json(const Table& t, const json& config) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& cell : row) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              r.push_back(std::isfinite(v) ? json(v) : json(format_double(v)));
            } else {
              r.push_back(v);
            }
          },
          cell);
    }
    rows.push_back(std::move(r));
  }
  json doc = {{"config", config}, {"columns", t.columns}, {"rows", rows}};
  return doc.dump(1) + "\n";
}

// Writes every table or none: files go to temporaries first and are renamed
// once all of them have been written.
void write_tables(const std::vector<Table>& tables, const Config& c) {
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw StatusError(DICKE_ERROR_IO, "cannot create " + dir.string() + ": " + ec.message());

  const json config = config_json(c);
  const std::string ext = c.format == "json" ? ".json" : ".csv";
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&] {
    for (const auto& [tmp, final_path] : staged) fs::remove(tmp, ec);
  };
  for (const auto& t : tables) {
    const fs::path final_path = dir / (t.stem + ext);
    const fs::path tmp = dir / (t.stem + ext + ".partial");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    staged.emplace_back(tmp, final_path);
    out << (c.format == "json" ? render_json(t, config) : render_csv(t, config));
    out.close();
    if (!out) {
      discard();
      throw StatusError(DICKE_ERROR_IO, "cannot write " + tmp.string());
    }
  }
  for (const auto& [tmp, final_path] : staged) {
    fs::rename(tmp, final_path, ec);
    if (ec) {
      discard();
      throw StatusError(DICKE_ERROR_IO, "cannot rename " + tmp.string() + ": " + ec.message());
    }
  }
}

// Runs fn(0..n-1) on up to `jobs` threads. The first exception is rethrown.
void parallel_for(int jobs, std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Commands

std::vector<Table> run_spectrum(const Config& c) {
  require_single(c);
  if (c.xmax.size() != 1) throw ConfigError("spectrum: exactly one --xmax is required");
  const auto p = params_for(c, c.j.front());
  const int x_max = c.xmax.front();
  require_dim(p, x_max, c.cap);

  std::vector<Table> tables;
  for (const auto basis : bases_of(c)) {
    const auto energies = eigenvalues(p, basis, x_max, c.cap);
    Table t{std::string("spectrum_") + basis_name(basis), {"k", "E"}, {}};
    const std::size_t rows = c.kmax ? std::min<std::size_t>(*c.kmax, energies.size()) : energies.size();
    for (std::size_t i = 0; i < rows; ++i) {
      t.rows.push_back({static_cast<long long>(i + 1), energies[i]});
    }
    tables.push_back(std::move(t));
    if (c.dump_matrix) {
      fs::create_directories(c.out);
      const auto path = (fs::path(c.out) / (std::string("hamiltonian_") + basis_name(basis) + ".dkhm"));
      check(dicke_write_matrix(&p, basis, x_max, c.cap, path.string().c_str()), "matrix dump");
    }
  }
  return tables;
}

// Smallest truncation with ground-state delta_E below eps.
int converged_truncation(const dicke_params& p, dicke_basis basis, double eps, std::size_t cap) {
  dicke_search_options options{-1, 1, 400, cap};
  dicke_search_result result{};
  check(dicke_find_min_truncation(&p, basis, 1, eps, DICKE_CRITERION_ENERGY, &options, &result,
                                  nullptr, nullptr, 0),
        "truncation search");
  if (!result.converged) {
    throw StatusError(DICKE_ERROR_CAP, std::string("no ") + basis_name(basis) +
                                           " truncation up to 400 reaches delta_E < " +
                                           format_double(eps));
  }
  return result.x_max;
}

std::vector<Table> run_profile(const Config& c) {
  require_single(c);
  if (c.xmax.size() > 1) throw ConfigError("profile: at most one --xmax");
  if (c.eps.size() > 1) throw ConfigError("profile: at most one --eps");
  const auto p = params_for(c, c.j.front());
  const auto ks = c.k.empty() ? std::vector<long long>{1} : c.k;

  std::vector<Table> tables;
  for (const auto basis : bases_of(c)) {
    const int x_max = c.xmax.empty()
                          ? converged_truncation(p, basis, c.eps.empty() ? 1e-6 : c.eps.front(), c.cap)
                          : c.xmax.front();
    require_dim(p, x_max, c.cap);
    const auto s = solve(p, basis, x_max, c.cap);
    for (const auto k : ks) {
      if (k < 1) throw ConfigError("profile: --k must be >= 1");
      std::vector<double> prob(static_cast<std::size_t>(x_max) + 1);
      check(dicke_probability_profile(s.get(), static_cast<std::size_t>(k), prob.data(), prob.size()),
            "profile k=" + std::to_string(k));
      Table t{"profile_k" + std::to_string(k) + "_" + basis_name(basis), {"x", "P"}, {}};
      for (std::size_t x = 0; x < prob.size(); ++x) {
        t.rows.push_back({static_cast<long long>(x), prob[x]});
      }
      tables.push_back(std::move(t));
    }
  }
  return tables;
}

std::vector<Table> run_converge(const Config& c) {
  require_single(c);
  if (c.xmax.empty() && c.xmax_range.empty()) {
    throw ConfigError("converge: give --xmax and/or --xmax-range");
  }
  if (c.kmax && *c.kmax < 1) throw ConfigError("converge: state selection is empty (--kmax < 1)");
  const auto p = params_for(c, c.j.front());
  const auto eps = c.eps.empty() ? std::vector<double>{1e-6, 1e-4} : c.eps;
  for (double e : eps) {
    if (!(e > 0.0)) throw ConfigError("converge: tolerances must be positive");
  }
  const auto ks = c.k.empty() ? std::vector<long long>{1} : c.k;
  for (auto k : ks) {
    if (k < 1) throw ConfigError("converge: --k must be >= 1");
  }

  std::vector<Table> tables;
  for (const auto basis : bases_of(c)) {
    const std::string name = basis_name(basis);
    for (const int x_max : c.xmax) {
      if (x_max < 1) throw ConfigError("converge: --xmax must be >= 1 for delta_E");
      require_dim(p, x_max, c.cap);
      const auto s = solve(p, basis, x_max, c.cap);
      const auto upper = energies_of(s.get());
      const auto lower = eigenvalues(p, basis, x_max - 1, c.cap);
      const std::size_t rows = c.kmax ? std::min<std::size_t>(*c.kmax, upper.size()) : upper.size();

      Table states{"states_" + name + "_x" + std::to_string(x_max),
                   {"k", "E", "delta_P", "delta_E", "degenerate_suspect"}, {}};
      std::vector<double> dp(upper.size());
      std::vector<std::optional<double>> de(upper.size());
      for (std::size_t i = 0; i < upper.size(); ++i) {
        dp[i] = delta_p(s.get(), i + 1);
        if (i < lower.size()) de[i] = std::abs(upper[i] - lower[i]);
      }
      for (std::size_t i = 0; i < rows; ++i) {
        bool suspect = false;
        if (de[i]) {
          const double window = 10.0 * *de[i];
          suspect = (i > 0 && std::abs(upper[i] - upper[i - 1]) < window) ||
                    (i + 1 < upper.size() && std::abs(upper[i + 1] - upper[i]) < window);
        }
        states.rows.push_back({static_cast<long long>(i + 1), upper[i], dp[i],
                               de[i] ? Cell(*de[i]) : Cell(std::string("")),
                               static_cast<long long>(suspect)});
      }
      tables.push_back(std::move(states));

      Table counts{"counts_" + name + "_x" + std::to_string(x_max),
                   {"eps", "converged_P", "converged_P_prefix", "converged_E"}, {}};
      for (double e : eps) {
        std::size_t all = 0;
        std::size_t prefix = 0;
        check(dicke_count_converged(s.get(), e, &all), "count");
        check(dicke_count_converged_prefix(s.get(), e, &prefix), "count");
        long long by_e = 0;
        for (const auto& v : de) by_e += (v && *v < e) ? 1 : 0;
        counts.rows.push_back({e, static_cast<long long>(all), static_cast<long long>(prefix), by_e});
      }
      tables.push_back(std::move(counts));

      if (c.fit) {
        std::vector<double> xs;
        std::vector<double> ys;
        const double tol = eps.back();
        const std::size_t limit = c.kmax ? static_cast<std::size_t>(*c.kmax) : upper.size();
        for (std::size_t i = 0; i < upper.size() && xs.size() < limit; ++i) {
          if (!de[i] || !(*de[i] < tol) || !(*de[i] > 0.0) || !(dp[i] > 0.0)) continue;
          xs.push_back(std::log10(*de[i]));
          ys.push_back(-std::log10(dp[i]));
        }
        dicke_fit fit{};
        check(dicke_linear_fit(xs.data(), ys.data(), xs.size(), &fit), "energy fit");
        tables.push_back({"fit_energy_" + name + "_x" + std::to_string(x_max),
                          {"relation", "intercept", "slope", "rms_residual", "points"},
                          {{std::string("minus_log10_dP_vs_log10_dE"), fit.intercept, fit.slope,
                            fit.rms_residual, static_cast<long long>(fit.points)}}});
      }
    }

    if (!c.xmax_range.empty()) {
      const Range range = parse_range(c.xmax_range);
      require_dim(p, range.hi, c.cap);
      for (const auto k : ks) {
        const auto n = static_cast<std::size_t>(range.hi - range.lo + 1);
        std::vector<double> dp(n);
        std::vector<std::optional<double>> de(n);
        parallel_for(c.jobs, n, [&](std::size_t i) {
          const int x = range.lo + static_cast<int>(i);
          std::size_t dim = 0;
          check(dicke_basis_dim(&p, x, &dim), "basis dimension");
          if (dim < static_cast<std::size_t>(k)) return;
          const auto s = solve(p, basis, x, c.cap);
          dp[i] = delta_p(s.get(), static_cast<std::size_t>(k));
          if (x >= 1) {
            std::size_t lower_dim = 0;
            check(dicke_basis_dim(&p, x - 1, &lower_dim), "basis dimension");
            if (lower_dim >= static_cast<std::size_t>(k)) {
              double v = 0.0;
              check(dicke_delta_e(&p, basis, x, static_cast<std::size_t>(k), c.cap, &v), "delta_E");
              de[i] = v;
            }
          }
        });
        Table scan{"scan_k" + std::to_string(k) + "_" + name, {"x_max", "delta_P", "delta_E"}, {}};
        std::vector<double> xs;
        std::vector<double> ys;
        for (std::size_t i = 0; i < n; ++i) {
          const int x = range.lo + static_cast<int>(i);
          scan.rows.push_back({static_cast<long long>(x), dp[i], de[i] ? Cell(*de[i]) : Cell(std::string(""))});
          if (dp[i] > 0.0) {
            xs.push_back(x);
            ys.push_back(-std::log10(dp[i]));
          }
        }
        tables.push_back(std::move(scan));
        if (c.fit && xs.size() >= 2) {
          dicke_fit fit{};
          check(dicke_linear_fit(xs.data(), ys.data(), xs.size(), &fit), "truncation fit");
          tables.push_back({"fit_scan_k" + std::to_string(k) + "_" + name,
                            {"relation", "intercept", "slope", "rms_residual", "points"},
                            {{std::string("minus_log10_dP_vs_xmax"), fit.intercept, fit.slope,
                              fit.rms_residual, static_cast<long long>(fit.points)}}});
        }
      }
    }
  }
  return tables;
}

std::vector<Table> run_table1(const Config& c) {
  const auto& js = c.j;
  const auto& xs = c.xmax;
  const auto& eps = c.eps;
  const auto bases = bases_of(c);
  const bool prefix = c.count != "all";
  const auto reading = layer_of(c);
  for (double e : eps) {
    if (!(e > 0.0)) throw ConfigError("table1: tolerances must be positive");
  }

  struct Job {
    std::size_t row;
    std::size_t basis;
    dicke_params params;
    int run;
  };
  std::vector<Job> jobs;
  for (std::size_t ji = 0; ji < js.size(); ++ji) {
    const auto p = params_for(c, js[ji]);
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      int run = 0;
      check(dicke_probed_truncation(xs[xi], reading, &run), "truncation");
      require_dim(p, run, c.cap);
      for (std::size_t b = 0; b < bases.size(); ++b) jobs.push_back({ji * xs.size() + xi, b, p, run});
    }
  }

  // counts[row][basis][eps]
  std::vector<std::vector<std::vector<long long>>> counts(
      js.size() * xs.size(), std::vector<std::vector<long long>>(bases.size(), std::vector<long long>(eps.size())));
  parallel_for(c.jobs, jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    const auto s = solve(job.params, bases[job.basis], job.run, c.cap);
    for (std::size_t e = 0; e < eps.size(); ++e) {
      std::size_t n = 0;
      check(prefix ? dicke_count_converged_prefix(s.get(), eps[e], &n)
                   : dicke_count_converged(s.get(), eps[e], &n),
            "count");
      counts[job.row][job.basis][e] = static_cast<long long>(n);
    }
  });

  Table t{"table1", {"j", "x_max"}, {}};
  for (double e : eps) {
    for (const auto b : bases) t.columns.push_back(std::string(basis_name(b)) + "_eps_" + format_double(e));
  }
  for (std::size_t ji = 0; ji < js.size(); ++ji) {
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      std::vector<Cell> row{js[ji], static_cast<long long>(xs[xi])};
      for (std::size_t e = 0; e < eps.size(); ++e) {
        for (std::size_t b = 0; b < bases.size(); ++b) row.push_back(counts[ji * xs.size() + xi][b][e]);
      }
      t.rows.push_back(std::move(row));
    }
  }
  return {t};
}

std::vector<Table> run_fit(const Config& c) {
  if (c.j.size() != 1 || c.xmax.size() != 1 || c.eps.size() != 1) {
    throw ConfigError("fit: expects one --j, one --xmax and one --eps");
  }
  const auto p = params_for(c, c.j.front());
  const Range range = parse_range(c.xmax_range);
  const int energy_xmax = c.xmax.front();
  const double energy_tol = c.eps.front();
  if (!(energy_tol > 0.0)) throw ConfigError("fit: --eps must be positive");
  const long long max_states = *c.kmax;
  if (max_states < 1) throw ConfigError("fit: state selection is empty (--kmax < 1)");
  if (energy_xmax < 1) throw ConfigError("fit: --xmax must be >= 1");
  const auto reading = layer_of(c);
  const auto bases = bases_of(c);

  std::vector<Table> tables;
  Table summary{"fit", {"basis", "relation", "intercept", "slope", "rms_residual", "points"}, {}};
  for (const auto basis : bases) {
    const std::string name = basis_name(basis);

    // -log10 delta_P of the ground state against the truncation.
    const auto n = static_cast<std::size_t>(range.hi - range.lo + 1);
    std::vector<double> dp(n);
    int top_run = 0;
    check(dicke_probed_truncation(range.hi, reading, &top_run), "truncation");
    require_dim(p, std::max(top_run, energy_xmax), c.cap);
    parallel_for(c.jobs, n, [&](std::size_t i) {
      int run = 0;
      check(dicke_probed_truncation(range.lo + static_cast<int>(i), reading, &run), "truncation");
      dp[i] = delta_p(solve(p, basis, run, c.cap).get(), 1);
    });
    Table scan{"fit_truncation_" + name, {"x_max", "delta_P", "minus_log10_delta_P"}, {}};
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) {
      const int x = range.lo + static_cast<int>(i);
      const double y = dp[i] > 0.0 ? -std::log10(dp[i]) : std::numeric_limits<double>::infinity();
      scan.rows.push_back({static_cast<long long>(x), dp[i], y});
      if (dp[i] > 0.0) {
        xs.push_back(x);
        ys.push_back(y);
      }
    }
    dicke_fit fit{};
    check(dicke_linear_fit(xs.data(), ys.data(), xs.size(), &fit), "truncation fit");
    summary.rows.push_back({name, std::string("minus_log10_dP_vs_xmax"), fit.intercept, fit.slope,
                            fit.rms_residual, static_cast<long long>(fit.points)});
    tables.push_back(std::move(scan));

    // -log10 delta_P against log10 delta_E over the energy-converged states.
    const auto s = solve(p, basis, energy_xmax, c.cap);
    const auto upper = energies_of(s.get());
    const auto lower = eigenvalues(p, basis, energy_xmax - 1, c.cap);
    Table points{"fit_energy_" + name, {"k", "delta_E", "delta_P", "log10_delta_E", "minus_log10_delta_P"}, {}};
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < lower.size() && points.rows.size() < static_cast<std::size_t>(max_states); ++i) {
      const double de = std::abs(upper[i] - lower[i]);
      if (!(de < energy_tol)) continue;
      const double d = delta_p(s.get(), i + 1);
      const double lx = de > 0.0 ? std::log10(de) : -std::numeric_limits<double>::infinity();
      const double ly = d > 0.0 ? -std::log10(d) : std::numeric_limits<double>::infinity();
      points.rows.push_back({static_cast<long long>(i + 1), de, d, lx, ly});
      if (de > 0.0 && d > 0.0) {
        xs.push_back(lx);
        ys.push_back(ly);
      }
    }
    check(dicke_linear_fit(xs.data(), ys.data(), xs.size(), &fit), "energy fit");
    summary.rows.push_back({name, std::string("minus_log10_dP_vs_log10_dE"), fit.intercept, fit.slope,
                            fit.rms_residual, static_cast<long long>(fit.points)});
    tables.push_back(std::move(points));
  }
  tables.push_back(std::move(summary));
  return tables;
}

// ---------------------------------------------------------------------------

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--omega", c.omega, "boson frequency")->envname("DICKE_OMEGA")->capture_default_str();
  sub->add_option("--omega0", c.omega0, "atomic excitation energy")->envname("DICKE_OMEGA0")->capture_default_str();
  sub->add_option("--gamma", c.gamma, "atom-field coupling")->envname("DICKE_GAMMA");
  sub->add_option("--j", c.j, "pseudo-spin length (multiple of 1/2)")->envname("DICKE_J")->delimiter(',');
  sub->add_option("--basis", c.basis, "fock, coherent or both")
      ->envname("DICKE_BASIS")
      ->check(CLI::IsMember({"fock", "coherent", "both"}))
      ->capture_default_str();
  sub->add_option("--xmax", c.xmax, "truncation (n_max or N_max)")->envname("DICKE_XMAX")->delimiter(',');
  sub->add_option("--xmax-range", c.xmax_range, "truncation scan lo:hi")->envname("DICKE_XMAX_RANGE");
  sub->add_option("--eps", c.eps, "tolerance(s)")->envname("DICKE_EPS")->delimiter(',');
  sub->add_option("--k", c.k, "state number(s), 1 = ground state")->envname("DICKE_K")->delimiter(',');
  sub->add_option("--kmax", c.kmax, "limit on the number of states reported")->envname("DICKE_KMAX");
  sub->add_option("--out", c.out, "output directory")->envname("DICKE_OUT")->capture_default_str();
  sub->add_option("--format", c.format, "csv or json")
      ->envname("DICKE_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--cap", c.cap, "largest matrix dimension allowed")->envname("DICKE_CAP")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "worker threads")->envname("DICKE_JOBS")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_reading(CLI::App* sub, Config& c, bool with_count) {
  sub->add_option("--layer", c.layer, "delta_P layer probed for a truncation: top or next (default next)")
      ->envname("DICKE_LAYER")
      ->check(CLI::IsMember({"top", "next"}));
  if (with_count) {
    sub->add_option("--count", c.count, "count all converged states or the prefix from k=1 (default prefix)")
        ->envname("DICKE_COUNT")
        ->check(CLI::IsMember({"all", "prefix"}));
  }
}

// Fills per-command defaults so the recorded config is the effective one.
void apply_defaults(Config& c) {
  if (c.command == "table1") {
    if (!c.gamma) c.gamma = 0.5;
    if (c.j.empty()) c.j = {10, 20, 40};
    if (c.xmax.empty()) c.xmax = {10, 15, 20};
    if (c.eps.empty()) c.eps = {1e-6, 1e-4};
    if (c.layer.empty()) c.layer = "next";
    if (c.count.empty()) c.count = "prefix";
  } else if (c.command == "fit") {
    if (!c.gamma) c.gamma = 0.5;
    if (c.j.empty()) c.j = {40};
    if (c.xmax.empty()) c.xmax = {20};
    if (c.xmax_range.empty()) c.xmax_range = "2:20";
    if (c.eps.empty()) c.eps = {1e-4};
    if (!c.kmax) c.kmax = 250;
    if (c.layer.empty()) c.layer = "next";
    if (c.basis == "both") c.basis = "coherent";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalization of the Dicke model in Fock and coherent bases"};
  app.require_subcommand(1);
  Config config;

  auto* spectrum = app.add_subcommand("spectrum", "ascending eigenvalues -> spectrum_<basis>");
  add_common(spectrum, config);
  spectrum->add_flag("--dump-matrix", config.dump_matrix, "also write hamiltonian_<basis>.dkhm");

  auto* profile = app.add_subcommand("profile", "P_{k,x} -> profile_k<k>_<basis>");
  add_common(profile, config);

  auto* converge = app.add_subcommand("converge", "per-state delta_P/delta_E tables and truncation scans");
  add_common(converge, config);
  converge->add_flag("--fit", config.fit, "append log-space fits");

  auto* table1 = app.add_subcommand("table1", "converged-state counts over (j, x_max, eps, basis)");
  add_common(table1, config);

  auto* fit = app.add_subcommand("fit", "log-space fits of delta_P vs truncation and vs delta_E");
  add_common(fit, config);

  add_reading(table1, config, true);
  add_reading(fit, config, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  config.command = app.get_subcommands().front()->get_name();
  apply_defaults(config);
  try {
    std::vector<Table> tables;
    if (config.command == "spectrum") tables = run_spectrum(config);
    else if (config.command == "profile") tables = run_profile(config);
    else if (config.command == "converge") tables = run_converge(config);
    else if (config.command == "table1") tables = run_table1(config);
    else tables = run_fit(config);
    write_tables(tables, config);
    for (const auto& t : tables) std::cout << t.stem << (config.format == "json" ? ".json" : ".csv") << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "dicke: " << e.what() << "\n";
    return kExitConfig;
  } catch (const StatusError& e) {
    std::cerr << "dicke: " << e.what() << "\n";
    return exit_code_for(e.status());
  } catch (const std::exception& e) {
    std::cerr << "dicke: " << e.what() << "\n";
    return kExitFailure;
  }
}
