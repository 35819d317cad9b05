#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "gilda/datagen.hpp"
#include "gilda/lda.hpp"
#include "gilda/optim.hpp"
#include "gilda/types.hpp"

namespace gilda {

enum class SweepKind { DimSweep, ProjSweep };
enum class Method { Eigenvector, TwoStep, Pmo };

inline const char* to_string(SweepKind kind) {
  return kind == SweepKind::DimSweep ? "dim_sweep" : "proj_sweep";
}

inline const char* to_string(Method method) {
  switch (method) {
    case Method::Eigenvector: return "eigenvector";
    case Method::TwoStep: return "two_step";
    default: return "pmo";
  }
}

/// One sweep experiment: runs the eigenvector baseline, the two-step method
/// and proxy matrix optimization on identical data and initial conditions
/// for every (sweep value, repetition) cell.
struct SweepSpec {
  SweepKind kind = SweepKind::DimSweep;
  std::vector<int> sweep_values;
  int fixed_dim = 100;  // data dimension when kind == ProjSweep
  int fixed_proj = 3;   // projection dimension when kind == DimSweep
  int repetitions = 1;
  DataSpec data;  // template; dim and seed are overridden per cell
  OptConfig opt;

  void validate() const {
    detail::require(!sweep_values.empty(), "SweepSpec: sweep_values is empty");
    detail::require(repetitions >= 1, "SweepSpec: repetitions must be >= 1");
    data.validate();
    opt.validate();
    for (int v : sweep_values) {
      detail::require(v >= 1, "SweepSpec: sweep values must be positive");
      const int dim = kind == SweepKind::DimSweep ? v : fixed_dim;
      const int proj = kind == SweepKind::DimSweep ? fixed_proj : v;
      detail::require(proj >= 1 && proj < dim,
                      "SweepSpec: every sweep value must keep p < m");
    }
  }
};

/// One (sweep value, repetition, method) result row.
struct CellRecord {
  int sweep_value = 0;
  int repetition = 0;
  Method method = Method::Eigenvector;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double normalized_improvement = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_time_ms = 0.0;
  std::string status = "ok";
};

struct AggregateRow {
  int sweep_value = 0;
  Method method = Method::Eigenvector;
  double median_improvement = std::numeric_limits<double>::quiet_NaN();
  double iqr_improvement = std::numeric_limits<double>::quiet_NaN();
  int n_ok = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<CellRecord> records;      // ordered by (value, repetition, method)
  std::vector<AggregateRow> aggregates; // ordered by (value, method)
};

/// Normalized improvement of a manifold method over the eigenvector
/// baseline: -(f_method - f_eig) / |f_eig|. Positive values mean the method
/// reached a lower (better) objective than the baseline.
inline double normalized_improvement(double f_orth, double f_eig) {
  if (!(std::abs(f_eig) >= 1e-12))
    throw DegenerateBaselineError(
        "normalized_improvement: |f_eig| < 1e-12, baseline objective is "
        "degenerate");
  const double improvement = -(f_orth - f_eig) / std::abs(f_eig);
  return improvement == 0.0 ? 0.0 : improvement;  // canonicalize -0
}

/// Per-cell seed: a splitmix64 chain over (base seed, sweep value,
/// repetition), so any single cell can be regenerated in isolation.
inline std::uint64_t cell_seed(std::uint64_t base, int sweep_value,
                               int repetition) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(sweep_value));
  h = splitmix64(h ^ static_cast<std::uint64_t>(repetition));
  return h;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

/// Linear-interpolation quantile of a sorted sample (the usual "type 7").
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (sorted.size() == 1) return sorted.front();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

/// Runs all three methods on one prepared scatter pair. The optimizers
/// start from the eigenvector solution (PMO's proxy is initialized with
/// that same basis, so retract(P0) equals the two-step start). Failures
/// are captured per method in the status field; a baseline objective with
/// |f_eig| < 1e-12 marks the whole cell degenerate-baseline.
inline std::array<CellRecord, 3> run_methods_on_scatter(
    const ScatterPair& scatter, int proj, const OptConfig& opt,
    bool measure_time = false, const CellRecord& prototype = {}) {
  std::array<CellRecord, 3> cell{prototype, prototype, prototype};
  cell[0].method = Method::Eigenvector;
  cell[1].method = Method::TwoStep;
  cell[2].method = Method::Pmo;

  std::optional<GrassmannPoint> baseline;
  double f_eig = std::numeric_limits<double>::quiet_NaN();
  try {
    const auto start = std::chrono::steady_clock::now();
    baseline = eigenvector_solution(scatter, proj);
    f_eig = trace_ratio_objective(*baseline, scatter);
    if (measure_time) cell[0].wall_time_ms = detail::elapsed_ms(start);
    cell[0].objective = f_eig;
    cell[0].normalized_improvement = 0.0;
  } catch (const Error& e) {
    for (auto& rec : cell) rec.status = e.tag();
    return cell;
  } catch (const std::invalid_argument&) {
    for (auto& rec : cell) rec.status = "invalid-input";
    return cell;
  }

  if (std::abs(f_eig) < 1e-12) {
    for (auto& rec : cell) rec.status = "degenerate-baseline";
    cell[0].normalized_improvement = std::numeric_limits<double>::quiet_NaN();
    return cell;
  }

  auto record_run = [&](CellRecord& rec, auto&& run_method) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const OptRun run = run_method();
      if (measure_time) rec.wall_time_ms = detail::elapsed_ms(start);
      rec.objective = run.final_objective;
      rec.normalized_improvement =
          normalized_improvement(run.final_objective, f_eig);
      rec.iterations = run.iterations_used;
    } catch (const Error& e) {
      rec.status = e.tag();
    } catch (const std::invalid_argument&) {
      rec.status = "invalid-input";
    }
  };

  record_run(cell[1],
             [&] { return two_step_optimize(scatter, *baseline, opt); });
  record_run(cell[2],
             [&] { return pmo_optimize(scatter, baseline->basis(), opt); });
  return cell;
}

namespace detail {

inline int thread_cap_from_env() {
  const char* value = std::getenv("GILDA_THREADS");
  if (!value) return 0;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (end == value || n < 0) return 0;
  return static_cast<int>(std::min<long>(n, 256));
}

inline std::vector<AggregateRow> compute_aggregates(
    const SweepSpec& spec, const std::vector<CellRecord>& records) {
  std::vector<AggregateRow> rows;
  constexpr std::array<Method, 3> methods{Method::Eigenvector, Method::TwoStep,
                                          Method::Pmo};
  for (int value : spec.sweep_values) {
    for (Method method : methods) {
      std::vector<double> improvements;
      for (const CellRecord& rec : records)
        if (rec.sweep_value == value && rec.method == method &&
            rec.status == "ok")
          improvements.push_back(rec.normalized_improvement);
      std::sort(improvements.begin(), improvements.end());
      AggregateRow row;
      row.sweep_value = value;
      row.method = method;
      row.n_ok = static_cast<int>(improvements.size());
      row.median_improvement = quantile_sorted(improvements, 0.5);
      row.iqr_improvement = quantile_sorted(improvements, 0.75) -
                            quantile_sorted(improvements, 0.25);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace detail

/// Executes the sweep cell by cell. Cells are independent; the env var
/// GILDA_THREADS caps cell parallelism (0 or unset runs sequentially) and
/// records are merged in (value, repetition, method) order, so the output
/// bytes never depend on scheduling. Wall times are only measured when
/// measure_time is set, keeping default output reproducible run to run.
inline SweepResult run_sweep(const SweepSpec& spec, bool measure_time = false) {
  spec.validate();
  const int reps = spec.repetitions;
  const int n_values = static_cast<int>(spec.sweep_values.size());
  const int n_cells = n_values * reps;

  SweepResult out;
  out.spec = spec;
  out.records.assign(static_cast<std::size_t>(n_cells) * 3, CellRecord{});

  auto run_cell = [&](int ci) {
    const int vi = ci / reps;
    const int rep = ci % reps;
    const int value = spec.sweep_values[static_cast<std::size_t>(vi)];
    const int dim = spec.kind == SweepKind::DimSweep ? value : spec.fixed_dim;
    const int proj = spec.kind == SweepKind::DimSweep ? spec.fixed_proj : value;

    CellRecord proto;
    proto.sweep_value = value;
    proto.repetition = rep;

    DataSpec data = spec.data;
    data.dim = dim;
    data.seed = cell_seed(spec.data.seed, value, rep);

    std::array<CellRecord, 3> cell{proto, proto, proto};
    try {
      const LabeledDataset ds = generate_dataset(data);
      const ScatterPair scatter = scatter_matrices(ds);
      cell = run_methods_on_scatter(scatter, proj, spec.opt, measure_time,
                                    proto);
    } catch (const Error& e) {
      for (std::size_t k = 0; k < 3; ++k) cell[k].status = e.tag();
    } catch (const std::exception&) {
      for (std::size_t k = 0; k < 3; ++k) cell[k].status = "error";
    }
    cell[0].method = Method::Eigenvector;
    cell[1].method = Method::TwoStep;
    cell[2].method = Method::Pmo;
    for (std::size_t k = 0; k < 3; ++k)
      out.records[static_cast<std::size_t>(ci) * 3 + k] = cell[k];
  };

  const int workers = std::min(detail::thread_cap_from_env(), n_cells);
  if (workers <= 1) {
    for (int ci = 0; ci < n_cells; ++ci) run_cell(ci);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int ci; (ci = next.fetch_add(1)) < n_cells;) run_cell(ci);
      });
    for (auto& t : pool) t.join();
  }

  out.aggregates = detail::compute_aggregates(spec, out.records);
  return out;
}

// ---------------------------------------------------------------------------
// Result serialization
// ---------------------------------------------------------------------------

enum class OutputFormat { Csv, Json };

namespace detail {

/// Reals are serialized with 17 significant digits so files round-trip
/// bit exactly.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_real(double v) {
  if (!std::isfinite(v)) return "null";
  return format_real(v);
}

inline std::string records_csv(const SweepResult& result) {
  std::string text =
      "sweep_kind,sweep_value,repetition,method,objective,"
      "normalized_improvement,iterations,wall_time_ms,status\n";
  const char* kind = to_string(result.spec.kind);
  for (const CellRecord& rec : result.records) {
    text += kind;
    text += ',';
    text += std::to_string(rec.sweep_value);
    text += ',';
    text += std::to_string(rec.repetition);
    text += ',';
    text += to_string(rec.method);
    text += ',';
    text += format_real(rec.objective);
    text += ',';
    text += format_real(rec.normalized_improvement);
    text += ',';
    text += std::to_string(rec.iterations);
    text += ',';
    text += format_real(rec.wall_time_ms);
    text += ',';
    text += rec.status;
    text += '\n';
  }
  return text;
}

inline std::string spec_json(const SweepSpec& spec) {
  std::string text = "{";
  text += "\"sweep_kind\": \"" + std::string(to_string(spec.kind)) + "\", ";
  text += "\"sweep_values\": [";
  for (std::size_t i = 0; i < spec.sweep_values.size(); ++i) {
    if (i) text += ", ";
    text += std::to_string(spec.sweep_values[i]);
  }
  text += "], ";
  if (spec.kind == SweepKind::DimSweep)
    text += "\"fixed_proj\": " + std::to_string(spec.fixed_proj) + ", ";
  else
    text += "\"fixed_dim\": " + std::to_string(spec.fixed_dim) + ", ";
  text += "\"repetitions\": " + std::to_string(spec.repetitions) + ", ";
  text += "\"data\": {";
  text += "\"dim\": " + std::to_string(spec.data.dim) + ", ";
  text += "\"n_classes\": " + std::to_string(spec.data.n_classes) + ", ";
  text += "\"n_per_class\": " + std::to_string(spec.data.n_per_class) + ", ";
  text += "\"ecc_mean\": " + json_real(spec.data.ecc_mean) + ", ";
  text += "\"mean_std\": " + json_real(spec.data.mean_std) + ", ";
  text += "\"seed\": " + std::to_string(spec.data.seed);
  text += "}, ";
  text += "\"opt\": {";
  text += "\"step_size\": " + json_real(spec.opt.step_size) + ", ";
  text += "\"max_iters\": " + std::to_string(spec.opt.max_iters) + ", ";
  text += "\"rel_tol\": " + json_real(spec.opt.rel_tol) + ", ";
  text += "\"svd_gap_min\": " + json_real(spec.opt.svd_gap_min) + ", ";
  text += "\"momentum\": " + json_real(spec.opt.momentum);
  text += "}}";
  return text;
}

inline std::string records_json(const SweepResult& result) {
  std::string text = "{\n  \"spec\": " + spec_json(result.spec) +
                     ",\n  \"records\": [\n";
  const char* kind = to_string(result.spec.kind);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const CellRecord& rec = result.records[i];
    text += "    {\"sweep_kind\": \"" + std::string(kind) + "\", ";
    text += "\"sweep_value\": " + std::to_string(rec.sweep_value) + ", ";
    text += "\"repetition\": " + std::to_string(rec.repetition) + ", ";
    text += "\"method\": \"" + std::string(to_string(rec.method)) + "\", ";
    text += "\"objective\": " + json_real(rec.objective) + ", ";
    text +=
        "\"normalized_improvement\": " + json_real(rec.normalized_improvement) +
        ", ";
    text += "\"iterations\": " + std::to_string(rec.iterations) + ", ";
    text += "\"wall_time_ms\": " + json_real(rec.wall_time_ms) + ", ";
    text += "\"status\": \"" + rec.status + "\"}";
    text += (i + 1 < result.records.size()) ? ",\n" : "\n";
  }
  text += "  ]\n}\n";
  return text;
}

}  // namespace detail

/// Writes the per-cell records to path. CSV columns are exactly
///
///   sweep_kind,sweep_value,repetition,method,objective,
///   normalized_improvement,iterations,wall_time_ms,status
///
/// and JSON mirrors the same records plus the full sweep spec. Reals carry
/// 17 significant digits; non-finite values appear as "nan" in CSV and null
/// in JSON. I/O failures raise std::runtime_error naming the path.
inline void emit_results(const SweepResult& result, OutputFormat format,
                         const std::string& path) {
  const std::string text = format == OutputFormat::Csv
                               ? detail::records_csv(result)
                               : detail::records_json(result);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("emit_results: cannot open '" + path +
                             "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out)
    throw std::runtime_error("emit_results: write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

/// Desk-scale d-sweep: data dimension over {4,...,64} at r = 3, 4 classes
/// of 500 points (2000 total), eccentricity mean 2, 10 repetitions.
inline SweepSpec desk_dim_sweep(std::uint64_t seed = 42) {
  SweepSpec spec;
  spec.kind = SweepKind::DimSweep;
  spec.sweep_values = {4, 8, 16, 32, 64};
  spec.fixed_proj = 3;
  spec.repetitions = 10;
  spec.data.n_classes = 4;
  spec.data.n_per_class = 500;
  spec.data.ecc_mean = 2.0;
  spec.data.mean_std = 1.0;
  spec.data.seed = seed;
  spec.opt.step_size = 2.0;
  spec.opt.max_iters = 1000;
  spec.opt.rel_tol = 1e-9;
  return spec;
}

/// Full-scale d-sweep: dimensions up to 1024, 20 repetitions.
inline SweepSpec paper_dim_sweep(std::uint64_t seed = 42) {
  SweepSpec spec = desk_dim_sweep(seed);
  spec.sweep_values = {4, 8, 16, 32, 64, 128, 256, 512, 1024};
  spec.repetitions = 20;
  return spec;
}

/// Desk-scale r-sweep: projection dimension over {2,5,10,20} at d = 100,
/// reduced to 10 classes of 200 points, eccentricity mean 5, class means
/// with standard deviation 5/d, 10 repetitions.
inline SweepSpec desk_proj_sweep(std::uint64_t seed = 42) {
  SweepSpec spec;
  spec.kind = SweepKind::ProjSweep;
  spec.sweep_values = {2, 5, 10, 20};
  spec.fixed_dim = 100;
  spec.repetitions = 10;
  spec.data.n_classes = 10;
  spec.data.n_per_class = 200;
  spec.data.ecc_mean = 5.0;
  spec.data.mean_std = 5.0 / 100.0;
  spec.data.seed = seed;
  spec.opt.step_size = 100.0;
  spec.opt.max_iters = 1000;
  spec.opt.rel_tol = 1e-9;
  return spec;
}

/// Full-scale r-sweep: r in {1,...,80} with 100 classes of 1000 points.
inline SweepSpec paper_proj_sweep(std::uint64_t seed = 42) {
  SweepSpec spec = desk_proj_sweep(seed);
  spec.sweep_values = {1, 2, 5, 10, 20, 40, 80};
  spec.repetitions = 20;
  spec.data.n_classes = 100;
  spec.data.n_per_class = 1000;
  return spec;
}

}  // namespace gilda
