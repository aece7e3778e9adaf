#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simcf/driver.hpp"
#include "simcf/scenario.hpp"

namespace simcf {

/// Stable results-CSV header.  Aggregate rows use trial = -1 and append two
/// trailing fields, sum_rate_mean and sum_rate_std.
inline constexpr const char* kResultsCsvHeader =
    "scheme,trial,L,U,K,M,N,sum_rate_bpshz,rate_ue_min,rate_ue_max,"
    "outer_iters,wall_time_s,seed";

/// One sweep axis: which scalar to vary and the values to take.
struct SweepSpec {
  std::string param;           // L, U, K, M, N, N_total or P_max
  std::vector<double> values;  // positive; integral for the count axes
  std::optional<long> fixed_n_total;  // with param == L: N per layer =
                                      // fixed_n_total / L
};

/// Parse "PARAM=v1,v2,..." into a SweepSpec (fixed_n_total attached by the
/// caller).  Throws ConfigError on unknown parameter names, empty or
/// non-positive value lists, or non-integral values for count axes.
SweepSpec parse_sweep(const std::string& text);

/// Most-square factor pair (nx, ny) with nx * ny = n and |nx - ny| minimal,
/// nx <= ny.  Primes > 3 yield (1, n).
std::pair<int, int> most_square_factors(int n);

/// Apply one swept value to a copy of the base config.  Non-square element
/// counts are laid out on the most-square factor pair; any adjustment or
/// 1-by-N fallback is reported through `log` (one line per message).
ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 const SweepSpec& spec, double value,
                                 std::ostream* log);

/// One aggregated block of a results file: the config it ran under plus the
/// per-scheme statistics (and, for sweeps, the swept value).
struct ResultBlock {
  ScenarioConfig config;
  std::optional<double> sweep_value;
  std::vector<SchemeStats> stats;
};

/// Render blocks to the results CSV (deterministic: the wall_time_s column
/// is always 0.000; measured times live in the summary and sidecar).
void write_results_csv(const std::vector<ResultBlock>& blocks,
                       std::ostream& out);

/// Per-iteration objective traces, long format:
/// scheme,trial,iter,sum_rate_bpshz (plus the block's dims).
void write_trace_csv(const std::vector<ResultBlock>& blocks,
                     std::ostream& out);

/// JSON sidecar with the fully-resolved config (per sweep point), the
/// invocation, and measured wall times.
void write_meta_json(const std::vector<ResultBlock>& blocks,
                     const std::string& invocation, int threads,
                     std::ostream& out);

/// Human-readable per-scheme table; for sweeps, also the per-scheme argmax
/// of the swept value.
void write_summary(const std::vector<ResultBlock>& blocks,
                   const std::optional<SweepSpec>& sweep, std::ostream& out);

/// First outer iteration whose objective reaches `fraction` of the trace's
/// final value (index into the trace, 0 = initial state; -1 for an empty
/// trace).
int iterations_to_fraction(const std::vector<double>& trace, double fraction);

}  // namespace simcf
