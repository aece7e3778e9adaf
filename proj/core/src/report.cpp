#include "simcf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace simcf {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int median_outer_iters(const std::vector<RunReport>& runs) {
  std::vector<int> outers;
  outers.reserve(runs.size());
  for (const RunReport& r : runs) outers.push_back(r.outer_iters);
  std::sort(outers.begin(), outers.end());
  return outers.empty() ? 0 : outers[(outers.size() - 1) / 2];
}

}  // namespace

SweepSpec parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("sweep spec '" + text + "' must look like PARAM=v1,v2");
  SweepSpec spec;
  spec.param = text.substr(0, eq);
  static const std::vector<std::string> known = {"L", "U",       "K",    "M",
                                                 "N", "N_total", "P_max"};
  if (std::find(known.begin(), known.end(), spec.param) == known.end())
    throw ConfigError("unknown sweep parameter '" + spec.param +
                      "' (expected L, U, K, M, N, N_total or P_max)");
  std::stringstream values(text.substr(eq + 1));
  std::string item;
  while (std::getline(values, item, ',')) {
    if (item.empty()) continue;
    double v = 0.0;
    try {
      size_t used = 0;
      v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("sweep value '" + item + "' is not a number");
    }
    if (!(v > 0.0))
      throw ConfigError("sweep values must be positive (got '" + item + "')");
    if (spec.param != "P_max" && v != std::floor(v))
      throw ConfigError("sweep parameter " + spec.param +
                        " takes integer values (got '" + item + "')");
    spec.values.push_back(v);
  }
  if (spec.values.empty())
    throw ConfigError("sweep spec '" + text + "' lists no values");
  return spec;
}

std::pair<int, int> most_square_factors(int n) {
  if (n < 1) throw std::invalid_argument("most_square_factors: n must be >= 1");
  for (int a = static_cast<int>(std::sqrt(static_cast<double>(n))); a >= 1;
       --a) {
    if (n % a == 0) return {a, n / a};
  }
  return {1, n};
}

namespace {

void set_grid(ScenarioConfig& cfg, int n, std::ostream* log) {
  const auto [nx, ny] = most_square_factors(n);
  if (log && nx == 1 && ny > 3)
    *log << "warning: element count " << n
         << " is prime; using a 1x" << ny << " line\n";
  else if (log && nx != ny)
    *log << "note: laying out " << n << " elements per layer as " << nx << "x"
         << ny << "\n";
  cfg.atoms_x = nx;
  cfg.atoms_y = ny;
}

}  // namespace

ScenarioConfig apply_sweep_value(const ScenarioConfig& base,
                                 const SweepSpec& spec, double value,
                                 std::ostream* log) {
  ScenarioConfig cfg = base;
  const int iv = static_cast<int>(std::llround(value));
  if (spec.param == "L") {
    cfg.num_aps = iv;
    if (spec.fixed_n_total) {
      const long total = *spec.fixed_n_total;
      const int per_layer =
          static_cast<int>(std::llround(static_cast<double>(total) / iv));
      if (log && per_layer * static_cast<long>(iv) != total)
        *log << "warning: total element budget " << total
             << " not divisible by L=" << iv << "; using " << per_layer
             << " per layer\n";
      set_grid(cfg, per_layer, log);
    }
  } else if (spec.param == "U") {
    cfg.antennas_per_ap = iv;
  } else if (spec.param == "K") {
    cfg.num_ues = iv;
  } else if (spec.param == "M") {
    cfg.num_layers = iv;
  } else if (spec.param == "N") {
    set_grid(cfg, iv, log);
  } else if (spec.param == "N_total") {
    const int per_layer = static_cast<int>(
        std::llround(value / static_cast<double>(cfg.num_aps)));
    if (log &&
        per_layer * static_cast<long>(cfg.num_aps) != std::llround(value))
      *log << "warning: total element budget " << value
           << " not divisible by L=" << cfg.num_aps << "; using " << per_layer
           << " per layer\n";
    set_grid(cfg, per_layer, log);
  } else if (spec.param == "P_max") {
    cfg.p_max_w = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + spec.param + "'");
  }
  cfg.validate();
  return cfg;
}

void write_results_csv(const std::vector<ResultBlock>& blocks,
                       std::ostream& out) {
  out << kResultsCsvHeader << '\n';
  for (const ResultBlock& block : blocks) {
    const ScenarioConfig& cfg = block.config;
    const std::string dims = std::to_string(cfg.num_aps) + ',' +
                             std::to_string(cfg.antennas_per_ap) + ',' +
                             std::to_string(cfg.num_ues) + ',' +
                             std::to_string(cfg.num_layers) + ',' +
                             std::to_string(cfg.atoms_per_layer());
    for (const SchemeStats& st : block.stats) {
      const std::string token = scheme_token(st.scheme);
      double block_min = 0.0, block_max = 0.0;
      for (size_t i = 0; i < st.runs.size(); ++i) {
        const RunReport& r = st.runs[i];
        const double ue_min = r.rates.rate.minCoeff();
        const double ue_max = r.rates.rate.maxCoeff();
        block_min = i == 0 ? ue_min : std::min(block_min, ue_min);
        block_max = i == 0 ? ue_max : std::max(block_max, ue_max);
        out << token << ',' << r.trial << ',' << dims << ','
            << fmt_g(r.rates.sum_rate) << ',' << fmt_g(ue_min) << ','
            << fmt_g(ue_max) << ',' << r.outer_iters << ",0.000," << r.seed
            << '\n';
      }
      out << token << ",-1," << dims << ',' << fmt_g(st.sum_rate_mean) << ','
          << fmt_g(block_min) << ',' << fmt_g(block_max) << ','
          << median_outer_iters(st.runs) << ",0.000,"
          << (st.runs.empty() ? 0 : st.runs.front().seed) << ','
          << fmt_g(st.sum_rate_mean) << ',' << fmt_g(st.sum_rate_std) << '\n';
    }
  }
}

void write_trace_csv(const std::vector<ResultBlock>& blocks,
                     std::ostream& out) {
  out << "scheme,trial,L,U,K,M,N,iter,sum_rate_bpshz\n";
  for (const ResultBlock& block : blocks) {
    const ScenarioConfig& cfg = block.config;
    const std::string dims = std::to_string(cfg.num_aps) + ',' +
                             std::to_string(cfg.antennas_per_ap) + ',' +
                             std::to_string(cfg.num_ues) + ',' +
                             std::to_string(cfg.num_layers) + ',' +
                             std::to_string(cfg.atoms_per_layer());
    for (const SchemeStats& st : block.stats) {
      const std::string token = scheme_token(st.scheme);
      for (const RunReport& r : st.runs) {
        for (size_t i = 0; i < r.ao_trace.size(); ++i) {
          out << token << ',' << r.trial << ',' << dims << ',' << i << ','
              << fmt_g(r.ao_trace[i]) << '\n';
        }
      }
    }
  }
}

void write_meta_json(const std::vector<ResultBlock>& blocks,
                     const std::string& invocation, int threads,
                     std::ostream& out) {
  nlohmann::ordered_json j;
  j["invocation"] = invocation;
  j["threads"] = threads;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const ResultBlock& block : blocks) {
    nlohmann::ordered_json jb;
    if (block.sweep_value)
      jb["sweep_value"] = *block.sweep_value;
    else
      jb["sweep_value"] = nullptr;
    jb["config"] = nlohmann::ordered_json::parse(
        scenario_to_json(block.config));
    jb["schemes"] = nlohmann::ordered_json::array();
    for (const SchemeStats& st : block.stats) {
      nlohmann::ordered_json js;
      js["scheme"] = scheme_token(st.scheme);
      js["trials"] = st.runs.size();
      js["sum_rate_mean"] = st.sum_rate_mean;
      js["sum_rate_std"] = st.sum_rate_std;
      double wall = 0.0;
      nlohmann::ordered_json per_trial = nlohmann::ordered_json::array();
      for (const RunReport& r : st.runs) {
        wall += r.wall_time_s;
        per_trial.push_back(r.wall_time_s);
      }
      js["wall_time_s_total"] = wall;
      js["wall_time_s_per_trial"] = per_trial;
      jb["schemes"].push_back(std::move(js));
    }
    j["blocks"].push_back(std::move(jb));
  }
  out << j.dump(2) << '\n';
}

void write_summary(const std::vector<ResultBlock>& blocks,
                   const std::optional<SweepSpec>& sweep, std::ostream& out) {
  char line[256];
  for (const ResultBlock& block : blocks) {
    if (block.sweep_value && sweep) {
      out << "== " << sweep->param << " = " << fmt_g(*block.sweep_value)
          << " ==\n";
    }
    std::snprintf(line, sizeof(line), "%-12s %6s %12s %10s %10s %10s %9s\n",
                  "scheme", "trials", "mean_bpshz", "std", "min_ue", "max_ue",
                  "wall_s");
    out << line;
    for (const SchemeStats& st : block.stats) {
      double ue_min = 0.0, ue_max = 0.0, wall = 0.0;
      for (size_t i = 0; i < st.runs.size(); ++i) {
        const RunReport& r = st.runs[i];
        ue_min = i == 0 ? r.rates.rate.minCoeff()
                        : std::min(ue_min, r.rates.rate.minCoeff());
        ue_max = i == 0 ? r.rates.rate.maxCoeff()
                        : std::max(ue_max, r.rates.rate.maxCoeff());
        wall += r.wall_time_s;
      }
      std::snprintf(line, sizeof(line),
                    "%-12s %6zu %12.4f %10.4f %10.4f %10.4f %9.2f\n",
                    scheme_token(st.scheme).c_str(), st.runs.size(),
                    st.sum_rate_mean, st.sum_rate_std, ue_min, ue_max, wall);
      out << line;
    }
  }
  if (sweep && blocks.size() > 1) {
    // Peak of the mean over the swept axis, per scheme.
    for (size_t s = 0; s < blocks.front().stats.size(); ++s) {
      double best_value = 0.0, best_mean = 0.0;
      for (size_t b = 0; b < blocks.size(); ++b) {
        const double mean = blocks[b].stats[s].sum_rate_mean;
        if (b == 0 || mean > best_mean) {
          best_mean = mean;
          best_value = blocks[b].sweep_value.value_or(0.0);
        }
      }
      out << "peak mean sum rate for "
          << scheme_token(blocks.front().stats[s].scheme) << ": "
          << fmt_g(best_mean) << " bit/s/Hz at " << sweep->param << " = "
          << fmt_g(best_value) << '\n';
    }
  }
}

int iterations_to_fraction(const std::vector<double>& trace, double fraction) {
  if (trace.empty()) return -1;
  const double target = fraction * trace.back();
  for (size_t i = 0; i < trace.size(); ++i)
    if (trace[i] >= target) return static_cast<int>(i);
  return static_cast<int>(trace.size()) - 1;
}

}  // namespace simcf
