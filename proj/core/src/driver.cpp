#include "simcf/driver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "simcf/channel.hpp"
#include "simcf/pga.hpp"
#include "simcf/power.hpp"

namespace simcf {

SchemeId parse_scheme(const std::string& token) {
  for (const SchemeId& s : all_schemes())
    if (scheme_token(s) == token) return s;
  throw ConfigError("unknown scheme token '" + token +
                    "' (expected one of aga-ao,nua-ao,aga-sim,nua-sim,"
                    "aga-power,nua-power,aga-rp-ep,nua-rp-ep)");
}

std::string scheme_token(const SchemeId& scheme) {
  std::string t = scheme.assoc == AssocRule::kAga ? "aga-" : "nua-";
  switch (scheme.opt) {
    case OptimizerKind::kAo: return t + "ao";
    case OptimizerKind::kSimOpt: return t + "sim";
    case OptimizerKind::kPowerOpt: return t + "power";
    case OptimizerKind::kRpEp: return t + "rp-ep";
  }
  throw std::logic_error("scheme_token: bad optimizer");
}

std::vector<SchemeId> all_schemes() {
  std::vector<SchemeId> v;
  for (AssocRule a : {AssocRule::kAga, AssocRule::kNua})
    for (OptimizerKind o : {OptimizerKind::kAo, OptimizerKind::kSimOpt,
                            OptimizerKind::kPowerOpt, OptimizerKind::kRpEp})
      v.push_back({a, o});
  return v;
}

RunReport run_scheme(const ScenarioConfig& cfg, std::uint64_t trial,
                     SchemeId scheme) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();

  const Layout layout = build_scenario(cfg, trial);
  const PropagationSet prop = build_propagation(layout, cfg);
  const CorrelationMatrix corr = build_correlation(layout, cfg);
  RngStream channel_rng(cfg.seed, trial, "channels");
  const ChannelSet channels = sample_channels(layout, cfg, corr, channel_rng);
  const DistanceTensor D = distance_tensor(layout);
  const AssociationMatrix A =
      scheme.assoc == AssocRule::kAga ? aga(D) : nua(D);

  const double noise_w = cfg.noise_power_w();
  const PowerAllocation p_equal = equal_power(cfg);
  RngStream phase_rng(cfg.seed, trial, "phase-init");
  const PhaseState phi0 = random_phases(cfg, phase_rng);
  RngStream start_rng(cfg.seed, trial, "pga-starts");

  RunReport report;
  report.scheme = scheme;
  report.seed = cfg.seed;
  report.trial = trial;
  report.assoc_cost_m = association_cost(A, D);

  switch (scheme.opt) {
    case OptimizerKind::kRpEp: {
      report.rates = sum_rate(channels, phi0, prop, A, p_equal, noise_w);
      report.ao_trace = {report.rates.sum_rate};
      report.outer_iters = 0;
      break;
    }
    case OptimizerKind::kPowerOpt: {
      const StackedSystem s = build_stacked(channels, phi0, prop, A, p_equal);
      auto [p_opt, trace] =
          power_control(p_equal, s, noise_w, cfg.p_max_w, cfg.opt);
      report.rates = sum_rate(channels, phi0, prop, A, p_opt, noise_w);
      report.ao_trace = trace.sum_rate;
      report.outer_iters = trace.outer_iters;
      report.power_iters = trace.inner_iters;
      break;
    }
    case OptimizerKind::kSimOpt: {
      PgaResult r = pga_optimize(phi0, channels, prop, A, p_equal, noise_w,
                                 cfg, cfg.opt.multistart, &start_rng);
      report.rates = sum_rate(channels, r.phases, prop, A, p_equal, noise_w);
      report.ao_trace = r.trace;
      report.outer_iters = r.accepted_iters;
      report.pga_iters = r.total_iters;
      break;
    }
    case OptimizerKind::kAo: {
      PowerAllocation p = p_equal;
      PhaseState phi = phi0;
      double rate = sum_rate(channels, phi, prop, A, p, noise_w).sum_rate;
      report.ao_trace = {rate};
      for (int outer = 0; outer < cfg.opt.ao_max; ++outer) {
        const StackedSystem s = build_stacked(channels, phi, prop, A, p);
        auto [p_next, ptrace] =
            power_control(p, s, noise_w, cfg.p_max_w, cfg.opt);
        p = std::move(p_next);
        report.power_iters += ptrace.inner_iters;

        // Random restarts only help before the phases carry any structure;
        // later rounds warm-start from the current state.
        const int starts = outer == 0 ? cfg.opt.multistart : 1;
        PgaResult r = pga_optimize(phi, channels, prop, A, p, noise_w, cfg,
                                   starts, &start_rng);
        phi = std::move(r.phases);
        report.pga_iters += r.total_iters;

        const double next = sum_rate(channels, phi, prop, A, p, noise_w).sum_rate;
        report.ao_trace.push_back(next);
        ++report.outer_iters;
        const double gain = next - rate;
        rate = next;
        if (gain < cfg.opt.ao_rel_tol * std::max(std::abs(rate), 1e-12)) break;
      }
      report.rates = sum_rate(channels, phi, prop, A, p, noise_w);
      break;
    }
  }

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

std::vector<SchemeStats> monte_carlo(const ScenarioConfig& cfg,
                                     const std::vector<SchemeId>& schemes,
                                     int trials, int max_threads) {
  if (trials < 1)
    throw std::invalid_argument("monte_carlo: trials must be >= 1");
  cfg.validate();

  struct Job {
    int scheme_idx;
    int trial;
  };
  std::vector<Job> jobs;
  jobs.reserve(schemes.size() * trials);
  for (int s = 0; s < static_cast<int>(schemes.size()); ++s)
    for (int t = 0; t < trials; ++t) jobs.push_back({s, t});

  std::vector<std::vector<RunReport>> results(
      schemes.size(), std::vector<RunReport>(trials));

  int threads = max_threads > 0
                    ? max_threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, static_cast<int>(jobs.size()));

  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        results[jobs[i].scheme_idx][jobs[i].trial] =
            run_scheme(cfg, jobs[i].trial, schemes[jobs[i].scheme_idx]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<SchemeStats> stats;
  stats.reserve(schemes.size());
  for (size_t s = 0; s < schemes.size(); ++s) {
    SchemeStats st;
    st.scheme = schemes[s];
    st.runs = std::move(results[s]);  // already in trial order
    double mean = 0.0;
    for (const RunReport& r : st.runs) mean += r.rates.sum_rate;
    mean /= trials;
    double var = 0.0;
    for (const RunReport& r : st.runs) {
      const double d = r.rates.sum_rate - mean;
      var += d * d;
    }
    st.sum_rate_mean = mean;
    st.sum_rate_std = trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0;
    stats.push_back(std::move(st));
  }
  return stats;
}

}  // namespace simcf
