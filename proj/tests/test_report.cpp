#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>

#include "helpers.hpp"
#include "simcf/report.hpp"

using namespace simcf;
using simcf_test::tiny_config;

namespace {

RunReport make_run(std::uint64_t trial, double sum, std::vector<double> ue,
                   int outers, std::uint64_t seed,
                   std::vector<double> trace = {}) {
  RunReport r;
  r.scheme = parse_scheme("aga-rp-ep");
  r.trial = trial;
  r.seed = seed;
  r.outer_iters = outers;
  r.rates.sum_rate = sum;
  r.rates.rate = Eigen::Map<Eigen::VectorXd>(ue.data(),
                                             static_cast<long>(ue.size()));
  r.rates.gamma = r.rates.rate;
  r.ao_trace = trace.empty() ? std::vector<double>{sum} : std::move(trace);
  r.wall_time_s = 0.125;
  return r;
}

ResultBlock make_block() {
  ResultBlock block;
  block.config = tiny_config(1, 2, 2, 1, 2, 2, 9);
  SchemeStats st;
  st.scheme = parse_scheme("aga-rp-ep");
  st.runs.push_back(make_run(0, 3.5, {1.5, 2.0}, 0, 9, {1.0, 3.5}));
  st.runs.push_back(make_run(1, 2.5, {1.0, 1.5}, 2, 9));
  st.sum_rate_mean = 3.0;
  st.sum_rate_std = std::sqrt(0.5);
  block.stats.push_back(std::move(st));
  return block;
}

}  // namespace

TEST_CASE("sweep specs parse and reject malformed input") {
  const SweepSpec s = parse_sweep("L=2,4,8");
  CHECK(s.param == "L");
  REQUIRE(s.values.size() == 3);
  CHECK(s.values[2] == 8.0);
  CHECK_FALSE(s.fixed_n_total.has_value());

  const SweepSpec p = parse_sweep("P_max=0.1,0.4");
  CHECK(p.param == "P_max");
  CHECK(p.values[1] == 0.4);

  CHECK_THROWS_AS(parse_sweep("L2,4"), ConfigError);      // no '='
  CHECK_THROWS_AS(parse_sweep("Q=1"), ConfigError);       // unknown axis
  CHECK_THROWS_AS(parse_sweep("L="), ConfigError);        // empty list
  CHECK_THROWS_AS(parse_sweep("L=2.5"), ConfigError);     // non-integral
  CHECK_THROWS_AS(parse_sweep("L=-2"), ConfigError);      // non-positive
  CHECK_THROWS_AS(parse_sweep("K=abc"), ConfigError);     // not a number
  CHECK_THROWS_AS(parse_sweep("N=4,x"), ConfigError);
}

TEST_CASE("factor pairs are as square as possible") {
  CHECK(most_square_factors(25) == std::pair<int, int>{5, 5});
  CHECK(most_square_factors(50) == std::pair<int, int>{5, 10});
  CHECK(most_square_factors(36) == std::pair<int, int>{6, 6});
  CHECK(most_square_factors(12) == std::pair<int, int>{3, 4});
  CHECK(most_square_factors(7) == std::pair<int, int>{1, 7});
  CHECK(most_square_factors(2) == std::pair<int, int>{1, 2});
  CHECK(most_square_factors(1) == std::pair<int, int>{1, 1});
  CHECK_THROWS_AS(most_square_factors(0), std::invalid_argument);
}

TEST_CASE("sweep application adjusts the config and logs layout choices") {
  const ScenarioConfig base = tiny_config(6, 2, 4, 2, 5, 5);

  SUBCASE("simple scalar axes") {
    SweepSpec s;
    s.param = "U";
    CHECK(apply_sweep_value(base, s, 4, nullptr).antennas_per_ap == 4);
    s.param = "K";
    CHECK(apply_sweep_value(base, s, 6, nullptr).num_ues == 6);
    s.param = "M";
    CHECK(apply_sweep_value(base, s, 3, nullptr).num_layers == 3);
    s.param = "P_max";
    CHECK(apply_sweep_value(base, s, 0.4, nullptr).p_max_w == 0.4);
  }

  SUBCASE("per-layer element axis picks a near-square grid") {
    SweepSpec s;
    s.param = "N";
    std::ostringstream log;
    const ScenarioConfig c = apply_sweep_value(base, s, 12, &log);
    CHECK(c.atoms_x == 3);
    CHECK(c.atoms_y == 4);
    CHECK(log.str() ==
          "note: laying out 12 elements per layer as 3x4\n");
    std::ostringstream prime_log;
    const ScenarioConfig cp = apply_sweep_value(base, s, 7, &prime_log);
    CHECK(cp.atoms_x == 1);
    CHECK(cp.atoms_y == 7);
    CHECK(prime_log.str() ==
          "warning: element count 7 is prime; using a 1x7 line\n");
  }

  SUBCASE("AP axis with a fixed total element budget") {
    SweepSpec s;
    s.param = "L";
    s.fixed_n_total = 300;
    std::ostringstream log;
    const ScenarioConfig c = apply_sweep_value(base, s, 6, &log);
    CHECK(c.num_aps == 6);
    CHECK(c.atoms_x == 5);
    CHECK(c.atoms_y == 10);
    CHECK(log.str() ==
          "note: laying out 50 elements per layer as 5x10\n");
  }

  SUBCASE("indivisible budgets round and warn") {
    SweepSpec s;
    s.param = "N_total";
    std::ostringstream log;
    const ScenarioConfig c = apply_sweep_value(base, s, 100, &log);
    // 100 / 6 rounds to 17 per layer; 17 is prime.
    CHECK(c.atoms_per_layer() == 17);
    CHECK(log.str().find("not divisible by L=6") != std::string::npos);
    CHECK(log.str().find("1x17") != std::string::npos);
  }
}

TEST_CASE("results CSV matches the golden byte layout") {
  std::ostringstream out;
  write_results_csv({make_block()}, out);
  CHECK(out.str() ==
        "scheme,trial,L,U,K,M,N,sum_rate_bpshz,rate_ue_min,rate_ue_max,"
        "outer_iters,wall_time_s,seed\n"
        "aga-rp-ep,0,1,2,2,1,4,3.5,1.5,2,0,0.000,9\n"
        "aga-rp-ep,1,1,2,2,1,4,2.5,1,1.5,2,0.000,9\n"
        "aga-rp-ep,-1,1,2,2,1,4,3,1,2,0,0.000,9,3,0.707106781187\n");
}

TEST_CASE("trace CSV lists every objective sample in long format") {
  std::ostringstream out;
  write_trace_csv({make_block()}, out);
  CHECK(out.str() ==
        "scheme,trial,L,U,K,M,N,iter,sum_rate_bpshz\n"
        "aga-rp-ep,0,1,2,2,1,4,0,1\n"
        "aga-rp-ep,0,1,2,2,1,4,1,3.5\n"
        "aga-rp-ep,1,1,2,2,1,4,0,2.5\n");
}

TEST_CASE("meta sidecar carries invocation, threads, config and wall times") {
  std::ostringstream out;
  write_meta_json({make_block()}, "simcf run --trials 2", 3, out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["invocation"] == "simcf run --trials 2");
  CHECK(j["threads"] == 3);
  REQUIRE(j["blocks"].size() == 1);
  CHECK(j["blocks"][0]["sweep_value"].is_null());
  CHECK(j["blocks"][0]["config"]["counts"]["L"] == 1);
  const auto& js = j["blocks"][0]["schemes"][0];
  CHECK(js["scheme"] == "aga-rp-ep");
  CHECK(js["trials"] == 2);
  CHECK(js["sum_rate_mean"] == 3.0);
  CHECK(js["wall_time_s_total"] == doctest::Approx(0.25));
  REQUIRE(js["wall_time_s_per_trial"].size() == 2);
}

TEST_CASE("summary table and sweep peaks") {
  ResultBlock b1 = make_block();
  ResultBlock b2 = make_block();
  SweepSpec spec;
  spec.param = "L";
  spec.values = {1, 2};
  b1.sweep_value = 1;
  b2.sweep_value = 2;
  b2.stats[0].sum_rate_mean = 4.0;
  std::ostringstream out;
  write_summary({b1, b2}, spec, out);
  const std::string text = out.str();
  CHECK(text.find("== L = 1 ==") != std::string::npos);
  CHECK(text.find("== L = 2 ==") != std::string::npos);
  CHECK(text.find("aga-rp-ep") != std::string::npos);
  CHECK(text.find("peak mean sum rate for aga-rp-ep: 4 bit/s/Hz at L = 2") !=
        std::string::npos);
}

TEST_CASE("iterations-to-fraction finds the first qualifying index") {
  CHECK(iterations_to_fraction({1.0, 2.0, 3.0, 4.0}, 0.75) == 2);
  CHECK(iterations_to_fraction({1.0, 2.0, 3.0, 4.0}, 1.0) == 3);
  CHECK(iterations_to_fraction({5.0}, 0.99) == 0);
  CHECK(iterations_to_fraction({}, 0.5) == -1);
  CHECK(iterations_to_fraction({2.0, 2.0}, 0.99) == 0);
}
