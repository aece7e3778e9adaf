#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "simcf/scenario.hpp"

using namespace simcf;

TEST_CASE("default configuration is valid and exposes derived quantities") {
  ScenarioConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.wavelength() == doctest::Approx(0.0107068735).epsilon(1e-12));
  // 5-wavelength stack split over 2 layers.
  CHECK(cfg.layer_gap_m() == doctest::Approx(0.02676718375).epsilon(1e-12));
  CHECK(cfg.atoms_per_layer() == 25);
}

TEST_CASE("thermal noise power from density and bandwidth") {
  // -174 dBm/Hz over 10 MHz -> 3.981e-14 W (independently recomputed).
  CHECK(noise_power(-174.0, 1e7) ==
        doctest::Approx(3.9810717055349693e-14).epsilon(1e-12));
  // Doubling bandwidth doubles the noise power.
  CHECK(noise_power(-174.0, 2e7) ==
        doctest::Approx(2.0 * noise_power(-174.0, 1e7)).epsilon(1e-12));
}

TEST_CASE("distance-power path gain") {
  ScenarioConfig cfg;
  // Reference gain at d0 = 1 m for a 28 GHz carrier.
  CHECK(path_loss(1.0 + 1e-9, cfg) ==
        doctest::Approx(7.259481705540117e-07).epsilon(1e-6));
  CHECK(path_loss(10.0, cfg) ==
        doctest::Approx(2.2956496821830556e-10).epsilon(1e-12));
  CHECK(path_loss(137.2, cfg) ==
        doctest::Approx(2.3997512431725226e-14).epsilon(1e-12));
  // Monotone decreasing in distance.
  CHECK(path_loss(50.0, cfg) > path_loss(51.0, cfg));
  CHECK_THROWS_AS(path_loss(0.5, cfg), std::invalid_argument);
  CHECK_THROWS_AS(path_loss(1.0, cfg), std::invalid_argument);
}

TEST_CASE("json scenario parsing accepts the full schema") {
  std::istringstream in(R"({
    "counts": {"L": 3, "U": 4, "K": 2, "M": 5, "Nx": 6, "Ny": 7},
    "radio": {"carrier_freq_hz": 2.8e10, "bandwidth_hz": 1e7,
              "noise_density_dbm_hz": -170.0, "p_max_w": 0.5},
    "geometry": {"area_side_m": 100.0, "ap_height_m": 12.0,
                 "ue_height_m": 1.5, "sim_thickness_lambda": 4.0,
                 "element_spacing_lambda": 0.25},
    "pathloss": {"exponent": 3.0, "d0_m": 2.0},
    "opt": {"ao_rel_tol": 1e-2, "inner_rel_tol": 1e-3, "ao_max": 7,
            "pga_max": 11, "power_max": 13, "pga_init_step": 0.2,
            "pga_decay": 0.25, "multistart": 2},
    "seed": 99
  })");
  const ScenarioConfig cfg = load_scenario(in);
  CHECK(cfg.num_aps == 3);
  CHECK(cfg.antennas_per_ap == 4);
  CHECK(cfg.num_ues == 2);
  CHECK(cfg.num_layers == 5);
  CHECK(cfg.atoms_x == 6);
  CHECK(cfg.atoms_y == 7);
  CHECK(cfg.carrier_freq_hz == doctest::Approx(2.8e10));
  CHECK(cfg.noise_density_dbm_hz == doctest::Approx(-170.0));
  CHECK(cfg.p_max_w == doctest::Approx(0.5));
  CHECK(cfg.area_side_m == doctest::Approx(100.0));
  CHECK(cfg.sim_thickness_lambda == doctest::Approx(4.0));
  CHECK(cfg.element_spacing_lambda == doctest::Approx(0.25));
  CHECK(cfg.pathloss_exponent == doctest::Approx(3.0));
  CHECK(cfg.ref_distance_m == doctest::Approx(2.0));
  CHECK(cfg.opt.ao_max == 7);
  CHECK(cfg.opt.pga_decay == doctest::Approx(0.25));
  CHECK(cfg.opt.multistart == 2);
  CHECK(cfg.seed == 99);
}

TEST_CASE("partial configs keep defaults; parse errors name offending keys") {
  {
    std::istringstream in(R"({"counts": {"K": 7}})");
    const ScenarioConfig cfg = load_scenario(in);
    CHECK(cfg.num_ues == 7);
    CHECK(cfg.num_aps == 6);  // untouched default
  }
  {
    std::istringstream in(R"({"counts": {"Z": 1}})");
    CHECK_THROWS_WITH_AS(load_scenario(in),
                         doctest::Contains("counts.Z"), ConfigError);
  }
  {
    std::istringstream in(R"({"radar": {}})");
    CHECK_THROWS_WITH_AS(load_scenario(in), doctest::Contains("radar"),
                         ConfigError);
  }
  {
    std::istringstream in(R"({"counts": {"L": "six"}})");
    CHECK_THROWS_WITH_AS(load_scenario(in), doctest::Contains("counts.L"),
                         ConfigError);
  }
  {
    std::istringstream in(R"({"counts": {"M": 0}})");
    CHECK_THROWS_WITH_AS(load_scenario(in), doctest::Contains("counts.M"),
                         ConfigError);
  }
  {
    std::istringstream in("{ not json");
    CHECK_THROWS_AS(load_scenario(in), ConfigError);
  }
  {
    std::istringstream in(R"({"pathloss": {"exponent": 2.0}})");
    CHECK_THROWS_WITH_AS(load_scenario(in),
                         doctest::Contains("pathloss.exponent"), ConfigError);
  }
  {
    std::istringstream in(R"({"opt": {"pga_decay": 1.0}})");
    CHECK_THROWS_WITH_AS(load_scenario(in),
                         doctest::Contains("opt.pga_decay"), ConfigError);
  }
}

TEST_CASE("scenario json serialization round-trips") {
  ScenarioConfig cfg;
  cfg.num_ues = 9;
  cfg.opt.multistart = 3;
  cfg.seed = 1234;
  std::istringstream in(scenario_to_json(cfg));
  const ScenarioConfig back = load_scenario(in);
  CHECK(back.num_ues == 9);
  CHECK(back.opt.multistart == 3);
  CHECK(back.seed == 1234);
  CHECK(back.carrier_freq_hz == doctest::Approx(cfg.carrier_freq_hz));
}

TEST_CASE("degenerate area pins the single AP at the origin") {
  ScenarioConfig cfg;
  cfg.num_aps = 1;
  cfg.num_ues = 1;
  cfg.area_side_m = 0.0;
  const Layout layout = build_scenario(cfg, 0);
  CHECK(layout.ap_positions.size() == 1);
  CHECK(layout.ap_positions[0].x() == doctest::Approx(0.0));
  CHECK(layout.ap_positions[0].y() == doctest::Approx(0.0));
  CHECK(layout.ap_positions[0].z() == doctest::Approx(15.0));
  CHECK(layout.ue_positions[0].z() == doctest::Approx(1.65));
}

TEST_CASE("feed antennas form a centred half-wavelength line at AP height") {
  ScenarioConfig cfg;
  const Layout layout = build_scenario(cfg, 0);
  REQUIRE(layout.antenna_offsets.size() == 2);
  const double half = 0.25 * cfg.wavelength();
  CHECK(layout.antenna_offsets[0].y() == doctest::Approx(-half));
  CHECK(layout.antenna_offsets[1].y() == doctest::Approx(half));
  for (const auto& off : layout.antenna_offsets) {
    CHECK(off.x() == doctest::Approx(0.0));
    CHECK(off.z() == doctest::Approx(0.0));
  }
  // Absolute antenna height equals the AP height.
  CHECK(layout.antenna_position(0, 0).z() == doctest::Approx(15.0));
}

TEST_CASE("element grid is centred with the configured pitch") {
  ScenarioConfig cfg;  // 5x5 at half-wavelength pitch
  const Layout layout = build_scenario(cfg, 0);
  REQUIRE(layout.atom_offsets.size() == 25);
  const double pitch = 0.5 * cfg.wavelength();
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& off : layout.atom_offsets) {
    CHECK(off.x() == doctest::Approx(0.0));
    centroid += off;
  }
  CHECK(centroid.norm() == doctest::Approx(0.0).epsilon(1e-12));
  // Neighbouring elements along the second grid axis differ by one pitch.
  CHECK((layout.atom_offsets[1] - layout.atom_offsets[0]).norm() ==
        doctest::Approx(pitch));
  // Layer planes advance by the stack gap.
  CHECK(layout.atom_position(0, 2, 0).x() -
            layout.atom_position(0, 1, 0).x() ==
        doctest::Approx(layout.layer_gap_m));
}

TEST_CASE("AP drop is independent of the user count, and draws are keyed") {
  ScenarioConfig cfg;
  ScenarioConfig more_users = cfg;
  more_users.num_ues = 11;
  const Layout a = build_scenario(cfg, 4);
  const Layout b = build_scenario(more_users, 4);
  REQUIRE(a.ap_positions.size() == b.ap_positions.size());
  for (size_t i = 0; i < a.ap_positions.size(); ++i)
    CHECK((a.ap_positions[i] - b.ap_positions[i]).norm() ==
          doctest::Approx(0.0));

  const Layout same = build_scenario(cfg, 4);
  CHECK((a.ap_positions[0] - same.ap_positions[0]).norm() ==
        doctest::Approx(0.0));
  const Layout other = build_scenario(cfg, 5);
  CHECK((a.ap_positions[0] - other.ap_positions[0]).norm() > 0.0);
}

TEST_CASE("positions stay inside the drop square") {
  ScenarioConfig cfg;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const Layout layout = build_scenario(cfg, trial);
    for (const auto& p : layout.ap_positions) {
      CHECK(p.x() >= 0.0);
      CHECK(p.x() < cfg.area_side_m);
      CHECK(p.y() >= 0.0);
      CHECK(p.y() < cfg.area_side_m);
    }
    for (const auto& p : layout.ue_positions) {
      CHECK(p.x() >= 0.0);
      CHECK(p.x() < cfg.area_side_m);
    }
  }
}
