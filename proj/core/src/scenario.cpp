#include "simcf/scenario.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

namespace simcf {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_key(const std::string& what) { throw ConfigError(what); }

void require_object(const ordered_json& j, const std::string& key) {
  if (!j.is_object())
    bad_key("config key '" + key + "' must be a JSON object");
}

/// Reject keys outside the allowed set, naming the offender.
void check_known(const ordered_json& j, const std::string& section,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (item.key() == a) ok = true;
    if (!ok)
      bad_key("unknown config key '" +
              (section.empty() ? item.key() : section + "." + item.key()) +
              "'");
  }
}

template <typename T>
void read_field(const ordered_json& j, const std::string& section,
                const char* key, T& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  const std::string full = section.empty() ? key : section + "." + key;
  try {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() && !v.is_number_unsigned())
        bad_key("config key '" + full + "' must be an integer");
    } else {
      if (!v.is_number())
        bad_key("config key '" + full + "' must be a number");
    }
    out = v.template get<T>();
  } catch (const nlohmann::json::exception&) {
    bad_key("config key '" + full + "' has an invalid value");
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0)) bad_key(std::string("config key '") + name + "' must be > 0");
}

void check_at_least(int v, int lo, const char* name) {
  if (v < lo)
    bad_key(std::string("config key '") + name + "' must be >= " +
            std::to_string(lo));
}

}  // namespace

double noise_power(double noise_density_dbm_hz, double bandwidth_hz) {
  const double dbm = noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz);
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double ScenarioConfig::noise_power_w() const {
  return noise_power(noise_density_dbm_hz, bandwidth_hz);
}

double path_loss(double distance_m, const ScenarioConfig& cfg) {
  if (!(distance_m > cfg.ref_distance_m))
    throw std::invalid_argument(
        "path_loss: distance_m must exceed ref_distance_m (" +
        std::to_string(distance_m) + " <= " +
        std::to_string(cfg.ref_distance_m) + ")");
  const double lam = cfg.wavelength();
  const double gain_ref =
      std::pow(lam / (4.0 * std::numbers::pi * cfg.ref_distance_m), 2);
  return gain_ref *
         std::pow(distance_m / cfg.ref_distance_m, -cfg.pathloss_exponent);
}

void ScenarioConfig::validate() const {
  check_at_least(num_aps, 1, "counts.L");
  check_at_least(antennas_per_ap, 1, "counts.U");
  check_at_least(num_ues, 1, "counts.K");
  check_at_least(num_layers, 1, "counts.M");
  check_at_least(atoms_x, 1, "counts.Nx");
  check_at_least(atoms_y, 1, "counts.Ny");

  check_positive(carrier_freq_hz, "radio.carrier_freq_hz");
  check_positive(bandwidth_hz, "radio.bandwidth_hz");
  check_positive(p_max_w, "radio.p_max_w");

  if (area_side_m < 0.0)
    bad_key("config key 'geometry.area_side_m' must be >= 0");
  if (ap_height_m < 0.0)
    bad_key("config key 'geometry.ap_height_m' must be >= 0");
  if (ue_height_m < 0.0)
    bad_key("config key 'geometry.ue_height_m' must be >= 0");
  check_positive(sim_thickness_lambda, "geometry.sim_thickness_lambda");
  check_positive(element_spacing_lambda, "geometry.element_spacing_lambda");

  if (!(pathloss_exponent > 2.0))
    bad_key("config key 'pathloss.exponent' must be > 2");
  check_positive(ref_distance_m, "pathloss.d0_m");

  check_positive(opt.ao_rel_tol, "opt.ao_rel_tol");
  check_positive(opt.inner_rel_tol, "opt.inner_rel_tol");
  check_positive(opt.fd_step, "opt.fd_step");
  check_at_least(opt.ao_max, 1, "opt.ao_max");
  check_at_least(opt.pga_max, 1, "opt.pga_max");
  check_at_least(opt.power_max, 1, "opt.power_max");
  check_positive(opt.pga_init_step, "opt.pga_init_step");
  if (!(opt.pga_decay > 0.0 && opt.pga_decay < 1.0))
    bad_key("config key 'opt.pga_decay' must lie in (0, 1)");
  check_at_least(opt.multistart, 1, "opt.multistart");
}

ScenarioConfig load_scenario(std::istream& in) {
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad_key(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(j, "<root>");
  check_known(j, "", {"counts", "radio", "geometry", "pathloss", "opt", "seed"});

  ScenarioConfig cfg;
  if (j.contains("counts")) {
    const auto& c = j.at("counts");
    require_object(c, "counts");
    check_known(c, "counts", {"L", "U", "K", "M", "Nx", "Ny"});
    read_field(c, "counts", "L", cfg.num_aps);
    read_field(c, "counts", "U", cfg.antennas_per_ap);
    read_field(c, "counts", "K", cfg.num_ues);
    read_field(c, "counts", "M", cfg.num_layers);
    read_field(c, "counts", "Nx", cfg.atoms_x);
    read_field(c, "counts", "Ny", cfg.atoms_y);
  }
  if (j.contains("radio")) {
    const auto& r = j.at("radio");
    require_object(r, "radio");
    check_known(r, "radio",
                {"carrier_freq_hz", "bandwidth_hz", "noise_density_dbm_hz",
                 "p_max_w"});
    read_field(r, "radio", "carrier_freq_hz", cfg.carrier_freq_hz);
    read_field(r, "radio", "bandwidth_hz", cfg.bandwidth_hz);
    read_field(r, "radio", "noise_density_dbm_hz", cfg.noise_density_dbm_hz);
    read_field(r, "radio", "p_max_w", cfg.p_max_w);
  }
  if (j.contains("geometry")) {
    const auto& g = j.at("geometry");
    require_object(g, "geometry");
    check_known(g, "geometry",
                {"area_side_m", "ap_height_m", "ue_height_m",
                 "sim_thickness_lambda", "element_spacing_lambda"});
    read_field(g, "geometry", "area_side_m", cfg.area_side_m);
    read_field(g, "geometry", "ap_height_m", cfg.ap_height_m);
    read_field(g, "geometry", "ue_height_m", cfg.ue_height_m);
    read_field(g, "geometry", "sim_thickness_lambda", cfg.sim_thickness_lambda);
    read_field(g, "geometry", "element_spacing_lambda",
               cfg.element_spacing_lambda);
  }
  if (j.contains("pathloss")) {
    const auto& p = j.at("pathloss");
    require_object(p, "pathloss");
    check_known(p, "pathloss", {"exponent", "d0_m"});
    read_field(p, "pathloss", "exponent", cfg.pathloss_exponent);
    read_field(p, "pathloss", "d0_m", cfg.ref_distance_m);
  }
  if (j.contains("opt")) {
    const auto& o = j.at("opt");
    require_object(o, "opt");
    check_known(o, "opt",
                {"ao_rel_tol", "inner_rel_tol", "ao_max", "pga_max",
                 "power_max", "pga_init_step", "pga_decay", "multistart"});
    read_field(o, "opt", "ao_rel_tol", cfg.opt.ao_rel_tol);
    read_field(o, "opt", "inner_rel_tol", cfg.opt.inner_rel_tol);
    read_field(o, "opt", "ao_max", cfg.opt.ao_max);
    read_field(o, "opt", "pga_max", cfg.opt.pga_max);
    read_field(o, "opt", "power_max", cfg.opt.power_max);
    read_field(o, "opt", "pga_init_step", cfg.opt.pga_init_step);
    read_field(o, "opt", "pga_decay", cfg.opt.pga_decay);
    read_field(o, "opt", "multistart", cfg.opt.multistart);
  }
  read_field(j, "", "seed", cfg.seed);

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_key("cannot open config file '" + path + "'");
  return load_scenario(in);
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  ordered_json j;
  j["counts"] = {{"L", cfg.num_aps},     {"U", cfg.antennas_per_ap},
                 {"K", cfg.num_ues},     {"M", cfg.num_layers},
                 {"Nx", cfg.atoms_x},    {"Ny", cfg.atoms_y}};
  j["radio"] = {{"carrier_freq_hz", cfg.carrier_freq_hz},
                {"bandwidth_hz", cfg.bandwidth_hz},
                {"noise_density_dbm_hz", cfg.noise_density_dbm_hz},
                {"p_max_w", cfg.p_max_w}};
  j["geometry"] = {{"area_side_m", cfg.area_side_m},
                   {"ap_height_m", cfg.ap_height_m},
                   {"ue_height_m", cfg.ue_height_m},
                   {"sim_thickness_lambda", cfg.sim_thickness_lambda},
                   {"element_spacing_lambda", cfg.element_spacing_lambda}};
  j["pathloss"] = {{"exponent", cfg.pathloss_exponent},
                   {"d0_m", cfg.ref_distance_m}};
  j["opt"] = {{"ao_rel_tol", cfg.opt.ao_rel_tol},
              {"inner_rel_tol", cfg.opt.inner_rel_tol},
              {"ao_max", cfg.opt.ao_max},
              {"pga_max", cfg.opt.pga_max},
              {"power_max", cfg.opt.power_max},
              {"pga_init_step", cfg.opt.pga_init_step},
              {"pga_decay", cfg.opt.pga_decay},
              {"multistart", cfg.opt.multistart}};
  j["seed"] = cfg.seed;
  return j.dump(2);
}

Layout build_scenario(const ScenarioConfig& cfg, std::uint64_t trial) {
  cfg.validate();
  Layout layout;
  layout.layer_gap_m = cfg.layer_gap_m();
  const double lam = cfg.wavelength();

  RngStream ap_rng(cfg.seed, trial, "ap-positions");
  layout.ap_positions.reserve(cfg.num_aps);
  for (int l = 0; l < cfg.num_aps; ++l) {
    const double x = ap_rng.next_uniform(0.0, cfg.area_side_m);
    const double y = ap_rng.next_uniform(0.0, cfg.area_side_m);
    layout.ap_positions.emplace_back(x, y, cfg.ap_height_m);
  }

  RngStream ue_rng(cfg.seed, trial, "ue-positions");
  layout.ue_positions.reserve(cfg.num_ues);
  for (int k = 0; k < cfg.num_ues; ++k) {
    const double x = ue_rng.next_uniform(0.0, cfg.area_side_m);
    const double y = ue_rng.next_uniform(0.0, cfg.area_side_m);
    layout.ue_positions.emplace_back(x, y, cfg.ue_height_m);
  }

  // Half-wavelength line array along y, centred on the AP position.
  layout.antenna_offsets.reserve(cfg.antennas_per_ap);
  for (int u = 0; u < cfg.antennas_per_ap; ++u) {
    const double y = (u - 0.5 * (cfg.antennas_per_ap - 1)) * 0.5 * lam;
    layout.antenna_offsets.emplace_back(0.0, y, 0.0);
  }

  // Centred element grid in the (y, z) layer plane; index n = ix * Ny + iy.
  const double pitch = cfg.element_spacing_lambda * lam;
  layout.atom_offsets.reserve(cfg.atoms_per_layer());
  for (int ix = 0; ix < cfg.atoms_x; ++ix) {
    for (int iy = 0; iy < cfg.atoms_y; ++iy) {
      const double y = (ix - 0.5 * (cfg.atoms_x - 1)) * pitch;
      const double z = (iy - 0.5 * (cfg.atoms_y - 1)) * pitch;
      layout.atom_offsets.emplace_back(0.0, y, z);
    }
  }
  return layout;
}

}  // namespace simcf
