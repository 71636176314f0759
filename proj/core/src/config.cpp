#include "gridarb/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <functional>
#include <map>
#include <sstream>

#include "gridarb/common/csv.hpp"
#include "gridarb/common/errors.hpp"
#include "gridarb/common/time.hpp"

namespace gridarb {
namespace {

namespace pt = boost::property_tree;
using Setter = std::function<void(const std::string& value, const std::string& where)>;

double to_double(const std::string& v, const std::string& where) { return parse_double(v, where); }

long long to_integer(const std::string& v, const std::string& where) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw DataError(where + ": '" + v + "' is not an integer");
  return out;
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError(where + ": '" + v + "' is not a boolean");
}

std::vector<double> to_list(const std::string& v, const std::string& where) {
  std::istringstream in(v);
  std::vector<double> out;
  for (std::string item; in >> item;) out.push_back(to_double(item, where));
  if (out.empty()) throw DataError(where + ": empty list");
  return out;
}

Setter number(double& target) {
  return [&target](const std::string& v, const std::string& w) { target = to_double(v, w); };
}
Setter integer(int& target) {
  return [&target](const std::string& v, const std::string& w) {
    target = static_cast<int>(to_integer(v, w));
  };
}
Setter flag(bool& target) {
  return [&target](const std::string& v, const std::string& w) { target = to_bool(v, w); };
}

using Section = std::map<std::string, Setter>;

/// Applies every key of `tree` through `sections`; anything unknown is an error.
void apply(const pt::ptree& tree, std::map<std::string, Section>& sections, const std::string& source) {
  for (const auto& [name, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw DataError(source + ": key '" + name + "' outside a section");
    }
    const auto s = sections.find(name);
    if (s == sections.end()) throw DataError(source + ": unknown section [" + name + "]");
    for (const auto& [key, value] : body) {
      const auto k = s->second.find(key);
      const std::string where = source + " [" + name + "] " + key;
      if (k == s->second.end()) throw DataError(source + ": unknown key '" + key + "' in [" + name + "]");
      k->second(value.data(), where);
    }
  }
}

pt::ptree read_ini(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw DataError(source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() ? p : base / p;
}

Section electrode_keys(spm::ElectrodeParams& e, const std::filesystem::path& base) {
  return {
      {"particle_radius_m", number(e.particle_radius_m)},
      {"diffusion_ref_m2_s", number(e.diffusion_ref_m2_s)},
      {"rate_ref", number(e.rate_ref)},
      {"activation_diffusion_j_mol", number(e.activation_diffusion_j_mol)},
      {"activation_rate_j_mol", number(e.activation_rate_j_mol)},
      {"max_concentration_mol_m3", number(e.max_concentration_mol_m3)},
      {"effective_surface_per_m", number(e.effective_surface_per_m)},
      {"thickness_m", number(e.thickness_m)},
      {"stoich_empty", number(e.stoich_empty)},
      {"stoich_full", number(e.stoich_full)},
      {"ocv_csv",
       [&e, base](const std::string& v, const std::string&) { e.ocv = spm::load_ocv_csv(resolve(base, v)); }},
  };
}

spm::EntropicTable load_entropic_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv_file(path, "soc,dUdT_V_K");
  std::vector<double> soc, dudt;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(t.line_numbers[i]);
    if (t.rows[i].size() != 2) throw DataError(where + ": expected 2 fields");
    soc.push_back(parse_double(t.rows[i][0], where));
    dudt.push_back(parse_double(t.rows[i][1], where));
  }
  try {
    return spm::EntropicTable(std::move(soc), std::move(dudt));
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

spm::SpmParams parse_pack(const std::string& text, const std::filesystem::path& base,
                          const std::string& source) {
  spm::SpmParams p = spm::SpmParams::defaults();
  std::map<std::string, Section> sections{
      {"negative", electrode_keys(p.negative, base)},
      {"positive", electrode_keys(p.positive, base)},
      {"cell",
       {{"electrode_area_m2", number(p.electrode_area_m2)},
        {"electrolyte_concentration_mol_m3", number(p.electrolyte_concentration_mol_m3)},
        {"charge_transfer_alpha", number(p.charge_transfer_alpha)},
        {"reference_temperature_k", number(p.reference_temperature_k)},
        {"total_resistance_ohm", number(p.total_resistance_ohm)},
        {"nominal_voltage_v", number(p.nominal_voltage_v)},
        {"nominal_capacity_ah", number(p.nominal_capacity_ah)},
        {"nominal_energy_wh", number(p.nominal_energy_wh)},
        {"rated_current_a", number(p.rated_current_a)},
        {"shells", integer(p.shells)},
        {"voltage_floor_v", number(p.voltage_floor_v)},
        {"voltage_ceiling_v", number(p.voltage_ceiling_v)},
        {"entropic_csv",
         [&p, base](const std::string& v, const std::string&) {
           p.entropic = load_entropic_csv(resolve(base, v));
         }}}},
      {"thermal",
       {{"density_kg_m3", number(p.thermal.density_kg_m3)},
        {"heat_capacity_j_kg_k", number(p.thermal.heat_capacity_j_kg_k)},
        {"convective_coeff_w_m2_k", number(p.thermal.convective_coeff_w_m2_k)},
        {"cooling_area_m2", number(p.thermal.cooling_area_m2)},
        {"thickness_m", number(p.thermal.thickness_m)},
        {"ambient_k", number(p.thermal.ambient_k)},
        {"temperature_floor_k", number(p.temperature_floor_k)},
        {"temperature_ceiling_k", number(p.temperature_ceiling_k)}}},
      {"sei",
       {{"enabled", flag(p.sei.enabled)},
        {"beta3", number(p.sei.beta3)},
        {"alpha", number(p.sei.alpha)},
        {"diffusion_ref_m2_s", number(p.sei.diffusion_ref_m2_s)},
        {"activation_diffusion_j_mol", number(p.sei.activation_diffusion_j_mol)},
        {"activation_rate_j_mol", number(p.sei.activation_rate_j_mol)},
        {"solvent_concentration_mol_m3", number(p.sei.solvent_concentration_mol_m3)},
        {"molar_volume_m3_mol", number(p.sei.molar_volume_m3_mol)},
        {"reference_potential_v", number(p.sei.reference_potential_v)},
        {"initial_thickness_m", number(p.sei.initial_thickness_m)}}},
  };
  apply(read_ini(text, source), sections, source);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(source + ": " + e.what());
  }
  return p;
}

Scenario make_scenario(std::string id, Planner planner, double theta, double soc_min,
                       double soc_max, double v_min, double v_max) {
  Scenario s;
  s.id = std::move(id);
  s.planner = planner;
  s.objective.theta = theta;
  s.linear.soc_min = soc_min;
  s.linear.soc_max = soc_max;
  s.tester.v_min = v_min;
  s.tester.v_max = v_max;
  return s;
}

struct ScenarioOverrides {
  std::optional<double> theta, soc_min, soc_max, v_min, v_max;
  std::optional<Planner> planner;
};

Setter optional_number(std::optional<double>& target) {
  return [&target](const std::string& v, const std::string& w) { target = to_double(v, w); };
}

}  // namespace

const Scenario& StudyConfig::scenario(std::string_view id) const {
  for (const Scenario& s : scenarios) {
    if (s.id == id) return s;
  }
  throw DataError("unknown scenario '" + std::string(id) + "'");
}

StudyConfig default_study() {
  StudyConfig c;
  c.scenarios = {
      make_scenario("lm-revenue", Planner::kLinear, 1.0, 0.0, 1.0, 2.7, 4.2),
      make_scenario("lm-profit", Planner::kLinear, 0.5, 0.1, 0.9, 3.42, 4.08),
      make_scenario("pbm-profit", Planner::kSpm, 0.5, 0.0, 1.0, 2.7, 4.2),
      make_scenario("pbm-revenue", Planner::kSpm, 1.0, 0.0, 1.0, 2.7, 4.2),
  };
  return c;
}

StudyConfig parse_study(const std::string& text, const std::filesystem::path& base_dir,
                        const std::string& source) {
  StudyConfig c = default_study();
  std::map<std::string, ScenarioOverrides> overrides;
  int days = c.days;
  std::optional<long long> seed;

  std::map<std::string, Section> sections{
      {"market",
       {{"seed", [&](const std::string& v, const std::string& w) { seed = to_integer(v, w); }},
        {"days", integer(days)},
        {"start",
         [&](const std::string& v, const std::string& w) {
           try {
             c.market.start = parse_timestamp(v);
           } catch (const std::exception& e) {
             throw DataError(w + ": " + e.what());
           }
         }},
        {"prices_csv",
         [&](const std::string& v, const std::string&) {
           if (!v.empty()) c.prices_csv = resolve(base_dir, v);
         }},
        {"mean_eur_mwh", number(c.market.mean_eur_mwh)},
        {"shape_amplitude_eur_mwh", number(c.market.shape_amplitude_eur_mwh)},
        {"seasonal_level_eur_mwh", number(c.market.seasonal_level_eur_mwh)},
        {"weekend_discount_eur_mwh", number(c.market.weekend_discount_eur_mwh)},
        {"daily_noise_eur_mwh", number(c.market.daily_noise_eur_mwh)},
        {"hourly_noise_eur_mwh", number(c.market.hourly_noise_eur_mwh)},
        {"spike_probability", number(c.market.spike_probability)},
        {"spike_height_eur_mwh", number(c.market.spike_height_eur_mwh)}}},
      {"linear",
       {{"nominal_energy_wh", number(c.linear.nominal_energy_wh)},
        {"beta1", number(c.linear.beta1)},
        {"beta2_h", number(c.linear.beta2_h)},
        {"power_limit_w", number(c.linear.power_limit_w)}}},
      {"spm",
       {{"pack",
         [&](const std::string& v, const std::string&) { c.spm = load_spm_pack(resolve(base_dir, v)); }},
        {"initial_soc", number(c.initial_soc)}}},
      {"objective",
       {{"degradation_price_eur_kwh", number(c.objective.degradation_price_eur_kwh)},
        {"horizon_h", integer(c.objective.horizon_h)},
        {"commit_h", integer(c.objective.commit_h)}}},
      {"tester",
       {{"cv_cutoff_c", number(c.tester.cv_cutoff_c)},
        {"substep_s", number(c.tester.substep_s)},
        {"log_period_s",
         [&](const std::string& v, const std::string& w) { c.tester.log_period = Seconds{to_integer(v, w)}; }}}},
      {"checkup",
       {{"every_days", integer(c.experiment.checkup_every_days)},
        {"baseline", flag(c.experiment.baseline_checkup)},
        {"cycles", integer(c.checkup.cycles)},
        {"rate_c", number(c.checkup.rate_c)},
        {"cutoff_c", number(c.checkup.cutoff_c)},
        {"rest_h", number(c.checkup.rest_h)},
        {"v_min", number(c.checkup.v_min)},
        {"v_max", number(c.checkup.v_max)},
        {"substep_s", number(c.checkup.substep_s)},
        {"count_in_fec", flag(c.checkup.count_in_fec)}}},
      {"optimizer",
       {{"substep_s", number(c.pbm.planning.substep_s)},
        {"step_levels_w",
         [&](const std::string& v, const std::string& w) { c.pbm.step_levels_w = to_list(v, w); }},
        {"sweeps_per_level", integer(c.pbm.sweeps_per_level)},
        {"multistart_zero", flag(c.pbm.multistart_zero)}}},
      {"study",
       {{"scenarios",
         [&](const std::string& v, const std::string&) {
           std::istringstream in(v);
           c.study.clear();
           for (std::string id; in >> id;) c.study.push_back(id);
         }}}},
  };
  for (const Scenario& s : c.scenarios) {
    ScenarioOverrides& o = overrides[s.id];
    sections["scenario." + s.id] = Section{
        {"planner",
         [&o](const std::string& v, const std::string& w) {
           if (v == "linear") {
             o.planner = Planner::kLinear;
           } else if (v == "spm") {
             o.planner = Planner::kSpm;
           } else {
             throw DataError(w + ": planner must be linear or spm");
           }
         }},
        {"theta", optional_number(o.theta)},
        {"soc_min", optional_number(o.soc_min)},
        {"soc_max", optional_number(o.soc_max)},
        {"v_min", optional_number(o.v_min)},
        {"v_max", optional_number(o.v_max)},
    };
  }

  apply(read_ini(text, source), sections, source);

  if (seed) {
    if (*seed < 0) throw DataError(source + ": seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(*seed);
  }
  c.days = days;
  if (c.days < 1) throw DataError(source + ": days must be >= 1");
  c.pbm.planning.power_limit_w = c.linear.power_limit_w;
  for (Scenario& s : c.scenarios) {
    const ScenarioOverrides& o = overrides[s.id];
    const double theta = o.theta.value_or(s.objective.theta);
    s.objective = c.objective;
    s.objective.theta = theta;
    const double soc_min = o.soc_min.value_or(s.linear.soc_min);
    const double soc_max = o.soc_max.value_or(s.linear.soc_max);
    s.linear = c.linear;
    s.linear.soc_min = soc_min;
    s.linear.soc_max = soc_max;
    const double v_min = o.v_min.value_or(s.tester.v_min);
    const double v_max = o.v_max.value_or(s.tester.v_max);
    s.tester = c.tester;
    s.tester.v_min = v_min;
    s.tester.v_max = v_max;
    if (o.planner) s.planner = *o.planner;
    try {
      s.objective.validate();
      s.linear.validate();
      s.tester.validate();
    } catch (const std::invalid_argument& e) {
      throw DataError(source + " [scenario." + s.id + "]: " + e.what());
    }
  }
  for (const std::string& id : c.study) c.scenario(id);
  return c;
}

StudyConfig load_study(const std::filesystem::path& path) {
  return parse_study(read_text_file(path), path.parent_path(), path.string());
}

spm::SpmParams load_spm_pack(const std::filesystem::path& path) {
  return parse_pack(read_text_file(path), path.parent_path(), path.string());
}

}  // namespace gridarb
