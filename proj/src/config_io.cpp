#include "hetnet/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "hetnet/errors.hpp"
#include "hetnet/power_energy.hpp"
#include "hetnet/rates.hpp"

namespace hetnet {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& why) {
  throw invalid_params("config key '" + key + "': bad value '" + value + "' (" + why +
                       ")");
}

struct NumberUnit {
  double value;
  std::string unit;  // lowercase, possibly empty
};

NumberUnit split_number(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  std::size_t pos = 0;
  double num = 0.0;
  try {
    num = std::stod(v, &pos);
  } catch (const std::exception&) {
    bad_value(key, raw, "not a number");
  }
  return {num, lower(trim(v.substr(pos)))};
}

double parse_power_w(const std::string& key, const std::string& raw) {
  auto [num, unit] = split_number(key, raw);
  if (unit.empty() || unit == "w") return num;
  if (unit == "dbm") return dbm_to_watts(num);
  if (unit == "mw") return num * 1e-3;
  if (unit == "kw") return num * 1e3;
  bad_value(key, raw, "expected W, mW, kW, or dBm");
}

double parse_coding(const std::string& key, const std::string& raw) {
  auto [num, unit] = split_number(key, raw);
  // Coding energies default to W per Gb; stored as W per bit/s.
  if (unit.empty() || unit == "w_per_gb") return num * 1e-9;
  if (unit == "w_per_bps") return num;
  bad_value(key, raw, "expected W_per_Gb or W_per_bps");
}

double parse_density(const std::string& key, const std::string& raw) {
  auto [num, unit] = split_number(key, raw);
  if (unit.empty() || unit == "per_m2") return num;
  if (unit == "per_km2") return num * 1e-6;
  bad_value(key, raw, "expected per_m2 or per_km2");
}

double parse_freq(const std::string& key, const std::string& raw) {
  auto [num, unit] = split_number(key, raw);
  if (unit.empty() || unit == "hz") return num;
  if (unit == "khz") return num * 1e3;
  if (unit == "mhz") return num * 1e6;
  if (unit == "ghz") return num * 1e9;
  bad_value(key, raw, "expected Hz, kHz, MHz, or GHz");
}

double parse_db(const std::string& key, const std::string& raw) {
  auto [num, unit] = split_number(key, raw);
  if (unit.empty() || unit == "db") return num;
  bad_value(key, raw, "expected dB");
}

double parse_plain(const std::string& key, const std::string& raw) {
  auto [num, unit] = split_number(key, raw);
  if (!unit.empty()) bad_value(key, raw, "unexpected unit");
  return num;
}

long parse_int(const std::string& key, const std::string& raw) {
  const double v = parse_plain(key, raw);
  if (v != std::floor(v)) bad_value(key, raw, "expected an integer");
  return static_cast<long>(v);
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string v = lower(trim(raw));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, raw, "expected a boolean");
}

TddFractions& tdd_mut(ParsedConfig& c) {
  if (!c.system.is_tdd()) c.system.duplex = TddFractions{};
  return std::get<TddFractions>(c.system.duplex);
}

FddFractions& fdd_mut(ParsedConfig& c) {
  if (c.system.is_tdd()) c.system.duplex = FddFractions{};
  return std::get<FddFractions>(c.system.duplex);
}

using Setter = std::function<void(ParsedConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"system.lambda_m", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.lambda_m = parse_density(k, v);
       }},
      {"system.lambda_s", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.lambda_s = parse_density(k, v);
       }},
      {"system.lambda_u", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.lambda_u = parse_density(k, v);
       }},
      {"system.m_m", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.M_m = static_cast<int>(parse_int(k, v));
       }},
      {"system.m_s", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.M_s = static_cast<int>(parse_int(k, v));
       }},
      {"system.k_m", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.K_m = static_cast<int>(parse_int(k, v));
       }},
      {"system.k_s", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.K_s = static_cast<int>(parse_int(k, v));
       }},
      {"system.k_b", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.K_b = parse_plain(k, v);
       }},
      {"system.alpha", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.alpha = parse_plain(k, v);
       }},
      {"system.sigma2", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.sigma2 = parse_power_w(k, v);
       }},
      {"system.bandwidth", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.bandwidth_hz = parse_freq(k, v);
       }},
      {"system.zeta_b", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.zeta_b = parse_plain(k, v);
       }},
      {"system.sigma_d", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.shadow_D.sigma_dB = parse_db(k, v);
       }},
      {"system.sigma_b", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.shadow_B.sigma_dB = parse_db(k, v);
       }},
      {"duplex.mode", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         const std::string m = lower(trim(v));
         if (m == "tdd")
           tdd_mut(c);
         else if (m == "fdd")
           fdd_mut(c);
         else
           bad_value(k, v, "expected tdd or fdd");
       }},
      {"duplex.tau_m", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         tdd_mut(c).tau_m = parse_plain(k, v);
       }},
      {"duplex.tau_s", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         tdd_mut(c).tau_s = parse_plain(k, v);
       }},
      {"duplex.tau_b", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         tdd_mut(c).tau_b = parse_plain(k, v);
       }},
      {"duplex.xi_d", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         fdd_mut(c).xi_D = parse_plain(k, v);
       }},
      {"duplex.xi_b", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         fdd_mut(c).xi_B = parse_plain(k, v);
       }},
      {"sim.radius", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.sim.radius_m = parse_plain(k, v);
       }},
      {"sim.replicates", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.sim.replicates = parse_int(k, v);
       }},
      {"sim.seed", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.sim.seed = static_cast<std::uint64_t>(parse_int(k, v));
       }},
      {"sim.mode", [](ParsedConfig& c, const std::string& k, const std::string& v) {
         const std::string m = lower(trim(v));
         if (m == "gamma" || m == "gammaeffective")
           c.sim.mode = ChannelMode::GammaEffective;
         else if (m == "full" || m == "fullchannel")
           c.sim.mode = ChannelMode::FullChannel;
         else
           bad_value(k, v, "expected gamma or full");
       }},
      {"options.macro_ul_signal_bs_power",
       [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.options.macro_ul_signal_bs_power = parse_bool(k, v);
       }},
      {"options.backhaul_dl_scale_delta_exp",
       [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.options.backhaul_dl_scale_delta_exp = parse_bool(k, v);
       }},
      {"options.small_ul_ue_term_z_arg",
       [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.options.small_ul_ue_term_z_arg = parse_bool(k, v);
       }},
      {"options.fdd_bh_serving_flb",
       [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.options.fdd_bh_serving_flb = parse_bool(k, v);
       }},
      {"options.fdd_ul_all_scheduled",
       [](ParsedConfig& c, const std::string& k, const std::string& v) {
         c.system.options.fdd_ul_all_scheduled = parse_bool(k, v);
       }},
  };
  return table;
}

// Transmit/circuit/fixed power keys share one setter shape; coding keys another.
double* power_field(ParsedConfig& c, const std::string& name) {
  static const std::map<std::string, double PowerParams::*> fields = {
      {"p_mt", &PowerParams::P_mt}, {"p_st", &PowerParams::P_st},
      {"p_ut", &PowerParams::P_ut}, {"p_mb", &PowerParams::P_mb},
      {"p_sb", &PowerParams::P_sb}, {"p_ma", &PowerParams::P_ma},
      {"p_sa", &PowerParams::P_sa}, {"p_ua", &PowerParams::P_ua},
      {"p_mf", &PowerParams::P_mf}, {"p_sf", &PowerParams::P_sf}};
  auto it = fields.find(name);
  return it == fields.end() ? nullptr : &(c.power.*(it->second));
}

double* coding_field(ParsedConfig& c, const std::string& name) {
  static const std::map<std::string, double PowerParams::*> fields = {
      {"p_me", &PowerParams::P_me}, {"p_md", &PowerParams::P_md},
      {"p_se", &PowerParams::P_se}, {"p_sd", &PowerParams::P_sd},
      {"p_ue", &PowerParams::P_ue}, {"p_ud", &PowerParams::P_ud}};
  auto it = fields.find(name);
  return it == fields.end() ? nullptr : &(c.power.*(it->second));
}

}  // namespace

ParsedConfig default_config() {
  ParsedConfig cfg;
  cfg.system = SystemParams{};
  cfg.power = PowerParams{};
  cfg.power.P_mt = dbm_to_watts(47.8);
  cfg.power.P_st = dbm_to_watts(23.7);
  cfg.power.P_ut = dbm_to_watts(17.0);
  cfg.power.P_mb = cfg.power.P_mt;
  cfg.power.P_sb = cfg.power.P_st;
  cfg.sim = SimConfig{};
  return cfg;
}

void apply_preset(ParsedConfig& cfg, const std::string& name) {
  const std::string n = lower(trim(name));
  if (n == "femto") {
    cfg.power.P_st = dbm_to_watts(23.7);
    cfg.power.P_sb = cfg.power.P_st;
    cfg.power.P_sa = 0.8;
    cfg.power.P_sf = 5.2;
  } else if (n == "pico") {
    cfg.power.P_st = dbm_to_watts(30.0);
    cfg.power.P_sb = cfg.power.P_st;
    cfg.power.P_sa = 0.8;
    cfg.power.P_sf = 7.3;
  } else if (n == "light") {
    cfg.system.K_m = 25;
    cfg.system.K_s = 1;
    cfg.system.K_b = 5.0;
  } else if (n == "heavy") {
    cfg.system.K_m = 90;
    cfg.system.K_s = 3;
    cfg.system.K_b = 22.5;
  } else {
    throw invalid_params("unknown preset '" + name + "'");
  }
}

void apply_kv(ParsedConfig& cfg, const std::string& key, const std::string& value) {
  const std::string k = lower(trim(key));
  auto dot = k.find('.');
  if (dot != std::string::npos && k.substr(0, dot) == "power") {
    const std::string field = k.substr(dot + 1);
    if (double* p = power_field(cfg, field)) {
      *p = parse_power_w(k, value);
      return;
    }
    if (double* p = coding_field(cfg, field)) {
      *p = parse_coding(k, value);
      return;
    }
    throw invalid_params("unknown config key '" + key + "'");
  }
  auto it = setters().find(k);
  if (it == setters().end()) throw invalid_params("unknown config key '" + key + "'");
  it->second(cfg, k, value);
}

namespace {

void apply_config_file(ParsedConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_params("cannot open config file '" + path + "'");
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line.substr(0, line.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[' && s.back() == ']') {
      section = lower(trim(s.substr(1, s.size() - 2)));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw invalid_params(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = lower(trim(s.substr(0, eq)));
    const std::string value = trim(s.substr(eq + 1));
    try {
      if (key == "preset")
        apply_preset(cfg, value);
      else
        apply_kv(cfg, section.empty() ? key : section + "." + key, value);
    } catch (const invalid_params& e) {
      throw invalid_params(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

ParsedConfig parse_config_file(const std::string& path) {
  ParsedConfig cfg = default_config();
  apply_config_file(cfg, path);
  return cfg;
}

ParsedConfig resolve(const ExperimentSpec& spec) {
  // Precedence: explicit overrides > config file > presets > defaults.
  ParsedConfig cfg = default_config();
  for (const auto& p : spec.presets) apply_preset(cfg, p);
  if (spec.config_path) apply_config_file(cfg, *spec.config_path);
  for (const auto& kv : spec.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw invalid_params("--set expects key=value, got '" + kv + "'");
    apply_kv(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }
  if (spec.seed) cfg.sim.seed = *spec.seed;
  if (spec.replicates) cfg.sim.replicates = *spec.replicates;
  validate(cfg.system);
  return cfg;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_csv(const std::vector<std::string>& comment_lines,
              const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, std::ostream& os) {
  for (const auto& c : comment_lines) os << "# " << c << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
}

std::vector<std::string> describe_config(const ParsedConfig& c) {
  std::vector<std::string> out;
  out.push_back(std::string("artifact_version = ") + kArtifactVersion);
  auto num = [](double v) { return format_number(v); };
  out.push_back("system.lambda_m = " + num(c.system.lambda_m) + " per_m2");
  out.push_back("system.lambda_s = " + num(c.system.lambda_s) + " per_m2");
  out.push_back("system.lambda_u = " + num(c.system.lambda_u) + " per_m2");
  out.push_back("system.M_m = " + std::to_string(c.system.M_m));
  out.push_back("system.M_s = " + std::to_string(c.system.M_s));
  out.push_back("system.K_m = " + std::to_string(c.system.K_m));
  out.push_back("system.K_s = " + std::to_string(c.system.K_s));
  out.push_back("system.K_b = " + num(c.system.K_b));
  out.push_back("system.alpha = " + num(c.system.alpha));
  out.push_back("system.sigma2 = " + num(c.system.sigma2) + " W");
  out.push_back("system.bandwidth = " + num(c.system.bandwidth_hz) + " Hz");
  out.push_back("system.zeta_b = " + num(c.system.zeta_b));
  out.push_back("system.sigma_D = " + num(c.system.shadow_D.sigma_dB) + " dB");
  out.push_back("system.sigma_B = " + num(c.system.shadow_B.sigma_dB) + " dB");
  if (c.system.is_tdd()) {
    const auto& t = c.system.tdd();
    out.push_back("duplex.mode = tdd");
    out.push_back("duplex.tau_m = " + num(t.tau_m));
    out.push_back("duplex.tau_s = " + num(t.tau_s));
    out.push_back("duplex.tau_b = " + num(t.tau_b));
  } else {
    const auto& f = c.system.fdd();
    out.push_back("duplex.mode = fdd");
    out.push_back("duplex.xi_D = " + num(f.xi_D));
    out.push_back("duplex.xi_B = " + num(f.xi_B));
  }
  const auto& p = c.power;
  const std::pair<const char*, double> watts[] = {
      {"P_mt", p.P_mt}, {"P_st", p.P_st}, {"P_ut", p.P_ut}, {"P_mb", p.P_mb},
      {"P_sb", p.P_sb}, {"P_ma", p.P_ma}, {"P_sa", p.P_sa}, {"P_ua", p.P_ua},
      {"P_mf", p.P_mf}, {"P_sf", p.P_sf}};
  for (const auto& [name, v] : watts)
    out.push_back(std::string("power.") + name + " = " + num(v) + " W");
  const std::pair<const char*, double> coding[] = {{"P_me", p.P_me}, {"P_md", p.P_md},
                                                   {"P_se", p.P_se}, {"P_sd", p.P_sd},
                                                   {"P_ue", p.P_ue}, {"P_ud", p.P_ud}};
  for (const auto& [name, v] : coding)
    out.push_back(std::string("power.") + name + " = " + num(v * 1e9) + " W_per_Gb");
  out.push_back("sim.radius = " + num(c.sim.radius_m));
  out.push_back("sim.replicates = " + std::to_string(c.sim.replicates));
  out.push_back("sim.seed = " + std::to_string(c.sim.seed));
  out.push_back(std::string("sim.mode = ") +
                (c.sim.mode == ChannelMode::GammaEffective ? "gamma" : "full"));
  const auto& o = c.system.options;
  out.push_back(std::string("options.macro_ul_signal_bs_power = ") +
                (o.macro_ul_signal_bs_power ? "true" : "false"));
  out.push_back(std::string("options.backhaul_dl_scale_delta_exp = ") +
                (o.backhaul_dl_scale_delta_exp ? "true" : "false"));
  out.push_back(std::string("options.small_ul_ue_term_z_arg = ") +
                (o.small_ul_ue_term_z_arg ? "true" : "false"));
  out.push_back(std::string("options.fdd_bh_serving_flb = ") +
                (o.fdd_bh_serving_flb ? "true" : "false"));
  out.push_back(std::string("options.fdd_ul_all_scheduled = ") +
                (o.fdd_ul_all_scheduled ? "true" : "false"));
  return out;
}

namespace {

std::vector<std::string> rate_header() {
  return {"R_m_DL", "R_m_UL", "R_s_DL", "R_s_UL", "R_b_DL", "R_b_UL"};
}

void append_rates(std::vector<std::string>& row, const RateBundle& r) {
  row.push_back(format_number(r.R_m_DL));
  row.push_back(format_number(r.R_m_UL));
  row.push_back(format_number(r.R_s_DL));
  row.push_back(format_number(r.R_s_UL));
  row.push_back(format_number(r.R_b_DL));
  row.push_back(format_number(r.R_b_UL));
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table cmd_derive(const ParsedConfig& cfg) {
  const DerivedModel m = derive(cfg.system, cfg.power);
  Table t;
  const std::pair<const char*, double> fields[] = {
      {"delta", m.delta},       {"beta_m", m.beta_m},   {"beta_s", m.beta_s},
      {"beta_b", m.beta_b},     {"E_SD_delta", m.E_SD_delta},
      {"E_SB_delta", m.E_SB_delta}, {"a_m", m.a_m},     {"a_s", m.a_s},
      {"a_b", m.a_b},           {"G_m", m.G_m},         {"G_s", m.G_s},
      {"G_U", m.G_U},           {"lambda_u_tilde", m.lambda_u_tilde},
      {"A_m", m.A_m},           {"A_s", m.A_s},         {"nu_m_D", m.nu_m_D},
      {"nu_m_U", m.nu_m_U},     {"nu_b_D", m.nu_b_D},   {"nu_b_U", m.nu_b_U},
      {"Delta_s", double(m.Delta_s)}};
  std::vector<std::string> row;
  for (const auto& [name, v] : fields) {
    t.header.push_back(name);
    row.push_back(format_number(v));
  }
  t.rows.push_back(row);
  return t;
}

Table cmd_rates(const ParsedConfig& cfg) {
  Table t;
  t.header = rate_header();
  std::vector<std::string> row;
  append_rates(row, compute_rates(cfg.system, cfg.power));
  t.rows.push_back(row);
  return t;
}

Table cmd_power(const ParsedConfig& cfg) {
  const RateBundle r = compute_rates(cfg.system, cfg.power);
  const PowerBreakdown pb = link_powers(cfg.system, cfg.power, r);
  Table t;
  t.header = {"P_macro_link", "P_small_link", "P_backhaul_link", "P_area"};
  for (auto h : rate_header()) t.header.push_back(h);
  std::vector<std::string> row = {
      format_number(pb.P_macro_link), format_number(pb.P_small_link),
      format_number(pb.P_backhaul_link), format_number(pb.P_area)};
  append_rates(row, r);
  t.rows.push_back(row);
  return t;
}

std::vector<std::string> ee_row(double x, const EEResult& e, const char* tag) {
  std::vector<std::string> row = {tag, format_number(x), format_number(e.eta),
                                  format_number(e.area_rate),
                                  format_number(e.area_power)};
  append_rates(row, e.rates);
  return row;
}

std::vector<std::string> ee_header(const char* xname) {
  std::vector<std::string> h = {"row_type", xname, "eta", "area_rate", "area_power"};
  for (auto r : rate_header()) h.push_back(r);
  return h;
}

Table cmd_ee(const ParsedConfig& cfg) {
  Table t;
  t.header = ee_header("zeta_b");
  t.rows.push_back(ee_row(cfg.system.zeta_b,
                          energy_efficiency(cfg.system, cfg.power), "value"));
  return t;
}

Table cmd_sweep_zeta(const ParsedConfig& cfg, int grid_points) {
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i)
    grid[i] = static_cast<double>(i) / (grid_points - 1);
  const auto rows = sweep(cfg.system, cfg.power, SweepVariable::ZetaB, grid);
  Table t;
  t.header = ee_header("zeta_b");
  int best = -1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error) {
      std::vector<std::string> row = {"error", format_number(rows[i].x),
                                      *rows[i].error};
      t.rows.push_back(row);
      continue;
    }
    t.rows.push_back(ee_row(rows[i].x, rows[i].result, "grid"));
    if (best < 0 || rows[i].result.eta > rows[best].result.eta)
      best = static_cast<int>(i);
  }
  if (best >= 0) t.rows.push_back(ee_row(rows[best].x, rows[best].result, "argmax"));
  return t;
}

Table cmd_sweep_power(const ParsedConfig& cfg, int grid_points) {
  // MBS transmit power sweep, coupled P_mb = P_mt, 30..50 dBm.
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double dbm = 30.0 + 20.0 * i / (grid_points - 1);
    grid[i] = dbm_to_watts(dbm);
  }
  const auto rows = sweep(cfg.system, cfg.power, SweepVariable::PmtCoupled, grid);
  Table t;
  t.header = ee_header("P_mt_W");
  for (const auto& r : rows) {
    if (r.error)
      t.rows.push_back({"error", format_number(r.x), *r.error});
    else
      t.rows.push_back(ee_row(r.x, r.result, "grid"));
  }
  return t;
}

Table cmd_sweep_saps(const ParsedConfig& cfg, int grid_points) {
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i) grid[i] = i + 1.0;
  const auto rows = sweep(cfg.system, cfg.power, SweepVariable::SapsPerMbs, grid);
  Table t;
  t.header = ee_header("K_b");
  for (const auto& r : rows) {
    if (r.error)
      t.rows.push_back({"error", format_number(r.x), *r.error});
    else
      t.rows.push_back(ee_row(r.x, r.result, "grid"));
  }
  return t;
}

Table cmd_optimize_zeta(const ParsedConfig& cfg, int grid_points, double tol) {
  const OptimizeResult res = optimize_zeta(cfg.system, cfg.power, grid_points, tol);
  Table t;
  t.header = ee_header("zeta_star");
  t.header.push_back("flat_objective");
  auto row = ee_row(res.zeta_star, res.best, "optimum");
  row.push_back(res.flat_objective ? "true" : "false");
  t.rows.push_back(row);
  return t;
}

Table cmd_mc_validate(const ParsedConfig& cfg) {
  Table t;
  t.header = {"link", "analytic", "mc_mean", "mc_ci95", "rel_gap", "pass"};
  const RateBundle analytic = compute_rates(cfg.system, cfg.power);
  const std::pair<Link, double> links[] = {
      {Link::MacroDL, analytic.R_m_DL},   {Link::MacroUL, analytic.R_m_UL},
      {Link::SmallDL, analytic.R_s_DL},   {Link::SmallUL, analytic.R_s_UL},
      {Link::BackhaulDL, analytic.R_b_DL}, {Link::BackhaulUL, analytic.R_b_UL}};
  const char* names[] = {"macro_dl", "macro_ul", "small_dl",
                         "small_ul", "backhaul_dl", "backhaul_ul"};
  int idx = 0;
  for (const auto& [link, a] : links) {
    const RateEstimate est = estimate_rate(link, cfg.system, cfg.power, cfg.sim);
    const double gap = a > 0.0 ? std::fabs(est.mean - a) / a : std::fabs(est.mean);
    const bool ci_overlap = std::fabs(est.mean - a) <= est.ci95_halfwidth;
    t.rows.push_back({names[idx++], format_number(a), format_number(est.mean),
                      format_number(est.ci95_halfwidth), format_number(gap),
                      (gap <= 0.05 || ci_overlap) ? "PASS" : "FAIL"});
  }
  return t;
}

Table cmd_load_pmf(const ParsedConfig& cfg) {
  Table t;
  t.header = {"n", "pmf", "cumulative"};
  double cum = 0.0;
  for (int n = 0;; ++n) {
    const double p = cell_load_pmf(n, cfg.system, cfg.power);
    cum += p;
    t.rows.push_back({std::to_string(n), format_number(p), format_number(cum)});
    if (1.0 - cum < 1e-12 && n > 0) break;
    if (n > 100000) break;
  }
  return t;
}

}  // namespace

int run(const ExperimentSpec& spec) {
  try {
    const ParsedConfig cfg = resolve(spec);
    const int grid_points = spec.grid_points.value_or(33);
    const double tol = spec.tol.value_or(1e-3);
    Table t;
    if (spec.command == "derive")
      t = cmd_derive(cfg);
    else if (spec.command == "rates")
      t = cmd_rates(cfg);
    else if (spec.command == "power")
      t = cmd_power(cfg);
    else if (spec.command == "ee")
      t = cmd_ee(cfg);
    else if (spec.command == "sweep-zeta")
      t = cmd_sweep_zeta(cfg, grid_points);
    else if (spec.command == "sweep-power")
      t = cmd_sweep_power(cfg, spec.grid_points.value_or(21));
    else if (spec.command == "sweep-saps")
      t = cmd_sweep_saps(cfg, spec.grid_points.value_or(8));
    else if (spec.command == "optimize-zeta")
      t = cmd_optimize_zeta(cfg, grid_points, tol);
    else if (spec.command == "mc-validate")
      t = cmd_mc_validate(cfg);
    else if (spec.command == "load-pmf")
      t = cmd_load_pmf(cfg);
    else
      throw invalid_params("unknown command '" + spec.command + "'");

    std::vector<std::string> comments = describe_config(cfg);
    comments.push_back("command = " + spec.command);
    if (spec.output_path.empty()) {
      emit_csv(comments, t.header, t.rows, std::cout);
    } else {
      std::ofstream out(spec.output_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: io: cannot open '" << spec.output_path << "'\n";
        return 4;
      }
      emit_csv(comments, t.header, t.rows, out);
    }
    return 0;
  } catch (const non_convergence& e) {
    std::cerr << "error: non_convergence: " << e.what() << "\n";
    return 3;
  } catch (const degenerate_model& e) {
    std::cerr << "error: degenerate_model: " << e.what() << "\n";
    return 3;
  } catch (const invalid_params& e) {
    std::cerr << "error: invalid_params: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "error: domain_error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hetnet
