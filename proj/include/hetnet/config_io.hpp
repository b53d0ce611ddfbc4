#ifndef HETNET_CONFIG_IO_HPP
#define HETNET_CONFIG_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/monte_carlo.hpp"
#include "hetnet/network_model.hpp"

namespace hetnet {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct ParsedConfig {
  SystemParams system;
  PowerParams power;
  SimConfig sim;
};

/// Built-in defaults (femto-style deployment, light load, TDD 0.5).
ParsedConfig default_config();

/// Named presets: femto, pico (deployment); light, heavy (load).
void apply_preset(ParsedConfig& cfg, const std::string& name);

/// One `section.key = value` assignment; values accept unit suffixes
/// (dBm, W, per_km2, per_m2, Hz, kHz, MHz, GHz, W_per_Gb, dB).
void apply_kv(ParsedConfig& cfg, const std::string& key, const std::string& value);

/// Plain-text `key = value` file with [section] headers; `preset = name`
/// lines apply presets in place.
ParsedConfig parse_config_file(const std::string& path);

struct ExperimentSpec {
  std::string command;
  std::optional<std::string> config_path;
  std::vector<std::string> presets;
  std::vector<std::string> overrides;  // key=value, applied last
  std::string output_path;             // empty: stdout
  std::optional<std::uint64_t> seed;
  std::optional<long> replicates;
  std::optional<int> grid_points;
  std::optional<double> tol;
};

/// Resolves precedence (overrides > config file > presets > defaults).
ParsedConfig resolve(const ExperimentSpec& spec);

/// Executes a command and writes its CSV; returns a process exit code.
int run(const ExperimentSpec& spec);

/// Full round-trip precision, '.' decimal point, '\n' newlines.
std::string format_number(double v);

void emit_csv(const std::vector<std::string>& comment_lines,
              const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, std::ostream& os);

/// Comment block recording the fully resolved configuration.
std::vector<std::string> describe_config(const ParsedConfig& cfg);

}  // namespace hetnet

#endif
