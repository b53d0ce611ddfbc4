#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hetnet/config_io.hpp"
#include "hetnet/errors.hpp"

using namespace hetnet;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "test_config_io_tmp_" + std::to_string(counter++) + ".txt";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("defaults are a valid femto-style light-load setup") {
  const ParsedConfig cfg = default_config();
  CHECK_NOTHROW(validate(cfg.system));
  CHECK(cfg.system.K_m == 25);
  CHECK(cfg.power.P_st == doctest::Approx(dbm_to_watts(23.7)).epsilon(1e-12));
  CHECK(cfg.power.P_mt == doctest::Approx(dbm_to_watts(47.8)).epsilon(1e-12));
  CHECK(cfg.power.P_me == doctest::Approx(0.1e-9).epsilon(1e-12));
}

TEST_CASE("presets") {
  ParsedConfig cfg = default_config();
  apply_preset(cfg, "pico");
  CHECK(cfg.power.P_st == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cfg.power.P_sb == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cfg.power.P_sf == doctest::Approx(7.3).epsilon(1e-12));
  apply_preset(cfg, "heavy");
  CHECK(cfg.system.K_m == 90);
  CHECK(cfg.system.K_s == 3);
  CHECK(cfg.system.K_b == doctest::Approx(22.5));
  apply_preset(cfg, "femto");
  CHECK(cfg.power.P_sf == doctest::Approx(5.2).epsilon(1e-12));
  CHECK_THROWS_AS(apply_preset(cfg, "nope"), invalid_params);
}

TEST_CASE("key-value parsing with unit suffixes") {
  ParsedConfig cfg = default_config();
  apply_kv(cfg, "power.P_mt", "40 dBm");
  CHECK(cfg.power.P_mt == doctest::Approx(10.0).epsilon(1e-12));
  apply_kv(cfg, "power.P_mt", "25 W");
  CHECK(cfg.power.P_mt == doctest::Approx(25.0).epsilon(1e-12));
  apply_kv(cfg, "power.P_me", "0.5 W_per_Gb");
  CHECK(cfg.power.P_me == doctest::Approx(0.5e-9).epsilon(1e-12));
  apply_kv(cfg, "system.lambda_m", "5 per_km2");
  CHECK(cfg.system.lambda_m == doctest::Approx(5e-6).epsilon(1e-12));
  apply_kv(cfg, "system.lambda_m", "3e-6 per_m2");
  CHECK(cfg.system.lambda_m == doctest::Approx(3e-6).epsilon(1e-12));
  apply_kv(cfg, "system.bandwidth", "20 MHz");
  CHECK(cfg.system.bandwidth_hz == doctest::Approx(20e6).epsilon(1e-12));
  apply_kv(cfg, "system.sigma_D", "8 dB");
  CHECK(cfg.system.shadow_D.sigma_dB == doctest::Approx(8.0));
  apply_kv(cfg, "duplex.mode", "fdd");
  CHECK(!cfg.system.is_tdd());
  apply_kv(cfg, "duplex.xi_D", "0.6");
  CHECK(cfg.system.fdd().xi_D == doctest::Approx(0.6));
  apply_kv(cfg, "options.small_ul_ue_term_z_arg", "true");
  CHECK(cfg.system.options.small_ul_ue_term_z_arg);

  CHECK_THROWS_AS(apply_kv(cfg, "system.unknown", "1"), invalid_params);
  CHECK_THROWS_AS(apply_kv(cfg, "power.P_mt", "abc"), invalid_params);
  CHECK_THROWS_AS(apply_kv(cfg, "power.P_mt", "10 furlongs"), invalid_params);
  CHECK_THROWS_AS(apply_kv(cfg, "system.M_m", "12.5"), invalid_params);
}

TEST_CASE("config file parsing with sections, comments, presets") {
  TempFile f(
      "# deployment\n"
      "preset = pico\n"
      "[system]\n"
      "lambda_s = 30 per_km2   # denser small tier\n"
      "K_m = 20\n"
      "[power]\n"
      "P_ut = 20 dBm\n"
      "[duplex]\n"
      "tau_m = 0.6\n");
  const ParsedConfig cfg = parse_config_file(f.path);
  CHECK(cfg.power.P_st == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cfg.system.lambda_s == doctest::Approx(30e-6).epsilon(1e-12));
  CHECK(cfg.system.K_m == 20);
  CHECK(cfg.power.P_ut == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(cfg.system.tdd().tau_m == doctest::Approx(0.6));

  TempFile bad("[system]\nlambda_m\n");
  CHECK_THROWS_AS(parse_config_file(bad.path), invalid_params);
  CHECK_THROWS_AS(parse_config_file("no_such_file.txt"), invalid_params);
}

TEST_CASE("resolve precedence: overrides beat file beat presets") {
  TempFile f("[system]\nK_m = 30\n");
  ExperimentSpec spec;
  spec.command = "derive";
  spec.config_path = f.path;
  spec.presets = {"heavy"};  // would set K_m = 90, applied beneath the file
  spec.overrides = {"system.K_s=2"};
  spec.seed = 17;
  const ParsedConfig cfg = resolve(spec);
  CHECK(cfg.system.K_m == 30);
  CHECK(cfg.system.K_s == 2);
  CHECK(cfg.system.K_b == doctest::Approx(22.5));  // from the preset
  CHECK(cfg.sim.seed == 17);

  ExperimentSpec invalid = spec;
  invalid.overrides = {"system.alpha=1.5"};
  CHECK_THROWS_AS(resolve(invalid), invalid_params);
}

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.2345678901234567e-13)) == 1.2345678901234567e-13);
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("csv emission") {
  std::ostringstream os;
  emit_csv({"meta = 1"}, {"a", "b"}, {{"1", "2"}, {"3", "4"}}, os);
  CHECK(os.str() == "# meta = 1\na,b\n1,2\n3,4\n");
}

TEST_CASE("run writes csv artifacts for the analytic commands") {
  for (const std::string cmd : {"derive", "load-pmf"}) {
    ExperimentSpec spec;
    spec.command = cmd;
    spec.output_path = "test_config_io_out.csv";
    CHECK(run(spec) == 0);
    std::ifstream in(spec.output_path);
    REQUIRE(in.good());
    std::string line;
    bool saw_comment = false, saw_header = false;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] == '#')
        saw_comment = true;
      else if (!saw_header) {
        saw_header = true;
        CHECK(line.find(',') != std::string::npos);
      }
    }
    CHECK(saw_comment);
    CHECK(saw_header);
    in.close();
    std::remove(spec.output_path.c_str());
  }
}

TEST_CASE("run reports invalid input with exit code 2") {
  ExperimentSpec spec;
  spec.command = "derive";
  spec.overrides = {"system.alpha=1.0"};
  CHECK(run(spec) == 2);
  ExperimentSpec unknown;
  unknown.command = "no-such-command";
  CHECK(run(unknown) == 2);
}

TEST_CASE("describe_config covers every consumed field") {
  const ParsedConfig cfg = default_config();
  const auto lines = describe_config(cfg);
  auto contains = [&](const std::string& needle) {
    for (const auto& l : lines)
      if (l.find(needle) != std::string::npos) return true;
    return false;
  };
  CHECK(contains("artifact_version"));
  CHECK(contains("system.lambda_m"));
  CHECK(contains("power.P_mt"));
  CHECK(contains("power.P_ud"));
  CHECK(contains("duplex.mode"));
  CHECK(contains("sim.seed"));
  CHECK(contains("options.small_ul_ue_term_z_arg"));
}
