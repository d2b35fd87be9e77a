#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gsg/cli_io.hpp"

using namespace gsg;
using namespace gsg::io;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("gsg_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string key_path_of(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key_path();
  }
  return "<accepted>";
}

}  // namespace

TEST(Config, PresetExpandsToScreenedExperiment) {
  const RunConfig c = parse_config_text(R"({"preset": "paper-2017-screened"})");
  EXPECT_EQ(c.experiment.geometry, Geometry::parallel);
  EXPECT_EQ(c.experiment.parallel_distance, ParallelDistance::euclidean);
  EXPECT_EQ(c.experiment.j.twice(), 1);
  EXPECT_EQ(c.experiment.mass_a, 1e-14);
  EXPECT_EQ(c.experiment.delta_x, 2.5e-4);
  EXPECT_EQ(c.experiment.delta_s, 5e-5);
  EXPECT_EQ(c.experiment.tau, 2.0);
  EXPECT_EQ(c.gsg.mode, GsgMode::diamagnetic);

  const RunConfig o = parse_config_text(R"({"experiment": {"j": 2}})", std::string(preset_screened));
  EXPECT_EQ(o.experiment.j.twice(), 4);
  EXPECT_EQ(o.experiment.delta_s, 5e-5);
}

TEST(Config, ExplicitExperimentWithoutPreset) {
  const RunConfig c = parse_config_text(R"({"experiment": {"geometry": "linear", "j": 1.5, "mass_a_kg": 2e-14,
      "mass_b_kg": 1e-14, "delta_x_m": 1e-4, "delta_s_m": 3e-5, "tau_s": 1.0}})");
  EXPECT_EQ(c.experiment.geometry, Geometry::linear);
  EXPECT_EQ(c.experiment.j.twice(), 3);
  EXPECT_EQ(c.experiment.mass_a, 2e-14);
  EXPECT_EQ(key_path_of(R"({"experiment": {"j": 1}})"), "experiment.mass_a_kg");
  EXPECT_EQ(key_path_of("{}"), "experiment");
}

TEST(Config, ErrorsCarryKeyPaths) {
  EXPECT_EQ(key_path_of(R"({"preset": "paper-2017-screened", "experiment": {"mass_a_kg": -1}})"),
            "experiment.mass_a_kg");
  EXPECT_EQ(key_path_of(R"({"preset": "paper-2017-screened", "experiment": {"tau_ms": 3}})"), "experiment.tau_ms");
  EXPECT_EQ(key_path_of(R"({"preset": "paper-2017-screened", "experiment": {"colour": 3}})"), "experiment.colour");
  EXPECT_EQ(key_path_of(R"({"preset": "paper-2017-screened", "experiment": {"j": 0.7}})"), "experiment.j");
  EXPECT_EQ(key_path_of(R"({"preset": "nope"})"), "preset");
  EXPECT_EQ(key_path_of(R"({"preset": "paper-2017-screened", "optimizer": {"grid_n": 2}})"), "optimizer.grid_n");
  EXPECT_EQ(key_path_of("{not json"), "<root>");
  try {
    parse_config_text(R"({"preset": "paper-2017-screened", "experiment": {"tau_ms": 3}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("tau_s"), std::string::npos);
    EXPECT_EQ(e.error_class(), ErrorClass::config);
  }
  EXPECT_THROW(parse_config_file("/nonexistent/gsg.json"), IoError);
}

TEST(Config, CanonicalFormRoundTrips) {
  const RunConfig c = parse_config_text(R"({"preset": "paper-2017-screened", "objective": "negativity",
      "family": {"name": "sss_one_axis", "chi_range": [0, 1.5]}, "sweep": {"kind": "spin", "j_list": [0.5, 3]}})");
  const std::string text = canonical_text(c);
  EXPECT_EQ(canonical_text(parse_config_text(text)), text);
  const json j = json::parse(text);
  EXPECT_EQ(j["objective"], "negativity");
  EXPECT_EQ(j["experiment"]["parallel_distance"], "euclidean");
}

TEST(Output, DoubleFormattingRoundTrips) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-0.0), "-0");
  EXPECT_EQ(format_double(1e300 * 10 * 1e300), "inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  for (double x : {1.0 / 3.0, std::numbers::pi, 6.02214076e23, 5e-324, -2.5e-4}) {
    const std::string t = format_double(x);
    double back = 0.0;
    std::from_chars(t.data(), t.data() + t.size(), back);
    EXPECT_EQ(back, x) << t;
  }
}

TEST(Output, CsvQuotingAndChecksums) {
  EXPECT_EQ(csv_quote("plain"), "plain");
  EXPECT_EQ(csv_quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_quote("two\nlines"), "\"two\nlines\"");

  CsvTable t({"name", "x_m", "n"});
  t.row({std::string("a,b"), 0.25, 3LL});
  EXPECT_EQ(t.str(), "name,x_m,n\n\"a,b\",0.25,3\n");
  EXPECT_EQ(t.rows(), 1u);
  EXPECT_THROW(t.row({1.0}), DimensionMismatchError);

  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
}

TEST(Output, UnwritableDirectoryIsAnIoError) {
  const auto p = scratch("blocker");
  std::ofstream(p) << "x";
  EXPECT_THROW(OutputDir(p / "sub"), IoError);
  std::filesystem::remove(p);
}

TEST(RunSubcommand, TablesAndManifest) {
  RunConfig c = parse_config_text(R"({"preset": "paper-2017-screened", "tables": {"j_list": [0.5, 2],
      "families": ["css"]}})");
  const auto dir = scratch("tables");
  const auto m = run_subcommand("tables", c, dir.string());
  const auto& rows = m.results["entropy"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0]["value"].get<double>(), 0.59, 0.02);
  EXPECT_NEAR(rows[1]["value"].get<double>(), 1.19, 0.02);
  EXPECT_NEAR(m.results["negativity"][1]["value"].get<double>(), -1.40, 0.02);

  const json manifest = json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(manifest["parallel_distance"], "euclidean");
  EXPECT_EQ(manifest["tool_version"], std::string(tool_version));
  for (const auto& f : manifest["outputs"]) {
    const std::string bytes = slurp(dir / f["path"].get<std::string>());
    EXPECT_EQ(f["fnv1a64"], hex64(fnv1a64(bytes)));
    EXPECT_EQ(f["bytes"].get<std::size_t>(), bytes.size());
  }

  // Same config, same bytes.
  const auto again = scratch("tables2");
  run_subcommand("tables", c, again.string(), 2);
  for (const char* f : {"table_entropy.csv", "table_negativity.csv", "summary.json"})
    EXPECT_EQ(slurp(dir / f), slurp(again / f)) << f;
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(again);
}

TEST(RunSubcommand, EvolveShowsElevenBranches) {
  const RunConfig c = parse_config_text(R"({"preset": "paper-2017-screened", "experiment": {"j": 5},
      "gsg": {"mode": "coupling_ratio", "k": 2}, "evolve": {"time_fractions_ts": [0, 1, 2]}})");
  const auto dir = scratch("evolve");
  const auto m = run_subcommand("evolve", c, dir.string());
  EXPECT_TRUE(m.results["peaks_resolved"].get<bool>());
  const auto& snaps = m.results["snapshots"];
  EXPECT_EQ(snaps[0]["peak_count"], 1);
  EXPECT_EQ(snaps[1]["peak_count"], 11);
  EXPECT_EQ(snaps[2]["peak_count"], 1);
  const double spacing = snaps[1]["mean_peak_spacing_m"].get<double>();
  EXPECT_NEAR(spacing, m.results["branch_spacing_m"].get<double>(), m.results["grid_cell_m"].get<double>());
  EXPECT_TRUE(std::filesystem::exists(dir / "density.csv"));
  std::filesystem::remove_all(dir);
}

TEST(RunSubcommand, OracleCheckPasses) {
  const RunConfig c = parse_config_text(R"({"preset": "paper-2017-screened",
      "oracle": {"j_list": [0.5, 1], "k_list": [0.2]}})");
  const auto dir = scratch("oracle");
  const auto m = run_subcommand("oracle-check", c, dir.string());
  EXPECT_TRUE(m.results["pass"].get<bool>());
  EXPECT_GE(m.results["min_fidelity"].get<double>(), 1.0 - 1e-6);
  std::filesystem::remove_all(dir);
}

TEST(RunSubcommand, EntangleReportsWitness) {
  const RunConfig c = parse_config_text(R"({"preset": "paper-2017-screened", "experiment": {"j": 1},
      "entangle": {"gellmann": true}})");
  const auto dir = scratch("entangle");
  const auto m = run_subcommand("entangle", c, dir.string());
  EXPECT_NEAR(m.results["negativity"].get<double>(), m.results["witness_expectation"].get<double>(), 1e-10);
  EXPECT_TRUE(std::filesystem::exists(dir / "witness_gellmann.csv"));
  std::filesystem::remove_all(dir);
}

TEST(RunSubcommand, UnknownNameIsAConfigError) {
  const RunConfig c = parse_config_text(R"({"preset": "paper-2017-screened"})");
  EXPECT_THROW(run_subcommand("frobnicate", c, scratch("unknown").string()), ConfigError);
}

#ifdef GSG_CLI_PATH
namespace {
int run_cli(const std::string& args) {
  const std::string cmd = std::string(GSG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
}  // namespace

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"preset": "paper-2017-screened", "experiment": {"mass_a_kg": -1}})";
  std::ofstream(dir / "ok.json") << R"({"preset": "paper-2017-screened", "tables": {"j_list": [0.5],
      "families": ["css"]}})";
  std::ofstream(dir / "blocker") << "x";
  EXPECT_EQ(run_cli("frob"), 2);
  EXPECT_EQ(run_cli("tables --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run_cli("tables --config " + (dir / "missing.json").string()), 4);
  EXPECT_EQ(run_cli("tables --config " + (dir / "ok.json").string() + " --out " + (dir / "blocker/x").string()), 4);
  EXPECT_EQ(run_cli("tables --config " + (dir / "ok.json").string() + " --out " + (dir / "o").string()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "o" / "manifest.json"));
  std::filesystem::remove_all(dir);
}
#endif
