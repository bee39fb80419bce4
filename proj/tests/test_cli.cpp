#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "agestruct_cli/commands.hpp"
#include "agestruct_cli/config.hpp"

namespace fs = std::filesystem;
using namespace agestruct::cli;

namespace {

const fs::path kData = AGESTRUCT_TEST_DATA;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_test_out" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(AGESTRUCT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct SweepRow {
  double param;
  double final_p;
  bool collapsed;
};

std::vector<SweepRow> read_sweep(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "param,final_P,collapsed,last_t");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string a, b, c;
    std::getline(row, a, ',');
    std::getline(row, b, ',');
    std::getline(row, c, ',');
    rows.push_back({std::stod(a), std::stod(b), c == "1" || c == "true"});
  }
  return rows;
}

}  // namespace

TEST(Config, GalleryConfigsParse) {
  const auto names = gallery_names();
  EXPECT_GE(names.size(), 5u);
  for (const auto& name : names) {
    EXPECT_NO_THROW(load_config(name, {})) << name;
  }
}

TEST(Config, OverridesApply) {
  const Config c =
      load_config("delay_birth_default", {{"run.dt", "0.02"}, {"birth.beta", "3"}});
  EXPECT_DOUBLE_EQ(c.run.dt, 0.02);
  EXPECT_DOUBLE_EQ(c.birth.beta, 3.0);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config_text("[run]\nmodel = renewal\nhorizon = 3\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[nowhere]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\ndt = fast\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nn_x = 3.5\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[run]\nmodel = unknown\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[window]\nlength = 0.1\nmin_length = 1\n"), ConfigError);
  EXPECT_THROW(load_config("no_such_config", {}), ConfigError);
  EXPECT_THROW(load_config("linear_default", {{"dt", "0.1"}}), ConfigError);
}

TEST(Cli, ConfigErrorsExitWithOne) {
  const fs::path out = scratch("config_error");
  EXPECT_EQ(run_cli("run " + (kData / "unknown_key.ini").string() + " --out " + out.string()), 1);
  EXPECT_EQ(run_cli("run no_such_config --out " + out.string()), 1);
  EXPECT_EQ(run_cli("run"), 1);
  EXPECT_EQ(run_cli("run linear_default --dt -1 --out " + out.string()), 1);
  EXPECT_EQ(run_cli("--help"), 0);
}

TEST(Cli, EllipticityViolationExitsWithTwo) {
  const fs::path out = scratch("ellipticity");
  EXPECT_EQ(run_cli("run " + (kData / "ellipticity_violation.ini").string() + " --out " +
                    out.string()),
            2);
}

TEST(Cli, SuperlinearStressCollapsesWithThree) {
  const fs::path out = scratch("stress");
  EXPECT_EQ(run_cli("run stress_superlinear --out " + out.string()), 3);
  EXPECT_TRUE(fs::exists(out / "report.txt"));
  const std::string report = slurp(out / "report.txt");
  EXPECT_NE(report.find("collapsed = true"), std::string::npos);
}

TEST(Cli, RunWritesArtifacts) {
  const fs::path out = scratch("run");
  EXPECT_EQ(run_cli("run " + (kData / "homogeneous_renewal.ini").string() + " --out " +
                    out.string()),
            0);
  for (const char* name : {"report.txt", "population.csv", "diagnostics.csv"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  const std::string population = slurp(out / "population.csv");
  EXPECT_EQ(population.substr(0, 4), "t,P\n");
  EXPECT_EQ(population.find('\r'), std::string::npos);
  EXPECT_TRUE(slurp(out / "diagnostics.csv")
                  .starts_with("window,t_start,t_end,iterations,ratio,tail_mass,ode_residual\n"));
}

TEST(Cli, SweepOrdersFinalPopulationByBirthRate) {
  const fs::path out = scratch("sweep");
  CommandOptions options;
  options.out = out;
  options.threads = 2;
  std::ostringstream log;
  ASSERT_EQ(cmd_sweep((kData / "homogeneous_renewal.ini").string(), "beta=0.5,1.0,2.0", options, log),
            exit_ok)
      << log.str();
  const auto rows = read_sweep(out / "sweep.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].param, 0.5);
  EXPECT_DOUBLE_EQ(rows[1].param, 1.0);
  EXPECT_DOUBLE_EQ(rows[2].param, 2.0);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.collapsed);
  }
  EXPECT_LT(rows[0].final_p, rows[1].final_p);
  EXPECT_LT(rows[1].final_p, rows[2].final_p);
}

TEST(Cli, SweepRejectsEmptyAxis) {
  const fs::path out = scratch("sweep_empty");
  const std::string config = (kData / "homogeneous_renewal.ini").string();
  EXPECT_EQ(run_cli("sweep " + config + " --axis beta= --out " + out.string()), 1);
  EXPECT_EQ(run_cli("sweep " + config + " --axis beta --out " + out.string()), 1);
  EXPECT_EQ(run_cli("sweep " + config + " --axis bogus=1,2 --out " + out.string()), 1);
}

TEST(Cli, SweepIsReproducible) {
  const std::string config = (kData / "homogeneous_renewal.ini").string();
  const fs::path a = scratch("sweep_a");
  const fs::path b = scratch("sweep_b");
  ASSERT_EQ(run_cli("sweep " + config + " --axis m0=0.5,1,1.5 --threads 1 --out " + a.string()), 0);
  ASSERT_EQ(run_cli("sweep " + config + " --axis m0=0.5,1,1.5 --threads 3 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
}

TEST(Cli, VerifyConservationPasses) {
  EXPECT_EQ(run_cli("verify conservation"), 0);
  EXPECT_EQ(run_cli("verify nonsense"), 1);
}
