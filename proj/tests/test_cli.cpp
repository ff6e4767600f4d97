#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "binoloc/cli.hpp"
#include "oracles.hpp"

using namespace binoloc;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args, std::optional<std::string> env = std::nullopt)
{
  std::ostringstream out, err;
  const int code = run_cli(args, out, err, env);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& name)
{
  auto dir = std::filesystem::temp_directory_path() / ("binoloc_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli")
{
  TEST_CASE("no arguments prints usage and exits 2")
  {
    const auto r = run({});
    CHECK(r.code == 2);
    CHECK(r.err.find("usage:") != std::string::npos);
  }

  TEST_CASE("help exits 0")
  {
    const auto r = run({"help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("usage:") != std::string::npos);
  }

  TEST_CASE("campaign flags parse into the configuration")
  {
    const auto rc = parse_args({"run", "--campaign", "landnav-hist", "--map", oracle::fixture("map1.txt"), "--trials",
                                "100", "--seed", "7"});
    CHECK(rc.command == Command::Run);
    CHECK(rc.experiment.campaign == CampaignKind::LandNavHist);
    CHECK(rc.experiment.trials == 100);
    CHECK(rc.experiment.seed == 7);
    CHECK(rc.experiment.sim.map == oracle::fixture("map1.txt"));
    CHECK(rc.workers >= 1);
  }

  TEST_CASE("out of range sensor noise is a usage error naming the key")
  {
    const auto r = run({"run", "--sensor-noise", "1.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("noise_factor") != std::string::npos);
    CHECK_THROWS_AS(parse_args({"run", "--sensor-noise", "1.5"}), ConfigError);
  }

  TEST_CASE("unknown flags and subcommands are usage errors")
  {
    CHECK(run({"run", "--frobnicate", "1"}).code == 2);
    CHECK(run({"dance"}).code == 2);
    CHECK_THROWS_AS(parse_args({"run", "--frobnicate", "1"}), UsageError);
  }

  TEST_CASE("unreadable map is reported against the map key")
  {
    const auto r = run({"match", "--map", "/nonexistent/map.txt"});
    CHECK(r.code == 2);
    CHECK(r.err.find("map") != std::string::npos);
  }

  TEST_CASE("precedence: defaults, config file, environment, flags")
  {
    const auto dir = scratch_dir("precedence");
    const auto file = dir / "exp.cfg";
    std::ofstream(file) << "seed = 5\ntrials = 12\npf.w_hat = 0.8\n";

    auto rc = parse_args({"run", "--config", file.string()});
    CHECK(rc.experiment.seed == 5);
    CHECK(rc.experiment.trials == 12);
    rc = parse_args({"run", "--config", file.string()}, std::string("9"));
    CHECK(rc.experiment.seed == 9);
    rc = parse_args({"run", "--config", file.string(), "--seed", "11", "--w-hat", "0.9"}, std::string("9"));
    CHECK(rc.experiment.seed == 11);
    CHECK(rc.experiment.sim.pf.w_hat == 0.9);
    rc = parse_args({"run"});
    CHECK(rc.experiment.seed == ExperimentConfig{}.seed);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("follow writes a trace")
  {
    const auto dir = scratch_dir("follow");
    const auto r = run({"follow", "--seed", "4", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("loop mse") != std::string::npos);
    const auto trace = dir / "trace_4.csv";
    REQUIRE(std::filesystem::exists(trace));
    std::ifstream in(trace);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x_true,y_true,phi_true,x_odom,y_odom,phi_odom,s");
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("run writes campaign files and honours the failure threshold")
  {
    const auto dir = scratch_dir("run");
    auto r = run({"run", "--campaign", "landnav-hist", "--trials", "2", "--out", dir.string(), "--workers", "2"});
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(dir / "manifest.txt"));
    CHECK(std::filesystem::exists(dir / "trials.csv"));
    // A filter that cannot converge in the time allowed fails every trial.
    r = run({"run", "--campaign", "search-hist", "--trials", "2", "--out", dir.string(), "--sim.max_time", "30",
             "--run.max_failure_rate", "0.4"});
    CHECK(r.code == 1);
    std::filesystem::remove_all(dir);
  }
}
