#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli_support.hpp"

using namespace gselab;
using gselab::testing::data_path;
using gselab::testing::run;
using gselab::testing::strip_timing;

TEST_CASE("cli examples") {
  const auto energy = run({"energy", "gse", "--graph", data_path("k3.txt"), "--J", data_path("maxcut2.txt"), "--mode", "exhaustive"});
  REQUIRE(energy.code == 0);
  CHECK(energy.json()["value"].get<double>() == doctest::Approx(-4.0 / 9.0).epsilon(1e-15));
  CHECK(energy.json()["schema"] == "gse-lab/1");

  const auto cut = run({"cutnorm", "--graphon", data_path("const1.json")});
  REQUIRE(cut.code == 0);
  CHECK(cut.json()["value"].get<double>() == 1.0);
}

TEST_CASE("cli exit codes") {
  const auto unknown = run({"energy", "gse", "--graph", data_path("k3.txt"), "--J", data_path("maxcut2.txt"), "--bogus"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);

  CHECK(run({"energy", "gse", "--graph", "/nonexistent/graph.txt", "--J", data_path("maxcut2.txt")}).code == kExitInvalid);
  CHECK(run({"energy", "mgse", "--graph", data_path("k3.txt"), "--J", data_path("maxcut2.txt"), "--a", "0.2,0.2"}).code ==
        kExitInvalid);
  CHECK(run({"blowup", "--a", "0.3,0.7", "--qprime", "3", "--J", data_path("maxcut2.txt")}).code == kExitInvalid);
  CHECK(run({"sample", "--graph", data_path("k3.txt"), "--k", "4"}).code == kExitInvalid);
  CHECK(run({"--budget", "2", "energy", "gse", "--graph", data_path("k3.txt"), "--J", data_path("maxcut2.txt")}).code ==
        kExitBudget);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("global flags may follow the subcommand") {
  const std::vector<std::string> before{"--seed", "4", "--restarts", "3", "energy", "gse", "--graph", data_path("k3.txt"),
                                        "--J", data_path("maxcut2.txt"), "--mode", "heuristic"};
  const std::vector<std::string> after{"energy", "gse", "--graph", data_path("k3.txt"), "--J", data_path("maxcut2.txt"),
                                       "--mode", "heuristic", "--seed", "4", "--restarts", "3"};
  const auto a = run(before);
  const auto b = run(after);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(strip_timing(a.json()) == strip_timing(b.json()));
  CHECK(a.json()["stats"]["restarts"] == 3);
  CHECK(a.json()["stats"]["seed"] == 4);
}

TEST_CASE("cli subcommands") {
  const std::string w = data_path("blockdiag.json");
  const std::string id = data_path("identity2.txt");
  const std::string mc = data_path("maxcut2.txt");

  const auto ge = run({"graphon-energy", "--graphon", w, "--J", id, "--a", "1/2,1/2", "--oracle", "10"});
  REQUIRE(ge.code == 0);
  CHECK(ge.json()["value"].get<double>() == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(ge.json()["oracle"]["value"].get<double>() == doctest::Approx(-0.5).epsilon(1e-12));

  const auto oracle = run({"oracle", "--graphon", w, "--J", mc, "--m", "4"});
  REQUIRE(oracle.code == 0);
  CHECK(oracle.json()["value"].get<double>() == doctest::Approx(-0.25).epsilon(1e-12));

  const auto dist = run({"cutdist", "--left", w, "--right", data_path("const1.json"), "--mode", "exact"});
  REQUIRE(dist.code == 0);
  CHECK(dist.json()["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));

  const auto graphs = run({"cutdist", "--graphs", "--left", data_path("k3.txt"), "--right", data_path("k3.txt")});
  REQUIRE(graphs.code == 0);
  CHECK(graphs.json()["value"].get<double>() == 0.0);

  const auto up = run({"blowup", "--a", "1/3,2/3", "--qprime", "3", "--J", mc});
  REQUIRE(up.code == 0);
  CHECK(up.json()["source_state"] == nlohmann::json::array({1, 2, 2}));

  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"bounds", "continuity", "--graphon", w, "--J", id, "--a", "1/2,1/2", "--b", "0.4,0.6"},
        std::vector<std::string>{"bounds", "graphgraphon", "--graph", data_path("k3.txt"), "--J", mc, "--a", "1/3,2/3", "--c", "0.1"},
        std::vector<std::string>{"bounds", "lipschitz", "--left", w, "--right", data_path("const1.json"), "--J", id, "--a", "1/2,1/2"},
        std::vector<std::string>{"bounds", "blowup", "--graphon", w, "--J", mc, "--a", "1/3,2/3", "--qprime", "3"}}) {
    const auto r = run(args);
    REQUIRE(r.code == 0);
    CHECK(r.json()["pass"] == true);
    CHECK(r.json()["lhs"].get<double>() <= r.json()["rhs"].get<double>() + 1e-6);
  }

  const auto rat = run({"transform", "rationalize", "--a", "0.3,0.7", "--qprime", "4"});
  REQUIRE(rat.code == 0);
  CHECK(rat.json()["value"] == nlohmann::json::array({0.25, 0.75}));
}

TEST_CASE("cli writes csv") {
  const std::string path = "cli_test_rows.csv";
  const auto r = run({"--seed", "2", "test", "--graph", data_path("k3.txt"), "--J", data_path("maxcut2.txt"), "--k", "2",
                      "--m", "4", "--epsilon", "0.1", "--csv", path});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "index,q,J-id,threshold,value,method,seed");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 4);
  std::remove(path.c_str());
}

TEST_CASE("cli output is reproducible") {
  for (const auto& args : gselab::testing::reproducibility_invocations()) {
    const auto a = run(args);
    const auto b = run(args);
    REQUIRE(a.code == 0);
    CHECK(strip_timing(a.json()).dump() == strip_timing(b.json()).dump());
  }
}
