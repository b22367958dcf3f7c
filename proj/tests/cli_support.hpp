#pragma once

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gselab/cli.hpp"

namespace gselab::testing {

inline std::string data_path(const std::string& name) { return std::string(GSELAB_DATA_DIR) + "/" + name; }

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;

  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

inline CliRun run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"gse-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

/// The report with every timing field removed.
inline nlohmann::json strip_timing(nlohmann::json doc) {
  if (doc.is_object()) {
    doc.erase("wall_time_ms");
    for (auto& [key, value] : doc.items()) value = strip_timing(value);
  } else if (doc.is_array()) {
    for (auto& value : doc) value = strip_timing(value);
  }
  return doc;
}

/// Invocations covering every subcommand; each must reproduce byte for byte.
inline std::vector<std::vector<std::string>> reproducibility_invocations() {
  const std::string k3 = data_path("k3.txt");
  const std::string mc = data_path("maxcut2.txt");
  const std::string id = data_path("identity2.txt");
  const std::string bd = data_path("blockdiag.json");
  const std::string one = data_path("const1.json");
  return {
      {"--seed", "11", "energy", "gse", "--graph", k3, "--J", mc, "--mode", "heuristic"},
      {"energy", "mgse", "--graph", k3, "--J", mc, "--a", "1/3,2/3"},
      {"--seed", "11", "energy", "ltgse", "--graph", k3, "--J", mc, "--c", "0.2", "--mode", "heuristic"},
      {"--seed", "11", "graphon-energy", "--graphon", bd, "--J", mc, "--c", "0.2", "--oracle", "10"},
      {"--seed", "11", "graphon-energy", "--graph", k3, "--J", id, "--x", "0.5,0.6", "--upper"},
      {"oracle", "--graphon", bd, "--J", id, "--a", "1/2,1/2", "--m", "8"},
      {"cutnorm", "--graphon", bd},
      {"--seed", "11", "cutdist", "--left", bd, "--right", one},
      {"--seed", "11", "cutdist", "--left", bd, "--right", one, "--mode", "exact"},
      {"blowup", "--a", "1/3,2/3", "--qprime", "3", "--J", mc},
      {"transform", "round", "--x", "0.15,0.2", "--qprime", "10"},
      {"--seed", "11", "bounds", "continuity", "--graphon", bd, "--J", id, "--a", "1/2,1/2", "--b", "0.4,0.6"},
      {"--seed", "11", "bounds", "graphgraphon", "--graph", k3, "--J", mc, "--a", "1/3,2/3", "--c", "0.1"},
      {"--seed", "11", "bounds", "lipschitz", "--left", bd, "--right", one, "--J", id, "--a", "1/2,1/2"},
      {"--seed", "11", "bounds", "blowup", "--graphon", bd, "--J", mc, "--a", "1/3,2/3", "--qprime", "3"},
      {"--seed", "11", "sample", "--graph", k3, "--k", "2"},
      {"--seed", "11", "test", "--graph", k3, "--J", mc, "--k", "2,3", "--m", "3"},
      {"--seed", "11", "experiment", "blockdiag", "--k", "16,32", "--n", "2"},
      {"--seed", "11", "experiment", "hierarchy", "--q", "2,5", "--oracle", "0"},
  };
}

}  // namespace gselab::testing
